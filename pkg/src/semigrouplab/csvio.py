"""Deterministic CSV and summary writers.

All floats are rendered with repr (shortest round-trip form), rows follow
the iteration order of the inputs, and nothing time- or platform-dependent
enters the files, so identical runs produce byte-identical outputs.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Mapping, Sequence

from .association import AssociationReport
from .cauchy import MildSolutionSeq
from .semigroup import GrowthCertificate
from .spectral import GridFunction


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, complex):
        return repr(value.real) if value.imag == 0 else repr(value)
    return str(value)


def write_rows(path: Path, header: Sequence[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_snapshot(path: Path, u: GridFunction) -> None:
    """GridFunction samples: columns x (or x,y), re, im."""
    g = u.grid
    if g.dimension == 1:
        x = g.coords()
        rows = ((float(x[j]), float(u.values[j].real), float(u.values[j].imag))
                for j in range(g.points))
        write_rows(path, ["x", "re", "im"], rows)
    else:
        xs, ys = g.coords()
        rows = ((float(xs[i, j]), float(ys[i, j]),
                 float(u.values[i, j].real), float(u.values[i, j].imag))
                for i in range(g.points) for j in range(g.points))
        write_rows(path, ["x", "y", "re", "im"], rows)


def write_certificate(path: Path, cert: GrowthCertificate) -> None:
    fit_c = cert.resolvent_fit.constant if cert.resolvent_fit else ""
    fit_a = cert.resolvent_fit.slope if cert.resolvent_fit else ""
    rows = ((n, cert.resolvent_bounds[n], cert.semigroup_bounds[n],
             cert.omega, cert.b, fit_c, fit_a) for n in cert.n_list)
    write_rows(path, ["n", "M_n", "M_prime_n", "omega", "b", "fitted_C", "fitted_a"], rows)


def write_association(path: Path, report: AssociationReport) -> None:
    """Norm table plus a JSON summary sidecar (verdict, slope, thresholds)."""
    rows = zip(report.indices, report.norms)
    write_rows(path, ["n", "norm"], rows)
    summary = {
        "label": report.label,
        "verdict": report.verdict,
        "slope": report.slope,
        "r_squared": report.r_squared,
        "tol_assoc": report.tol_assoc,
        "slope_min": report.slope_min,
    }
    if report.per_sequence:
        summary["sequences"] = [
            {"label": r.label, "verdict": r.verdict, "slope": r.slope}
            for r in report.per_sequence]
    sidecar = path.with_name(path.stem + "_summary.txt")
    sidecar.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")


def write_solution(path: Path, sol: MildSolutionSeq, stride: int = 1) -> None:
    """Solution samples: columns n, t, x, re_w, im_w (1D grids)."""
    g = sol.grid
    if g.dimension != 1:
        raise ValueError("solution CSV export is defined for 1D grids")
    x = g.coords()

    def rows():
        for n in sol.indices():
            w = sol.w_values(n)
            for j in range(0, len(sol.t_grid), stride):
                t = float(sol.t_grid[j])
                for i in range(g.points):
                    yield (n, t, float(x[i]), float(w[j, i].real), float(w[j, i].imag))

    write_rows(path, ["n", "t", "x", "re_w", "im_w"], rows())


def write_pairings(path: Path, pairings: Mapping) -> None:
    """Pairing table: columns n, psi_id, re_pair, im_pair."""
    items = sorted(pairings.items(), key=lambda kv: (kv[0][1], kv[0][0]))
    rows = ((n, label, float(v.real), float(v.imag)) for (n, label), v in items)
    write_rows(path, ["n", "psi_id", "re_pair", "im_pair"], rows)
