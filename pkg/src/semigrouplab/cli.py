"""Experiment harness: scenario execution, verification suites, CSV emission.

Subcommands: verify | solve | associate | perturb | growth.  Exit codes:
0 on success, 1 when an enabled suite misses its tolerance, 2 on usage or
configuration errors.  Data CSVs are the deliverable; plots are a
convenience and can be disabled with --no-plots.
"""
from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, List, Optional

import numpy as np

from . import csvio
from .association import (bundled_family_pairs, bundled_test_sequences,
                          check_generator_association,
                          check_resolvent_association,
                          check_resolvent_norm_bounds,
                          check_semigroup_association,
                          check_weighted_resolvent_association,
                          crosscheck_comparison_theorems)
from .cauchy import (ForcingSeq, bump_test_function, integral_equation_residual,
                     solve_sequence, very_weak_pairing, weak_limit_extract)
from .config import (ExperimentConfig, default_config, load_config,
                     serialize_config, time_grid)
from .errors import ConfigError, SemigroupLabError
from .perturbation import (BoundedMultiplierSeq, constant_coefficient_example,
                           perturbed_factor, perturbed_factor_closed,
                           perturbation_claims_suite)
from .quadrature import composite_gauss_points
from .semigroup import (apply_S, bromwich_S, certify_growth,
                        default_time_samples, laplace_identity_residual, phi,
                        phi_at_times, pseudoresolvent_residual)
from .spectral import (DistributionRep, Grid, GridFunction, Mollifier, lp_norm,
                       mollify)
from .symbols import (PolySymbolParams, SymbolSeq, make_fractional_symbol_seq,
                      make_poly_symbol_seq, shifted_symbol_seq)


def build_grid(cfg: ExperimentConfig) -> Grid:
    return Grid(cfg.dimension, cfg.half_width, cfg.points)


def build_family(cfg: ExperimentConfig) -> SymbolSeq:
    if cfg.family_kind == "poly":
        coeffs = tuple(cfg.coeffs)
        return make_poly_symbol_seq(PolySymbolParams(rule=lambda n: coeffs, name=cfg.name))
    rate = {"constant": lambda n: 1.0,
            "one-plus-inverse": lambda n: 1.0 + 1.0 / n}[cfg.fractional_c_rate]
    return make_fractional_symbol_seq(rate, cfg.fractional_m, cfg.dimension, bound=2.0)


def build_comparison_family(cfg: ExperimentConfig, base: SymbolSeq) -> Optional[SymbolSeq]:
    mode = cfg.comparison
    if mode == "none":
        return None
    if mode == "drift":
        if cfg.family_kind != "poly":
            raise ConfigError("drift comparison needs a polynomial family")
        coeffs = np.pad(np.asarray(cfg.coeffs, dtype=complex), (0, 3 - len(cfg.coeffs)))
        rule = lambda n: (coeffs[0] + 1.0 / n, coeffs[1], coeffs[2] + 1.0 / n)
        return make_poly_symbol_seq(PolySymbolParams(rule=rule, name=cfg.name + "+1/n"))
    if mode.startswith("shift:"):
        value = complex(mode.split(":", 1)[1])
        return shifted_symbol_seq(base, lambda n, v: np.full(v.shape[:-1], value),
                                  name=base.name + "+shift",
                                  re_bound_shift=max(0.0, value.real))
    if mode.startswith("scale:"):
        factor = float(mode.split(":", 1)[1])
        return shifted_symbol_seq(base, lambda n, v: (factor - 1.0) * base.eval(n, v),
                                  name=f"{factor}*{base.name}")
    raise ConfigError(f"unknown comparison '{mode}'")


def build_data(cfg: ExperimentConfig, grid: Grid) -> DistributionRep:
    if cfg.data_kind == "zero":
        return DistributionRep.from_function(GridFunction.zero(grid))
    if cfg.data_kind == "delta":
        return DistributionRep.delta(grid)
    if cfg.data_kind == "delta_prime":
        return DistributionRep.delta_derivative(grid)
    if cfg.data_kind == "gaussian":
        return DistributionRep.from_function(GridFunction.gaussian(grid, cfg.data_width))
    if cfg.data_kind == "file":
        raw = np.loadtxt(cfg.data_path, delimiter=",", skiprows=1)
        vals = raw[:, 1] + 1j * raw[:, 2]
        return DistributionRep.from_function(GridFunction(grid, vals.reshape(grid.shape)))
    raise ConfigError(f"unknown data kind '{cfg.data_kind}'")


def build_forcing(cfg: ExperimentConfig, grid: Grid, theta: Mollifier) -> ForcingSeq:
    if cfg.forcing_kind == "none":
        return ForcingSeq.zero(grid)
    shape = GridFunction.gaussian(grid)
    amp = cfg.forcing_amplitude

    def shape_for(n: int) -> GridFunction:
        return amp * shape

    return ForcingSeq.separable(profile=lambda t: math.cos(t),
                                shape_for=shape_for,
                                profile_derivative=lambda t: -math.sin(t))


class SuiteResult:
    def __init__(self, name: str, worst: float, tol: float, note: str = ""):
        self.name = name
        self.worst = worst
        self.tol = tol
        self.passed = worst <= tol
        self.note = note

    def row(self):
        return (self.name, self.worst, self.tol, "pass" if self.passed else "FAIL", self.note)


def _suite_laplace(cfg: ExperimentConfig, grid: Grid, s: SymbolSeq) -> SuiteResult:
    u = GridFunction.gaussian(grid)
    omega = max(0.0, s.re_bound)
    worst = 0.0
    for lam in cfg.lambda_samples:
        lam = complex(lam).real
        T = 40.0 / (lam - omega)
        for n in cfg.n_list[:2]:
            worst = max(worst, laplace_identity_residual(s, n, lam, u, T, panels=64))
    return SuiteResult("laplace-identity", worst, cfg.tol_laplace)


def _suite_pseudoresolvent(cfg: ExperimentConfig, grid: Grid, s: SymbolSeq,
                           s_tilde: Optional[SymbolSeq]) -> SuiteResult:
    rng = np.random.default_rng(20240801)
    u = GridFunction.gaussian(grid)
    families = [s] + ([s_tilde] if s_tilde is not None else [])
    floor = max(1.0, s.re_bound) + 0.5
    worst = 0.0
    for _ in range(50):
        lam = floor + rng.uniform(0.5, 50.0) + 1j * rng.uniform(-20.0, 20.0)
        mu = floor + rng.uniform(0.5, 50.0) + 1j * rng.uniform(-20.0, 20.0)
        for fam in families:
            for n in cfg.n_list[:2]:
                worst = max(worst, pseudoresolvent_residual(fam, n, lam, mu, u))
    return SuiteResult("pseudoresolvent", worst, cfg.tol_pseudoresolvent)


def _suite_functional_equation(cfg: ExperimentConfig) -> SuiteResult:
    rng = np.random.default_rng(20240802)
    worst = 0.0
    for _ in range(1000):
        t = rng.uniform(0.05, 2.0)
        sdur = rng.uniform(0.05, 2.0)
        r = rng.uniform(0.0, 100.0)
        ang = rng.uniform(0.5 * np.pi, 1.5 * np.pi)
        a = r * np.exp(1j * ang)
        lhs = complex(phi(t, a) * phi(sdur, a))
        pts, wts = composite_gauss_points(0.0, sdur, panels=64)
        rhs = np.sum(wts * (phi_at_times(t + pts, a) - phi_at_times(pts, a)))
        worst = max(worst, abs(lhs - complex(rhs)))
    return SuiteResult("functional-equation", worst, cfg.tol_functional_equation)


def _suite_bromwich(cfg: ExperimentConfig, grid: Grid, s: SymbolSeq) -> SuiteResult:
    u = GridFunction.gaussian(grid)
    alpha = max(2.0, s.re_bound + 2.0)
    worst = 0.0
    for t in (0.25, 0.5, 1.0):
        direct = apply_S(s, cfg.n_list[0], t, u)
        contour = bromwich_S(s, cfg.n_list[0], t, u, alpha=alpha, r_max=200.0, steps=20000)
        worst = max(worst, lp_norm(direct - contour, 2))
    return SuiteResult("bromwich-oracle", worst, cfg.tol_bromwich)


def _suite_perturbation_oracle(cfg: ExperimentConfig, grid: Grid, s: SymbolSeq) -> SuiteResult:
    rng = np.random.default_rng(20240803)
    worst = 0.0
    for _ in range(1000):
        ra, rb = rng.uniform(0, 100.0, size=2)
        ta_, tb_ = rng.uniform(0.5 * np.pi, 1.5 * np.pi, size=2)
        a = ra * np.exp(1j * ta_)
        b = rb * np.exp(1j * tb_)
        t = rng.uniform(0.01, 5.0)
        pts, wts = composite_gauss_points(0.0, t, panels=64)
        integral = np.sum(wts * np.exp(pts * b) * phi_at_times(pts, a))
        quad = np.exp(t * b) * phi(t, a) - b * integral
        worst = max(worst, abs(complex(quad) - complex(phi(t, a + b))))
    return SuiteResult("perturbation-oracle", worst, cfg.tol_perturbation_oracle)


def run_verify(cfg: ExperimentConfig, out_dir: Path, jobs: int = 1) -> int:
    grid = build_grid(cfg)
    s = build_family(cfg)
    s_tilde = build_comparison_family(cfg, s)
    tasks: List[Callable[[], SuiteResult]] = [
        lambda: _suite_laplace(cfg, grid, s),
        lambda: _suite_pseudoresolvent(cfg, grid, s, s_tilde),
        lambda: _suite_functional_equation(cfg),
        lambda: _suite_bromwich(cfg, grid, s),
        lambda: _suite_perturbation_oracle(cfg, grid, s),
    ]
    results: List[SuiteResult] = []
    failures: List[str] = []
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(t) for t in tasks]
            for fut in futures:
                try:
                    results.append(fut.result())
                except SemigroupLabError as exc:
                    failures.append(f"{type(exc).__name__}: {exc}")
    else:
        for t in tasks:
            try:
                results.append(t())
            except SemigroupLabError as exc:
                failures.append(f"{type(exc).__name__}: {exc}")
    csvio.write_rows(out_dir / "verify.csv",
                     ["suite", "worst", "tolerance", "status", "note"],
                     [r.row() for r in results])
    lines = [f"{r.name}: {'pass' if r.passed else 'FAIL'} "
             f"(worst {r.worst:.3e} vs tol {r.tol:.1e})" for r in results]
    lines += [f"error: {f}" for f in failures]
    (out_dir / "verify_summary.txt").write_text("\n".join(lines) + "\n")
    for line in lines:
        print(line)
    ok = all(r.passed for r in results) and not failures
    return 0 if ok else 1


def run_solve(cfg: ExperimentConfig, out_dir: Path, make_plots: bool = True) -> int:
    grid = build_grid(cfg)
    s = build_family(cfg)
    theta = Mollifier()
    data = build_data(cfg, grid)
    forcing = build_forcing(cfg, grid, theta)
    tg = time_grid(cfg)

    def u0_for(n: int) -> GridFunction:
        return mollify(data, theta, n)

    sol = solve_sequence(s, cfg.n_list, u0_for, forcing, tg)
    csvio.write_solution(out_dir / "solution.csv", sol,
                         stride=max(1, len(tg) // 16))

    residuals = [(n, integral_equation_residual(sol, s, n, forcing, float(tg[-1])))
                 for n in cfg.n_list]
    csvio.write_rows(out_dir / "residuals.csv", ["n", "residual"], residuals)

    tests = [
        bump_test_function(grid, 0.5 * cfg.t_end, 0.4 * cfg.t_end, 0.0, 1.0, "psi0"),
        bump_test_function(grid, 0.45 * cfg.t_end, 0.35 * cfg.t_end, 0.5, 1.2, "psi1"),
        bump_test_function(grid, 0.55 * cfg.t_end, 0.4 * cfg.t_end, -0.4, 1.5, "psi2"),
    ]
    pairings = {}
    for n in cfg.n_list:
        for psi in tests:
            pairings[(n, psi.label)] = very_weak_pairing(sol, psi, n)
    csvio.write_pairings(out_dir / "pairings.csv", pairings)

    report = weak_limit_extract(pairings, tol=cfg.tol_pairing)
    rows = [(label, report.convergent[label], report.limits[label].real,
             report.limits[label].imag, ";".join(str(n) for n in report.subsequences[label]))
            for label in sorted(report.limits)]
    csvio.write_rows(out_dir / "weak_limits.csv",
                     ["psi_id", "convergent", "re_limit", "im_limit", "subsequence"], rows)

    moderate_rows = [(n, lp_norm(sol.initial_datum(n), 2),
                      max(lp_norm(sol.w(n, float(t)), 2) * math.exp(-cfg.omega * float(t))
                          for t in tg))
                     for n in cfg.n_list]
    csvio.write_rows(out_dir / "moderateness.csv",
                     ["n", "initial_l2", "sup_weighted_l2"], moderate_rows)

    if make_plots:
        _plot_solution(sol, cfg, out_dir)
    print(f"solved {len(cfg.n_list)} regularized problems; "
          f"all pairings convergent: {report.all_convergent()}")
    return 0


def run_associate(cfg: ExperimentConfig, out_dir: Path, make_plots: bool = True) -> int:
    grid = build_grid(cfg)
    s = build_family(cfg)
    s_tilde = build_comparison_family(cfg, s)
    if s_tilde is None:
        raise ConfigError("associate needs a comparison family (section [comparison])")
    f = GridFunction.gaussian(grid, cfg.data_width)
    n_list = cfg.n_list

    if cfg.comparison == "drift" and cfg.family_kind == "poly":
        rep = constant_coefficient_example(f, cfg.coeffs, n_list, cfg.t_max)
    else:
        rep = check_semigroup_association(s, s_tilde, cfg.omega,
                                          list(np.linspace(0, cfg.t_max, 21)[1:]),
                                          [lambda n: f], grid, n_list,
                                          label="semigroup-difference")
    csvio.write_association(out_dir / "association.csv", rep)

    seqs = bundled_test_sequences(grid)
    fixed = [seqs["gaussian"]]
    lam_list = [complex(l) for l in cfg.lambda_samples if complex(l).imag == 0][:2]
    gen = check_generator_association(s, s_tilde, fixed, grid, n_list, label="generator")
    res = check_resolvent_association(s, s_tilde, lam_list, fixed, grid, n_list,
                                      label="resolvent")
    weighted = check_weighted_resolvent_association(
        s, s_tilde, cfg.omega + 1.0, cfg.b,
        [cfg.omega + 2.0, cfg.omega + 2.0 + 5j], fixed, grid, n_list,
        label="weighted", rerun_semigroup=False)
    for name, r in (("generator", gen), ("resolvent", res), ("weighted", weighted)):
        csvio.write_association(out_dir / f"association_{name}.csv", r)

    bounds = check_resolvent_norm_bounds(s, n_list, lam_list, grid)
    csvio.write_rows(out_dir / "resolvent_bounds.csv",
                     ["lambda", "c1", "c2", "spread", "bounded"],
                     [(r.lambda_value, r.lower, r.upper, r.spread, r.bounded)
                      for r in bounds])

    checks = crosscheck_comparison_theorems(bundled_family_pairs(grid), lam_list or [2.0], grid)
    csvio.write_rows(out_dir / "theorem_agreement.csv",
                     ["pair", "character", "generator", "resolvent", "weighted",
                      "semigroup", "disagreements"],
                     [(c.name, c.character, c.generator, c.resolvent, c.weighted,
                       c.semigroup, ";".join(c.disagreements())) for c in checks])
    disagreements = sum(len(c.disagreements()) for c in checks)

    if make_plots:
        _plot_decay(rep, out_dir / "association_decay.png")
    print(f"scenario verdict: {rep.verdict} (slope {rep.slope:.3f}); "
          f"suite disagreements: {disagreements}")
    return 0 if disagreements == 0 else 1


def run_perturb(cfg: ExperimentConfig, out_dir: Path) -> int:
    grid = build_grid(cfg)
    s = build_family(cfg)
    s_tilde = build_comparison_family(cfg, s) or s
    B = BoundedMultiplierSeq.constant(cfg.perturb_b, name="B")
    rate = {"inverse": lambda n: 1.0 / n,
            "inverse-sqrt": lambda n: 1.0 / math.sqrt(n),
            "zero": lambda n: 0.0}[cfg.perturb_c_rate]
    C = BoundedMultiplierSeq.vanishing(rate, name="C")
    report = perturbation_claims_suite(s, s_tilde, B, C, grid, cfg.n_list,
                                   omega=cfg.omega + abs(cfg.perturb_b), b=cfg.b)

    rng = np.random.default_rng(20240804)
    worst = 0.0
    for _ in range(200):
        n = int(rng.choice(cfg.n_list))
        t = float(rng.uniform(0.1, 2.0))
        q = perturbed_factor(s, B, n, t, grid)
        c = perturbed_factor_closed(s, B, n, t, grid)
        worst = max(worst, float(np.max(np.abs(q - c))))

    csvio.write_certificate(out_dir / "perturbed_growth.csv", report.growth)
    csvio.write_association(out_dir / "perturbed_pair.csv", report.pair_association)
    csvio.write_association(out_dir / "transported_pair.csv",
                            report.transported_association)
    lines = [f"oracle max deviation: {worst:.3e} (tol {cfg.tol_perturbation_oracle:.1e})",
             f"claim 1 growth moderate: {report.verdicts['growth-moderate']}",
             f"claim 2 perturbed pair: {report.verdicts['perturbed-pair']}",
             f"claim 3 base weighted-resolvent / transported: {report.verdicts['base-weighted']} / "
             f"{report.verdicts['transported']}"]
    (out_dir / "perturb_summary.txt").write_text("\n".join(lines) + "\n")
    for line in lines:
        print(line)
    return 0 if worst <= cfg.tol_perturbation_oracle else 1


def run_growth(cfg: ExperimentConfig, out_dir: Path) -> int:
    grid = build_grid(cfg)
    s = build_family(cfg)
    omega = max(cfg.omega, s.re_bound + 0.5)
    lam = [omega + 1.0, omega + 1.0 + 5j, omega + 1.0 + 50j, omega + 10.0, omega + 100.0]
    cert = certify_growth(s, cfg.n_list, omega, cfg.b, lam,
                          default_time_samples(), grid)
    csvio.write_certificate(out_dir / "growth.csv", cert)
    print(f"certified {len(cfg.n_list)} indices at omega={omega}, b={cfg.b}")
    return 0


def _plot_solution(sol, cfg: ExperimentConfig, out_dir: Path) -> None:
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return
    if sol.grid.dimension != 1:
        return
    fig, ax = plt.subplots()
    x = sol.grid.coords()
    for n in sol.indices():
        ax.plot(x, sol.w(n, float(sol.t_grid[-1])).values.real, label=f"n={n}")
    ax.legend()
    ax.set_xlabel("x")
    ax.set_ylabel("Re w_n(T)")
    fig.savefig(out_dir / "solution.png", dpi=110)
    plt.close(fig)


def _plot_decay(report, path: Path) -> None:
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return
    fig, ax = plt.subplots()
    ax.loglog(report.indices, report.norms, "o-")
    ax.set_xlabel("n")
    ax.set_ylabel("difference norm")
    ax.set_title(f"{report.label}: {report.verdict} (slope {report.slope:.2f})")
    fig.savefig(path, dpi=110)
    plt.close(fig)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="semigrouplab",
        description="numerical laboratory for multiplier generator families")
    parser.add_argument("command",
                        choices=["verify", "solve", "associate", "perturb", "growth"])
    parser.add_argument("--config", type=str, default=None,
                        help="scenario file; a built-in default is used when omitted")
    parser.add_argument("--out", type=str, default=None, help="output directory")
    parser.add_argument("--jobs", type=int, default=1, help="parallel suite workers")
    parser.add_argument("--no-plots", action="store_true", help="skip image output")
    args = parser.parse_args(argv)

    try:
        if args.config is not None:
            cfg = load_config(args.config)
        else:
            cfg = default_config(args.command)
    except FileNotFoundError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    out_dir = Path(args.out) if args.out else Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "config_used.txt").write_text(serialize_config(cfg))

    try:
        if args.command == "verify":
            return run_verify(cfg, out_dir, jobs=max(1, args.jobs))
        if args.command == "solve":
            return run_solve(cfg, out_dir, make_plots=not args.no_plots)
        if args.command == "associate":
            return run_associate(cfg, out_dir, make_plots=not args.no_plots)
        if args.command == "perturb":
            return run_perturb(cfg, out_dir)
        return run_growth(cfg, out_dir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SemigroupLabError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
