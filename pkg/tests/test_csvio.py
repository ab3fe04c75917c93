"""CSV schema and determinism of the writers."""
import numpy as np

from semigrouplab.association import make_association_report
from semigrouplab.csvio import (write_association, write_pairings,
                                write_snapshot)
from semigrouplab.spectral import Grid, GridFunction


def test_snapshot_schema_1d(tmp_path):
    g = Grid(1, 2.0, 8)
    u = GridFunction(g, np.arange(8) * (1 + 2j))
    path = tmp_path / "snap.csv"
    write_snapshot(path, u)
    lines = path.read_text().splitlines()
    assert lines[0] == "x,re,im"
    assert len(lines) == 9
    first = lines[1].split(",")
    assert float(first[0]) == -2.0


def test_snapshot_schema_2d(tmp_path):
    g = Grid(2, 1.0, 4)
    u = GridFunction(g, np.ones((4, 4)))
    path = tmp_path / "snap2.csv"
    write_snapshot(path, u)
    lines = path.read_text().splitlines()
    assert lines[0] == "x,y,re,im"
    assert len(lines) == 17


def test_association_csv_and_sidecar(tmp_path):
    rep = make_association_report([4, 8, 16, 32], [1.0, 0.5, 0.25, 0.125],
                                  label="demo")
    path = tmp_path / "assoc.csv"
    write_association(path, rep)
    lines = path.read_text().splitlines()
    assert lines[0] == "n,norm"
    assert lines[1].startswith("4,")
    sidecar = (tmp_path / "assoc_summary.txt").read_text()
    assert '"verdict": "associated"' in sidecar


def test_pairings_sorted_and_typed(tmp_path):
    pairings = {(8, "psiB"): 1 + 2j, (4, "psiA"): 3 + 0j, (4, "psiB"): 0j}
    path = tmp_path / "pair.csv"
    write_pairings(path, pairings)
    lines = path.read_text().splitlines()
    assert lines[0] == "n,psi_id,re_pair,im_pair"
    assert lines[1].split(",")[:2] == ["4", "psiA"]
    assert lines[2].split(",")[:2] == ["4", "psiB"]


def test_writer_is_reproducible(tmp_path):
    rep = make_association_report([4, 8, 16, 32], [1 / 3, 1 / 7, 1 / 13, 1 / 29])
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_association(a, rep)
    write_association(b, rep)
    assert a.read_bytes() == b.read_bytes()
