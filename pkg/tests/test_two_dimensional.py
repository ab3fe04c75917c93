"""Two-dimensional grid coverage: transforms, mollification, solve, symbols."""
import numpy as np
import pytest

from semigrouplab.cauchy import ForcingSeq, duhamel_solve
from semigrouplab.semigroup import apply_resolvent, apply_S, phi
from semigrouplab.spectral import (DistributionRep, Grid, GridFunction,
                                   Mollifier, lp_norm, mollify, pair,
                                   spectral_l2, transform)
from semigrouplab.symbols import check_A1_A3, check_symbol_class, \
    make_fractional_symbol_seq


@pytest.fixture(scope="module")
def grid2():
    return Grid(2, 4.0, 64)


@pytest.fixture(scope="module")
def schrodinger2():
    return make_fractional_symbol_seq(lambda n: 1.0 + 1.0 / n, m=2.0, d=2)


def test_gaussian_self_dual_2d(grid2):
    uhat = transform(GridFunction.gaussian(grid2))
    fx, fy = grid2.frequencies()
    expected = np.exp(-np.pi * (fx**2 + fy**2))
    assert np.max(np.abs(uhat.values - expected)) < 1e-8


def test_parseval_2d(grid2):
    rng = np.random.default_rng(9)
    u = GridFunction(grid2, rng.standard_normal((64, 64)) * (1 + 1j))
    assert lp_norm(u, 2) == pytest.approx(spectral_l2(transform(u)), rel=1e-10)


def test_mollify_delta_2d(grid2):
    theta = Mollifier()
    out = mollify(DistributionRep.delta(grid2), theta, 2)
    assert lp_norm(out - theta.sample(grid2, 2), 1) < 1e-6
    # crude delta approximation at n=2: pairing within the second-moment error
    assert pair(out, GridFunction.gaussian(grid2, width=2.0)) == pytest.approx(
        1.0, abs=0.1)


def test_symbol_checks_2d(schrodinger2, grid2):
    rep = check_A1_A3(schrodinger2, [1, 2, 3, 4], grid2)
    for n in (1, 2, 3, 4):
        assert rep.sup_re[n] == 0.0
        assert rep.ellipticity_constants[n] == pytest.approx(1.0 + 1.0 / n, rel=1e-12)
    cls = check_symbol_class(schrodinger2, [1, 2], grid2, max_order=2)
    assert all(np.isfinite(v) for v in cls.class_constants.values())


def test_free_evolution_2d(schrodinger2, grid2):
    # diagonal application matches the per-mode factor on a pure mode
    u = GridFunction.gaussian(grid2)
    out = apply_S(schrodinger2, 2, 0.3, u)
    uhat = transform(u).values
    fx, fy = grid2.frequencies()
    a = 1j * 1.5 * (fx**2 + fy**2)
    expected = transform(apply_S(schrodinger2, 2, 0.3, u)).values
    assert np.max(np.abs(expected - phi(0.3, a) * uhat)) < 1e-10
    assert lp_norm(apply_resolvent(schrodinger2, 2, 2.0, u), 2) > 0


def test_duhamel_solve_2d(schrodinger2, grid2):
    u0 = GridFunction.gaussian(grid2)
    tg = np.arange(0.0, 0.25 + 1e-9, 1 / 32)
    sol = duhamel_solve(schrodinger2, 2, u0, ForcingSeq.zero(grid2), tg)
    # unitary evolution conserves the L^2 norm of w per mode
    assert lp_norm(sol.w(2, 0.25), 2) == pytest.approx(lp_norm(u0, 2), rel=1e-10)
