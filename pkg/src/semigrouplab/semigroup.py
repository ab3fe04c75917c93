"""Integrated semigroups, resolvents, and growth certification for multiplier families.

Every operator here is diagonal in frequency: a scalar field over the grid
frequencies applied as F^-1 (factor . F u).  The once-integrated semigroup of
a symbol a has per-mode factor

    phi(t, a) = integral_0^t exp(s a) ds = (exp(t a) - 1) / a,

an entire function of a evaluated through a Taylor branch near t a = 0.  The
resolvent factor is 1/(lambda - a).  The Laplace identity
R(lambda) = lambda integral_0^inf exp(-lambda t) S(t) dt and the Bromwich
contour inversion are implemented as quadratures and serve as mutual oracles.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import OverflowGuardError, ResolventSingularityError, SymbolEvaluationError
from .quadrature import composite_gauss_points, trapezoid_weights
from .spectral import Grid, GridFunction, lp_norm
from .symbols import SymbolSeq

#: admissibility margin for 1/(lambda - a) conditioning
RESOLVENT_MARGIN = 1e-8

#: crossover to the Taylor branch of phi
PHI_TAYLOR_THRESHOLD = 1e-6

#: exp overflow guard on Re(a) * t
EXP_GUARD = 700.0


def phi(t: float, a) -> np.ndarray:
    """(exp(t a) - 1)/a, the integrated-semigroup factor; entire in a.

    For |t a| below 1e-6 the four-term Taylor expansion
    t (1 + ta/2 + (ta)^2/6 + (ta)^3/24) avoids the removable singularity.
    The exact branch is evaluated as 2 exp(ta/2) sinh(ta/2) / a, the same
    expression without the e^(ta) - 1 cancellation, so the two branches
    agree to well below 1e-12 at the crossover.
    """
    if t < 0:
        raise ValueError(f"phi needs t >= 0, got {t}")
    a = np.asarray(a, dtype=complex)
    ta = t * a
    mag = np.abs(ta)
    small = mag < PHI_TAYLOR_THRESHOLD
    mid = ~small & (mag < 1.0)
    safe = np.where(small, 1.0, a)
    with np.errstate(over="raise"):
        try:
            # cancellation-free form near zero, plain form elsewhere
            half = np.where(mid, 0.5 * ta, 0.0)
            stable = 2.0 * np.exp(half) * np.sinh(half) / safe
            plain = (np.exp(np.where(small | mid, 0.0, ta)) - 1.0) / safe
        except FloatingPointError as exc:
            raise OverflowGuardError(f"exp(t a) overflow at t={t}") from exc
    taylor = t * (1.0 + ta / 2.0 + ta**2 / 6.0 + ta**3 / 24.0)
    return np.where(small, taylor, np.where(mid, stable, plain))


def phi_at_times(times: np.ndarray, a) -> np.ndarray:
    """phi evaluated on a vector of times for broadcastable symbol values.

    Uses phi(t, a) = t * phi(1, t a); shapes follow numpy broadcasting of
    ``times`` against ``a``.
    """
    times = np.asarray(times, dtype=float)
    ta = times * np.asarray(a, dtype=complex)
    return times * phi(1.0, ta)


@dataclass(frozen=True)
class MultiplierOp:
    """A frequency-diagonal operator: factor values in FFT layout."""

    grid: Grid
    factor: np.ndarray

    def __post_init__(self):
        fac = np.array(self.factor, dtype=complex, copy=True)
        if fac.shape != self.grid.shape:
            raise ValueError(f"factor shape {fac.shape} != grid shape {self.grid.shape}")
        fac.setflags(write=False)
        object.__setattr__(self, "factor", fac)

    def apply(self, u: GridFunction) -> GridFunction:
        if u.grid != self.grid:
            raise ValueError("operand lives on a different grid")
        out = np.fft.ifftn(self.factor * np.fft.fftn(u.values))
        return GridFunction(self.grid, out)

    def l2_operator_norm(self) -> float:
        """Exact L^2 operator norm of a diagonal operator: max |factor|."""
        return float(np.max(np.abs(self.factor)))


def integrated_factor(s: SymbolSeq, n: int, t: float, grid: Grid) -> np.ndarray:
    """Per-mode factor of S_n(t)."""
    fac = phi(t, s.on_grid(n, grid))
    if not np.all(np.isfinite(fac)):
        raise SymbolEvaluationError(f"integrated factor non-finite at n={n}, t={t}")
    return fac


def apply_S(s: SymbolSeq, n: int, t: float, u: GridFunction) -> GridFunction:
    """Apply the integrated semigroup: factor phi(t, a_n(xi_k))."""
    return MultiplierOp(u.grid, integrated_factor(s, n, t, u.grid)).apply(u)


def resolvent_factor(s: SymbolSeq, n: int, lam: complex, grid: Grid,
                     margin: float = RESOLVENT_MARGIN) -> np.ndarray:
    """Per-mode factor 1/(lambda - a_n); guards spectral proximity."""
    a = s.on_grid(n, grid)
    gap = np.abs(lam - a)
    k = np.unravel_index(int(np.argmin(gap)), gap.shape)
    if gap[k] <= margin:
        xi = grid.frequency_vectors()[k]
        raise ResolventSingularityError(
            f"lambda={lam} within {margin} of symbol value at xi={xi} (n={n})")
    return 1.0 / (lam - a)


def apply_resolvent(s: SymbolSeq, n: int, lam: complex, u: GridFunction) -> GridFunction:
    """Apply R(lambda, Op a_n) as the multiplier 1/(lambda - a_n(xi_k))."""
    return MultiplierOp(u.grid, resolvent_factor(s, n, lam, u.grid)).apply(u)


def laplace_identity_residual(s: SymbolSeq, n: int, lam: float, u: GridFunction,
                              T: float, panels: int) -> float:
    """Relative defect of R(lambda) u = lambda integral_0^T e^(-lambda t) S(t) u dt.

    The truncated transform is evaluated with the composite Gauss-Legendre
    rule, per mode, and compared with the resolvent factor in L^2.  The
    caller chooses T so the dropped tail is below the target (the bundled
    scenarios use T = 40/(lambda - omega)).
    """
    grid = u.grid
    a = s.on_grid(n, grid)
    target = resolvent_factor(s, n, lam, grid)  # raises on spectral proximity
    omega = float(np.max(a.real))
    if not lam > omega:
        raise ValueError(f"need lambda > sup Re a_n = {omega}, got {lam}")
    if np.exp((omega - lam) * T) >= 1e-12:
        raise ValueError(f"T={T} leaves a truncation tail above 1e-12")
    pts, wts = composite_gauss_points(0.0, T, panels)
    quad = np.zeros(grid.shape, dtype=complex)
    for p, w in zip(pts, wts):
        quad += w * np.exp(-lam * p) * phi(p, a)
    defect = target - lam * quad
    unorm = lp_norm(u, 2)
    if unorm == 0:
        return 0.0
    residual = MultiplierOp(grid, defect).apply(u)
    return lp_norm(residual, 2) / unorm


def pseudoresolvent_residual(s: SymbolSeq, n: int, lam: complex, mu: complex,
                             u: GridFunction) -> float:
    """Relative defect of R(lam) - R(mu) = (mu - lam) R(lam) R(mu) on u."""
    grid = u.grid
    rl = resolvent_factor(s, n, lam, grid)
    rm = resolvent_factor(s, n, mu, grid)
    defect = rl - rm - (mu - lam) * rl * rm
    unorm = lp_norm(u, 2)
    if unorm == 0:
        return 0.0
    return lp_norm(MultiplierOp(grid, defect).apply(u), 2) / unorm


def bromwich_S(s: SymbolSeq, n: int, t: float, u: GridFunction, alpha: float,
               r_max: float, steps: int) -> GridFunction:
    """Contour-inversion oracle for the integrated semigroup.

    Trapezoid discretization of
    (1/2 pi) integral_-R^R e^((alpha+ir)t) R(alpha+ir) u / (alpha+ir) dr
    on the vertical line Re lambda = alpha > omega.  Truncation decays like
    1/r_max at fixed t > 0, so this is an independent, slowly converging
    check on :func:`apply_S`.
    """
    grid = u.grid
    a = s.on_grid(n, grid)
    omega = float(np.max(a.real))
    if not alpha > omega:
        raise ValueError(f"contour abscissa must exceed sup Re a_n = {omega}")
    r = np.linspace(-r_max, r_max, steps + 1)
    w = trapezoid_weights(steps + 1, r[1] - r[0])
    flat = a.reshape(-1)
    acc = np.zeros(flat.shape, dtype=complex)
    chunk = max(1, int(2e6 / max(flat.size, 1)))
    for i0 in range(0, len(r), chunk):
        lam = alpha + 1j * r[i0:i0 + chunk, None]
        gap = np.abs(lam - flat[None, :])
        if np.min(gap) <= RESOLVENT_MARGIN:
            raise ResolventSingularityError("contour passes through the numerical spectrum")
        acc += np.sum(w[i0:i0 + chunk, None] * np.exp(lam * t) / ((lam - flat[None, :]) * lam), axis=0)
    factor = (acc / (2.0 * np.pi)).reshape(grid.shape)
    return MultiplierOp(grid, factor).apply(u)


@dataclass
class GrowthCertificate:
    """Sampled growth bounds for a symbol family.

    ``resolvent_bounds`` holds M_n = max over the lambda samples of
    ||lambda^b R(lambda, A_n)||; ``semigroup_bounds`` holds M'_n = max over
    the time samples of ||e^(-omega t) t^(-b) S_n(t)||.  Both are exact
    maxima over the declared sample sets, never claims about true suprema.
    """

    omega: float
    b: float
    n_list: list
    lambda_samples: list
    t_samples: list
    resolvent_bounds: dict = field(default_factory=dict)
    semigroup_bounds: dict = field(default_factory=dict)
    resolvent_fit: object = None
    semigroup_fit: object = None


def default_lambda_samples(omega: float, count: int = 12) -> list:
    """A vertical line Re lambda = omega + 1 plus a log-spaced real ray."""
    line = [omega + 1.0 + 1j * im for im in (0.0, 0.5, 2.0, 10.0, 50.0, -0.5, -2.0, -10.0)]
    ray = [omega + 10.0**k for k in np.linspace(0, 4, max(1, count - len(line)))]
    return line + ray


def default_time_samples(t_max: float = 50.0, count: int = 40) -> list:
    """Log-spaced positive times reaching both t -> 0 and large t."""
    return list(np.logspace(-3, np.log10(t_max), count))


def certify_growth(s: SymbolSeq, n_list: Sequence[int], omega: float, b: float,
                   lambda_samples: Sequence[complex], t_samples: Sequence[float],
                   grid: Grid) -> GrowthCertificate:
    """Sample the half-plane resolvent bound and the weighted semigroup bound.

    For diagonal operators the L^2 operator norm is the max of the factor
    magnitude over the grid frequencies, so both bounds are exact maxima
    over (sample set) x (grid modes).  Moderateness exponents of M_n and
    M'_n are fitted when at least four indices are given.
    """
    from .association import fit_moderate

    cert = GrowthCertificate(omega=omega, b=b, n_list=list(n_list),
                             lambda_samples=list(lambda_samples),
                             t_samples=list(t_samples))
    for lam in lambda_samples:
        if not complex(lam).real > omega:
            raise ValueError(f"lambda sample {lam} has Re <= omega = {omega}")
    for n in n_list:
        a = s.on_grid(n, grid)
        m_res = 0.0
        for lam in lambda_samples:
            lam = complex(lam)
            gap = np.abs(lam - a)
            if np.min(gap) <= RESOLVENT_MARGIN:
                raise ResolventSingularityError(f"sample {lam} hits the numerical spectrum")
            m_res = max(m_res, float(np.max(np.abs(lam) ** b / gap)))
        m_sg = 0.0
        for t in t_samples:
            if t <= 0:
                raise ValueError("t samples must be positive")
            m_sg = max(m_sg, float(np.exp(-omega * t) * t ** (-b)
                                   * np.max(np.abs(phi(t, a)))))
        cert.resolvent_bounds[n] = m_res
        cert.semigroup_bounds[n] = m_sg
    if len(n_list) >= 4:
        cert.resolvent_fit = fit_moderate(cert.resolvent_bounds)
        cert.semigroup_fit = fit_moderate(cert.semigroup_bounds)
    return cert
