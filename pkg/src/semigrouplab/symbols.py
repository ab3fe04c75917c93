"""Symbol sequences a_n(xi) and numerical checks of their hypotheses.

Symbols are frequency-side scalar fields; each one defines a multiplier
operator through the `semigroup` module.  Built-in families cover constant-
coefficient differential operators of degree <= 2 in one dimension and the
purely imaginary fractional family i c_n |xi|^m.  All hypothesis checks are
report-generating: they compute grid extrema and growth fits but never fail
a run, except on non-finite symbol values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from .errors import HypothesisViolationError, SymbolEvaluationError, UnsupportedFamilyError
from .spectral import TWO_PI, Grid

# probe indices used when inferring family-wide constants from a rule
_PROBE_INDICES = tuple(range(1, 129))


@dataclass(frozen=True)
class SymbolSeq:
    """An indexed family n -> a_n(xi) of frequency symbols.

    ``eval`` receives the index n and an array of frequency vectors with a
    trailing axis of length ``dimension_d`` and returns complex values of the
    leading shape.  ``re_bound`` is the uniform upper bound on Re a_n used by
    growth certificates (the spectral abscissa surrogate); it is kept separate
    from the symbol order ``order_m``.
    """

    eval: Callable[[int, np.ndarray], np.ndarray]
    order_m: float
    ellipticity_r: float
    cutoff_L: float
    dimension_d: int
    re_bound: float
    name: str = ""
    poly_rule: Optional[Callable[[int], Sequence[complex]]] = None

    def __call__(self, n: int, xi_vectors: np.ndarray) -> np.ndarray:
        vals = np.asarray(self.eval(n, xi_vectors), dtype=complex)
        if not np.all(np.isfinite(vals)):
            bad = np.argwhere(~np.isfinite(vals))
            where = xi_vectors[tuple(bad[0])] if bad.size else "?"
            raise SymbolEvaluationError(
                f"symbol '{self.name}' is non-finite at n={n}, xi={where}")
        return vals

    def on_grid(self, n: int, grid: Grid) -> np.ndarray:
        """Symbol values at the grid frequencies, FFT layout."""
        return self(n, grid.frequency_vectors())


@dataclass(frozen=True)
class PolySymbolParams:
    """Coefficient rule for degree <= 2 constant-coefficient operators.

    ``rule(n)`` returns up to three complex coefficients c_0, c_1, c_2; the
    operator is c_0 + c_1 d/dx + c_2 (d/dx)^2 and its symbol is
    sum_j c_j (2 pi i xi)^j.
    """

    rule: Callable[[int], Sequence[complex]]
    name: str = "poly"

    def coeffs(self, n: int) -> np.ndarray:
        c = np.asarray(self.rule(n), dtype=complex)
        if c.ndim != 1 or c.size > 3:
            raise UnsupportedFamilyError(
                f"polynomial families support degree <= 2, got {c.size - 1}")
        return np.pad(c, (0, 3 - c.size))


@dataclass
class SymbolCheckReport:
    """Grid extrema and fits collected by the symbol hypothesis checks.

    Every stored constant is the exact extremum over the sampled grid, so
    reports are reproducible given the same grid.
    """

    name: str = ""
    grid_note: str = ""
    # |D^alpha a_n| / <xi>^(m-|alpha|) maxima, keyed (n, alpha)
    derivative_constants: dict = field(default_factory=dict)
    # per-n max over alpha of the above (the symbol-class constant C_n)
    class_constants: dict = field(default_factory=dict)
    class_fit: Optional[object] = None
    non_moderate: bool = False
    # ellipticity: per-n min over |xi|>L of |a_n|/|xi|^r, and sup 1/C_n
    ellipticity_constants: dict = field(default_factory=dict)
    c0_estimate: Optional[float] = None
    c0_ok: Optional[bool] = None
    # sup Re a_n over the grid and comparison with the declared bound
    sup_re: dict = field(default_factory=dict)
    re_bound_ok: dict = field(default_factory=dict)
    # closed-form growth abscissas for polynomial families
    omega: dict = field(default_factory=dict)
    p_condition: Optional[bool] = None


def poly_sup_re(coeffs: Sequence[complex]) -> float:
    """Closed-form sup over xi of Re(sum_j c_j (2 pi i xi)^j).

    With c_j = alpha_j + i beta_j and eta = 2 pi xi the real part is
    alpha_0 - beta_1 eta - alpha_2 eta^2, maximized at eta = -beta_1 /
    (2 alpha_2) when alpha_2 > 0; unbounded when alpha_2 < 0, or when
    alpha_2 = 0 with beta_1 != 0.
    """
    c = np.pad(np.asarray(coeffs, dtype=complex), (0, max(0, 3 - len(coeffs))))
    a0, b1, a2 = c[0].real, c[1].imag, c[2].real
    if a2 > 0:
        return a0 + b1 * b1 / (4.0 * a2)
    if a2 == 0 and b1 == 0:
        return a0
    return math.inf


def poly_omega(coeffs: Sequence[complex]) -> float:
    """max(0, sup Re) of a polynomial symbol; the per-index growth abscissa."""
    return max(0.0, poly_sup_re(coeffs))


def make_poly_symbol_seq(params: PolySymbolParams) -> SymbolSeq:
    """Symbol family of a degree <= 2 differential operator sequence (d=1).

    eval(n, xi) = sum_j c_j(n) (2 pi i xi)^j with the fixed transform
    convention, so the heat generator (4 pi^2)^-1 (d/dx)^2 has symbol -xi^2.
    """
    params.coeffs(1)  # surface degree errors early
    bound = -math.inf
    for n in _PROBE_INDICES:
        bound = max(bound, poly_sup_re(params.coeffs(n)))

    def _eval(n: int, xi_vectors: np.ndarray) -> np.ndarray:
        c = params.coeffs(n)
        z = TWO_PI * 1j * xi_vectors[..., 0]
        return c[0] + c[1] * z + c[2] * z * z

    # order/ellipticity exponent: the polynomial degree over the probe set
    deg = 0
    for n in _PROBE_INDICES[:8]:
        c = params.coeffs(n)
        nz = np.nonzero(np.abs(c) > 0)[0]
        if nz.size:
            deg = max(deg, int(nz[-1]))
    return SymbolSeq(
        eval=_eval,
        order_m=float(deg),
        ellipticity_r=float(deg),
        cutoff_L=1.0,
        dimension_d=1,
        re_bound=bound,
        name=params.name,
        poly_rule=params.rule,
    )


def make_fractional_symbol_seq(c: Callable[[int], float] | Mapping[int, float],
                               m: float, d: int,
                               bound: Optional[float] = None) -> SymbolSeq:
    """Purely imaginary family a_n(xi) = i c_n |xi|^m.

    The coefficient sequence must be uniformly bounded; when ``bound`` is
    given it is checked on probe indices, otherwise the probe values must not
    exhibit growth.  Re a_n = 0 exactly, so ``re_bound`` is 0.
    """
    rule = (lambda n: c[n]) if isinstance(c, Mapping) else c
    probes = np.array([abs(float(rule(n))) for n in _PROBE_INDICES])
    if bound is not None:
        worst = float(probes.max())
        if worst > bound * (1 + 1e-12):
            raise HypothesisViolationError(
                f"|c_n| = {worst} exceeds declared bound {bound} on sampled n")
    elif probes.max() > 0:
        # no declared bound: reject sampled growth (log-log slope over probes)
        x = np.log(np.asarray(_PROBE_INDICES, dtype=float))
        y = np.log(np.maximum(probes, 1e-300))
        slope = float(np.polyfit(x, y, 1)[0])
        if slope > 0.05 and probes.max() > 1.5 * probes.min():
            raise HypothesisViolationError(
                "sampled c_n grow with n; supply an explicit uniform bound")

    def _eval(n: int, xi_vectors: np.ndarray) -> np.ndarray:
        mag = np.sqrt(np.sum(xi_vectors * xi_vectors, axis=-1))
        return 1j * float(rule(n)) * mag ** m

    return SymbolSeq(
        eval=_eval,
        order_m=float(m),
        ellipticity_r=float(m),
        cutoff_L=1.0,
        dimension_d=d,
        re_bound=0.0,
        name="fractional",
    )


def shifted_symbol_seq(s: SymbolSeq, shift: Callable[[int, np.ndarray], np.ndarray],
                       name: str = "", re_bound_shift: float = 0.0) -> SymbolSeq:
    """A family a_n + delta_n built from ``s`` and a shift field."""
    def _eval(n: int, xi_vectors: np.ndarray) -> np.ndarray:
        return s.eval(n, xi_vectors) + shift(n, xi_vectors)

    return SymbolSeq(
        eval=_eval,
        order_m=s.order_m,
        ellipticity_r=s.ellipticity_r,
        cutoff_L=s.cutoff_L,
        dimension_d=s.dimension_d,
        re_bound=s.re_bound + re_bound_shift,
        name=name or (s.name + "+shift"),
    )


def _multi_indices(d: int, max_order: int):
    if d == 1:
        return [(k,) for k in range(max_order + 1)]
    out = []
    for total in range(max_order + 1):
        for i in range(total + 1):
            out.append((total - i, i))
    return out


def _fd_derivative(s: SymbolSeq, n: int, pts: np.ndarray, alpha: tuple, h: float) -> np.ndarray:
    """Central finite-difference D^alpha a_n at the points ``pts``."""
    order = sum(alpha)
    if order == 0:
        return s(n, pts)

    def shift(delta):
        return pts + np.asarray(delta, dtype=float)

    d = len(alpha)
    if order == 1:
        axis = alpha.index(1)
        e = np.zeros(d); e[axis] = h
        return (s(n, shift(e)) - s(n, shift(-e))) / (2 * h)
    # order 2: pure or mixed
    if 2 in alpha:
        axis = alpha.index(2)
        e = np.zeros(d); e[axis] = h
        return (s(n, shift(e)) - 2 * s(n, pts) + s(n, shift(-e))) / (h * h)
    ex = np.zeros(d); ex[0] = h
    ey = np.zeros(d); ey[1] = h
    return (s(n, shift(ex + ey)) - s(n, shift(ex - ey))
            - s(n, shift(-ex + ey)) + s(n, shift(-ex - ey))) / (4 * h * h)


def check_symbol_class(s: SymbolSeq, n_list: Sequence[int], grid: Grid,
                       max_order: int = 2) -> SymbolCheckReport:
    """Grid maxima of |D^alpha a_n| / <xi>^(m-|alpha|) for |alpha| <= max_order.

    Derivatives are central finite differences with step equal to the
    frequency-grid spacing.  The per-n constants are fitted in log-log over n
    and the family is flagged non-moderate when the fit degenerates.
    """
    from .association import fit_moderate, is_moderate_fit

    if max_order > 2:
        raise ValueError("finite-difference derivatives beyond order 2 are not attempted")
    pts = grid.frequency_vectors()
    bracket = np.sqrt(1.0 + np.sum(pts * pts, axis=-1))
    h = grid.freq_spacing
    report = SymbolCheckReport(name=s.name, grid_note=f"d={grid.dimension} N={grid.points}")
    for n in n_list:
        worst = 0.0
        for alpha in _multi_indices(s.dimension_d, max_order):
            ratio = np.abs(_fd_derivative(s, n, pts, alpha, h)) / bracket ** (s.order_m - sum(alpha))
            c = float(np.max(ratio))
            report.derivative_constants[(n, alpha)] = c
            worst = max(worst, c)
        report.class_constants[n] = worst
    if len(n_list) >= 4:
        report.class_fit = fit_moderate({n: report.class_constants[n] for n in n_list})
        report.non_moderate = not is_moderate_fit(report.class_fit)
    return report


def check_A1_A3(s: SymbolSeq, n_list: Sequence[int], grid: Grid) -> SymbolCheckReport:
    """Ellipticity constants beyond the cutoff and grid suprema of Re a_n.

    Per n this reports C_n = min over |xi| > L of |a_n(xi)| / |xi|^r and the
    grid supremum of Re a_n compared against the declared bound.  For
    polynomial families the closed-form growth abscissa is attached as well.
    """
    pts = grid.frequency_vectors()
    mag = np.sqrt(np.sum(pts * pts, axis=-1))
    outside = mag > s.cutoff_L
    report = SymbolCheckReport(name=s.name, grid_note=f"d={grid.dimension} N={grid.points}")
    if not np.any(outside):
        raise ValueError(f"grid has no frequencies beyond cutoff L={s.cutoff_L}")
    for n in n_list:
        vals = s(n, pts)
        ratios = np.abs(vals[outside]) / mag[outside] ** s.ellipticity_r
        report.ellipticity_constants[n] = float(np.min(ratios))
        sup_re = float(np.max(vals.real))
        report.sup_re[n] = sup_re
        report.re_bound_ok[n] = sup_re <= s.re_bound + 1e-12
        if s.poly_rule is not None:
            report.omega[n] = poly_omega(s.poly_rule(n))
        else:
            report.omega[n] = max(0.0, sup_re)
    cs = [report.ellipticity_constants[n] for n in n_list]
    if min(cs) > 0:
        report.c0_estimate = 1.0 / min(cs)
        report.c0_ok = True
    else:
        report.c0_estimate = math.inf
        report.c0_ok = False
    return report


def check_p_condition(p: float, r: float, m: float, d: int) -> bool:
    """Lebesgue-exponent admissibility: |1/2 - 1/p| < r / (m d)."""
    if m * d == 0:
        raise ZeroDivisionError("p-condition needs m * d != 0")
    if not 1.0 < p < math.inf:
        raise ValueError(f"p must lie in (1, inf), got {p}")
    return abs(0.5 - 1.0 / p) < r / (m * d)


def heat_symbol_seq() -> SymbolSeq:
    """The stationary heat family a_n(xi) = -xi^2 (generator (4pi^2)^-1 d^2/dx^2)."""
    params = PolySymbolParams(rule=lambda n: (0.0, 0.0, 1.0 / (4 * np.pi**2)), name="heat")
    return make_poly_symbol_seq(params)


def perturbed_heat_seq(base_coeffs: Sequence[complex] = (0.0, 0.0, 1.0 / (4 * np.pi**2)),
                               name: str = "heat+1/n") -> SymbolSeq:
    """The perturbed family with c_0 + 1/n and c_2 + 1/n coefficients."""
    base = np.pad(np.asarray(base_coeffs, dtype=complex), (0, 3 - len(base_coeffs)))

    def rule(n: int):
        return (base[0] + 1.0 / n, base[1], base[2] + 1.0 / n)

    return make_poly_symbol_seq(PolySymbolParams(rule=rule, name=name))
