"""Self-contained numerical kernel: special functions, adaptive quadrature,
bracketed root finding, a two-dimensional simplex minimizer, and a seedable
counter-based random stream.

Every routine here is pure: identical inputs produce bit-identical outputs.
Integrands handed to the quadrature routines must accept a numpy array of
abscissas and return an array of the same shape.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import BracketingError, ConvergenceError, DomainError

__all__ = [
    "QuadConfig",
    "DEFAULT_QUAD",
    "log_gamma",
    "beta_fn",
    "integrate_finite",
    "integrate_semi_infinite",
    "find_root",
    "NelderMeadOptions",
    "NelderMeadResult",
    "minimize_nelder_mead",
    "RandomState",
    "exponential_from_uniform",
]


@dataclass(frozen=True)
class QuadConfig:
    """Tolerances and subdivision budget for the adaptive integrators."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 200

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.max_subdivisions < 1:
            raise DomainError(
                f"max_subdivisions must be >= 1, got {self.max_subdivisions}"
            )


DEFAULT_QUAD = QuadConfig()


# --------------------------------------------------------------------------
# log-gamma and the Beta function
# --------------------------------------------------------------------------

# Lanczos approximation, g = 7, nine coefficients.
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for real x > 0.

    Parameters
    ----------
    x : float
        Strictly positive argument.

    Returns
    -------
    float
        ln(Gamma(x)).
    """
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    if x < 0.5:
        # reflection keeps the series argument away from the pole at 0
        return _LOG_PI - math.log(math.sin(math.pi * x)) - log_gamma(1.0 - x)
    w = x - 1.0
    acc = _LANCZOS_COEFFS[0]
    for i, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        acc += c / (w + i)
    t = w + _LANCZOS_G + 0.5
    return _HALF_LOG_TWO_PI + (w + 0.5) * math.log(t) - t + math.log(acc)


def beta_fn(p: float, q: float) -> float:
    """Euler Beta function B(p, q) for p, q > 0."""
    if not p > 0 or not q > 0:
        raise DomainError(f"beta_fn requires positive arguments, got ({p}, {q})")
    return math.exp(log_gamma(p) + log_gamma(q) - log_gamma(p + q))


# --------------------------------------------------------------------------
# adaptive Gauss-Kronrod quadrature
# --------------------------------------------------------------------------

_GK_NODES = np.array(
    [
        -0.991455371120813,
        -0.949107912342759,
        -0.864864423359769,
        -0.741531185599394,
        -0.586087235467691,
        -0.405845151377397,
        -0.207784955007898,
        0.0,
        0.207784955007898,
        0.405845151377397,
        0.586087235467691,
        0.741531185599394,
        0.864864423359769,
        0.949107912342759,
        0.991455371120813,
    ]
)
_GK_WEIGHTS_K15 = np.array(
    [
        0.022935322010529,
        0.063092092629979,
        0.104790010322250,
        0.140653259715525,
        0.169004726639267,
        0.190350578064785,
        0.204432940075298,
        0.209482141084728,
        0.204432940075298,
        0.190350578064785,
        0.169004726639267,
        0.140653259715525,
        0.104790010322250,
        0.063092092629979,
        0.022935322010529,
    ]
)
_GK_WEIGHTS_G7 = np.array(
    [
        0.129484966168870,
        0.279705391489277,
        0.381830050505119,
        0.417959183673469,
        0.381830050505119,
        0.279705391489277,
        0.129484966168870,
    ]
)


def _gk15_panel(f, a: float, b: float) -> tuple[float, float]:
    """15-point Kronrod estimate on [a, b] with |K15 - G7| as error bound."""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    values = np.asarray(f(center + half * _GK_NODES), dtype=float)
    kron = half * float(np.dot(_GK_WEIGHTS_K15, values))
    gauss = half * float(np.dot(_GK_WEIGHTS_G7, values[1::2]))
    return kron, abs(kron - gauss)


def gk15_panel(f, a: float, b: float) -> float:
    """Single non-adaptive Kronrod panel over [a, b]; no error control."""
    return _gk15_panel(f, a, b)[0]


def integrate_finite(
    f, a: float, b: float, cfg: QuadConfig = DEFAULT_QUAD
) -> float:
    """Integrate a vectorized integrand over [a, b] to the configured tolerance.

    Globally adaptive: the panel with the largest error bound is bisected
    until the summed bound drops below max(abs_tol, rel_tol * |estimate|).

    Raises
    ------
    ConvergenceError
        If the tolerance is not met within ``cfg.max_subdivisions`` panels,
        or a panel evaluates to a non-finite value. The exception carries
        the best estimate and its error bound.
    DomainError
        If a > b.
    """
    if a > b:
        raise DomainError(f"integrate_finite requires a <= b, got [{a}, {b}]")
    if a == b:
        return 0.0
    est, err = _gk15_panel(f, a, b)
    heap = [(-err, a, b, est, err)]
    total_est, total_err = est, err
    panels = 1
    while not total_err <= max(cfg.abs_tol, cfg.rel_tol * abs(total_est)):
        if not math.isfinite(total_est) or not math.isfinite(total_err):
            raise ConvergenceError(
                "integrand produced non-finite values", total_est, total_err
            )
        if panels >= cfg.max_subdivisions:
            raise ConvergenceError(
                f"tolerance not reached within {cfg.max_subdivisions} panels",
                total_est,
                total_err,
            )
        _, lo, hi, e_old, r_old = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            raise ConvergenceError(
                "panel width reached floating-point resolution",
                total_est,
                total_err,
            )
        e1, r1 = _gk15_panel(f, lo, mid)
        e2, r2 = _gk15_panel(f, mid, hi)
        total_est += e1 + e2 - e_old
        total_err += r1 + r2 - r_old
        heapq.heappush(heap, (-r1, lo, mid, e1, r1))
        heapq.heappush(heap, (-r2, mid, hi, e2, r2))
        panels += 1
    return total_est


def integrate_semi_infinite(f, cfg: QuadConfig = DEFAULT_QUAD) -> float:
    """Integrate a vectorized integrand over (0, inf).

    Applies the compactifying substitution z = t / (1 - t), which maps
    (0, inf) onto (0, 1), then subdivides adaptively. Densities with
    quadratic tail decay transform to a bounded integrand near t = 1, so
    the heavy tail costs no accuracy.
    """

    def transformed(t: np.ndarray) -> np.ndarray:
        # panels squeezed against t = 1 can evaluate at z = inf; the
        # resulting non-finite panel is caught by the adaptive loop
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            one_minus = 1.0 - t
            z = t / one_minus
            return np.asarray(f(z), dtype=float) / one_minus**2

    return integrate_finite(transformed, 0.0, 1.0, cfg)


# --------------------------------------------------------------------------
# bracketed root finding (bisection / inverse-quadratic hybrid)
# --------------------------------------------------------------------------


def find_root(f, lo: float, hi: float, tol: float = 1e-12) -> float:
    """Locate a root of f inside an explicit bracket [lo, hi].

    Requires f(lo) and f(hi) to have opposite signs (or one of them to be
    zero). Uses Brent's combination of bisection, secant, and inverse
    quadratic interpolation; terminates when the bracket width falls
    below ``tol`` plus floating-point resolution around the root.
    """
    fa, fb = float(f(lo)), float(f(hi))
    if fa == 0.0:
        return lo
    if fb == 0.0:
        return hi
    if fa * fb > 0.0:
        raise BracketingError(
            f"no sign change on [{lo}, {hi}]: f(lo)={fa}, f(hi)={fb}"
        )
    a, b = lo, hi
    c, fc = a, fa
    d = e = b - a
    for _ in range(200):
        if fb * fc > 0.0:
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * np.finfo(float).eps * abs(b) + 0.5 * tol
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0.0:
            return b
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = xm
                e = d
        else:
            d = xm
            e = d
        a, fa = b, fb
        b = b + (d if abs(d) > tol1 else math.copysign(tol1, xm))
        fb = float(f(b))
    return b


# --------------------------------------------------------------------------
# Nelder-Mead simplex minimization
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class NelderMeadOptions:
    max_iter: int = 1000
    xatol: float = 1e-9
    fatol: float = 1e-11
    initial_step: float = 0.25


@dataclass(frozen=True)
class NelderMeadResult:
    x: np.ndarray
    fun: float
    iterations: int
    converged: bool


def minimize_nelder_mead(
    f: Callable[[np.ndarray], float],
    x0: Sequence[float],
    options: NelderMeadOptions | None = None,
) -> NelderMeadResult:
    """Derivative-free simplex minimization of f starting at x0.

    Deterministic for fixed inputs. When the iteration budget runs out the
    best point found so far is returned with ``converged=False``.
    """
    opts = options or NelderMeadOptions()
    x0 = np.asarray(x0, dtype=float)
    if not math.isfinite(float(f(x0))):
        raise DomainError("objective is not finite at the starting point")
    n = x0.size

    simplex = [x0]
    for i in range(n):
        step = np.zeros(n)
        step[i] = opts.initial_step
        simplex.append(x0 + step)
    fvals = [float(f(x)) for x in simplex]

    iterations = 0
    converged = False
    while iterations < opts.max_iter:
        order = np.argsort(fvals, kind="stable")
        simplex = [simplex[i] for i in order]
        fvals = [fvals[i] for i in order]

        x_spread = max(
            float(np.max(np.abs(simplex[i] - simplex[0]))) for i in range(1, n + 1)
        )
        f_spread = fvals[-1] - fvals[0]
        if x_spread <= opts.xatol and f_spread <= opts.fatol:
            converged = True
            break

        iterations += 1
        centroid = np.mean(simplex[:-1], axis=0)
        worst, f_worst = simplex[-1], fvals[-1]

        reflected = centroid + (centroid - worst)
        f_reflected = float(f(reflected))
        if f_reflected < fvals[0]:
            expanded = centroid + 2.0 * (centroid - worst)
            f_expanded = float(f(expanded))
            if f_expanded < f_reflected:
                simplex[-1], fvals[-1] = expanded, f_expanded
            else:
                simplex[-1], fvals[-1] = reflected, f_reflected
            continue
        if f_reflected < fvals[-2]:
            simplex[-1], fvals[-1] = reflected, f_reflected
            continue
        if f_reflected < f_worst:
            contracted = centroid + 0.5 * (reflected - centroid)
            f_contracted = float(f(contracted))
            if f_contracted <= f_reflected:
                simplex[-1], fvals[-1] = contracted, f_contracted
                continue
        else:
            contracted = centroid + 0.5 * (worst - centroid)
            f_contracted = float(f(contracted))
            if f_contracted < f_worst:
                simplex[-1], fvals[-1] = contracted, f_contracted
                continue
        # shrink toward the best vertex
        for i in range(1, n + 1):
            simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
            fvals[i] = float(f(simplex[i]))

    order = np.argsort(fvals, kind="stable")
    best = simplex[order[0]]
    return NelderMeadResult(
        x=np.array(best), fun=fvals[order[0]], iterations=iterations,
        converged=converged,
    )


# --------------------------------------------------------------------------
# seedable counter-based random stream
# --------------------------------------------------------------------------

_INV_2_53 = 2.0**-53


def exponential_from_uniform(u: float, rate: float) -> float:
    """Inverse-cdf map sending a uniform (0,1) draw to an exponential of the
    given rate: -ln(u) / rate."""
    if not rate > 0:
        raise DomainError(f"rate must be positive, got {rate}")
    return -math.log(u) / rate


class RandomState:
    """Reproducible random stream backed by the counter-based Philox generator.

    Identical seeds yield identical draw sequences. ``split`` derives
    independent child streams deterministically, so batch sampling can be
    distributed without coordinating a shared state.
    """

    def __init__(self, seed: int, _seed_seq: np.random.SeedSequence | None = None):
        if _seed_seq is None:
            if not (0 <= int(seed) < 2**64):
                raise DomainError(f"seed must fit in 64 unsigned bits, got {seed}")
            _seed_seq = np.random.SeedSequence(int(seed))
        self.seed = int(seed)
        self._seed_seq = _seed_seq
        self._gen = np.random.Generator(np.random.Philox(_seed_seq))

    def split(self, n: int) -> list["RandomState"]:
        """Derive n independent child streams from this stream's seed."""
        children = self._seed_seq.spawn(n)
        return [RandomState(self.seed, _seed_seq=c) for c in children]

    def uniform(self) -> float:
        """One draw from the open interval (0, 1)."""
        word = self._gen.integers(0, 1 << 53, dtype=np.uint64)
        return (float(word) + 0.5) * _INV_2_53

    def uniforms(self, n: int) -> np.ndarray:
        """n draws from the open interval (0, 1)."""
        words = self._gen.integers(0, 1 << 53, size=n, dtype=np.uint64)
        return (words.astype(float) + 0.5) * _INV_2_53

    def exponential(self, rate: float) -> float:
        """One exponential draw of the given rate via inverse cdf."""
        return exponential_from_uniform(self.uniform(), rate)

    def exponentials(self, rate: float, n: int) -> np.ndarray:
        """n exponential draws of the given rate via inverse cdf."""
        if not rate > 0:
            raise DomainError(f"rate must be positive, got {rate}")
        return -np.log(self.uniforms(n)) / rate
