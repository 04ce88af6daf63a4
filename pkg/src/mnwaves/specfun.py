"""Special functions and adaptive quadrature used by every oracle.

The modified Bessel function K0 is the radial profile of the 2D non-local
kernel; it is exposed here behind a strict domain contract (K0 has a
logarithmic singularity at 0 and underflows past x ~ 700).  K1 is provided
because the integral of the kernel over a disk of radius R is
1 - (R/a) K1(R/a).

Quadrature is a heap-driven adaptive Gauss-Legendre pair (orders 10 and 21,
nodes from numpy.polynomial.legendre, so no tabulated constants enter the
code).  Semi-infinite integrals are mapped to (0, 1] with t = lo - ln(u),
which turns every exponentially decaying integrand into an algebraic one.
All routines accept complex-valued integrands and are bitwise deterministic
for fixed inputs.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

from numpy.polynomial.legendre import leggauss
from scipy.special import k0 as _scipy_k0
from scipy.special import k1 as _scipy_k1

__all__ = [
    "QuadratureSpec",
    "DEFAULT_QUAD_SPEC",
    "ConvergenceError",
    "bessel_k0",
    "bessel_k1",
    "integrate_1d",
    "integrate_2d_polar",
]

_UNDERFLOW_X = 700.0


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be > 0")
        if not self.abs_tol >= 0:
            raise ValueError("abs_tol must be >= 0")
        if not self.max_subdivisions >= 1:
            raise ValueError("max_subdivisions must be >= 1")


DEFAULT_QUAD_SPEC = QuadratureSpec()


class ConvergenceError(RuntimeError):
    """Subdivision budget exhausted; carries the best estimate and its bound."""

    def __init__(self, estimate: complex, error_bound: float):
        super().__init__(
            f"quadrature did not converge (estimate {estimate}, "
            f"error bound {error_bound:.3e})"
        )
        self.estimate = estimate
        self.error_bound = error_bound


def bessel_k0(x: float) -> float:
    """Modified Bessel function K0(x) for x > 0.

    Relative error <= 1e-12 on [1e-6, 700]; returns 0.0 (underflow) for
    x > 700.  x <= 0 is a domain error: K0 diverges logarithmically at 0.
    """
    if not x > 0.0:
        raise ValueError(f"bessel_k0 requires x > 0, got {x}")
    if x > _UNDERFLOW_X:
        return 0.0
    return float(_scipy_k0(x))


def bessel_k1(x: float) -> float:
    """Modified Bessel function K1(x) = -K0'(x) for x > 0."""
    if not x > 0.0:
        raise ValueError(f"bessel_k1 requires x > 0, got {x}")
    if x > _UNDERFLOW_X:
        return 0.0
    return float(_scipy_k1(x))


# Gauss-Legendre node/weight pairs on [-1, 1].  The order-21 rule is the
# estimate, the order-10 rule the comparison; neither touches an endpoint,
# so integrable endpoint singularities are admissible.
_GL_LO_X, _GL_LO_W = leggauss(10)
_GL_HI_X, _GL_HI_W = leggauss(21)


def _eval_panel(f: Callable[[float], complex], a: float, b: float) -> tuple[complex, float]:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    hi = 0.0 + 0.0j
    for x, w in zip(_GL_HI_X, _GL_HI_W):
        hi += w * f(mid + half * x)
    hi *= half
    lo = 0.0 + 0.0j
    for x, w in zip(_GL_LO_X, _GL_LO_W):
        lo += w * f(mid + half * x)
    lo *= half
    return hi, abs(hi - lo)


def _adaptive(f: Callable[[float], complex], a: float, b: float,
              spec: QuadratureSpec) -> complex:
    value, err = _eval_panel(f, a, b)
    # heap of (-error, insertion counter, a, b, value); the counter makes
    # tie-breaking, and therefore the refinement order, deterministic
    counter = 0
    heap = [(-err, counter, a, b, value)]
    total = value
    total_err = err
    for _ in range(spec.max_subdivisions):
        if total_err <= max(spec.abs_tol, spec.rel_tol * abs(total)):
            return total
        neg_err, _, pa, pb, pval = heapq.heappop(heap)
        mid = 0.5 * (pa + pb)
        if mid <= pa or mid >= pb:
            # interval at floating-point resolution; keep its estimate
            heapq.heappush(heap, (0.0, counter + 1, pa, pb, pval))
            counter += 1
            total_err += neg_err  # remove its error from the budget
            continue
        lval, lerr = _eval_panel(f, pa, mid)
        rval, rerr = _eval_panel(f, mid, pb)
        total += lval + rval - pval
        total_err += lerr + rerr + neg_err
        counter += 1
        heapq.heappush(heap, (-lerr, counter, pa, mid, lval))
        counter += 1
        heapq.heappush(heap, (-rerr, counter, mid, pb, rval))
    if total_err <= max(spec.abs_tol, spec.rel_tol * abs(total)):
        return total
    raise ConvergenceError(total, total_err)


def integrate_1d(f: Callable[[float], complex], lo: float, hi: float,
                 spec: QuadratureSpec = DEFAULT_QUAD_SPEC) -> complex:
    """Adaptive integral of a complex-valued f over (lo, hi); hi may be +inf.

    The semi-infinite case substitutes t = lo - ln(u), u in (0, 1], which is
    exact for exponentially decaying integrands.  Raises ConvergenceError
    (carrying the best estimate) when the subdivision budget runs out.
    """
    if math.isnan(lo) or math.isnan(hi):
        raise ValueError("integration limits must not be NaN")
    if math.isinf(lo):
        raise ValueError("lower limit must be finite")
    if math.isinf(hi):
        def g(u: float) -> complex:
            return f(lo - math.log(u)) / u
        return _adaptive(g, 0.0, 1.0, spec)
    if hi < lo:
        raise ValueError("upper limit below lower limit")
    if hi == lo:
        return 0.0 + 0.0j
    return _adaptive(f, lo, hi, spec)


def integrate_2d_polar(g: Callable[[float, float], complex], r_max: float,
                       spec: QuadratureSpec = DEFAULT_QUAD_SPEC) -> complex:
    """Integral of g(r, theta) * r over the disk of radius r_max.

    Iterated adaptive rule: the radial integral (with the Jacobian r, which
    tames integrable singularities of g at r = 0) inside an angular one.
    """
    if not r_max > 0:
        raise ValueError("r_max must be positive")

    def radial(theta: float) -> complex:
        return integrate_1d(lambda r: g(r, theta) * r, 0.0, r_max, spec)

    return integrate_1d(radial, 0.0, 2.0 * math.pi, spec)
