"""Leading-order dispersion of the two Rayleigh-wave modes.

The surface-traction determinant at leading order factors into two
relations.  The elastic mode solves

    (1 + d)^2 r10 r20 - (r20^2 + d)^2 = 0,      d = mu/(mu + kappa),

which is frequency-free (non-dispersive at this order) and reduces to the
classical Rayleigh function 4 r10 r20 - (1 + r20^2)^2 when kappa = 0.  The
micropolar mode is the exact root of r30 = 0,

    v = c4 / sqrt(1 - omega_c^2 / omega^2),

which only propagates above the cutoff omega_c = sqrt(2 kappa/(rho j)) and
descends monotonically to c4 from above.  The two relations cannot vanish
simultaneously.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .material import MaterialParams, derive_scales, material_fingerprint
from .wavefield import Amplitudes, DecayExponents, ModeParams, decay_exponents

__all__ = [
    "CutoffError",
    "NoSurfaceModeError",
    "LeakyRegimeWarning",
    "DispersionPoint",
    "DispersionCurve",
    "secular_leading",
    "solve_rayleigh",
    "micropolar_velocity",
    "amplitude_ratios",
    "sweep",
    "curve_to_csv",
    "curve_from_csv",
]

_BRACKET_LO = 0.01     # of c2; excludes the trivial double root at v = 0
_BRACKET_HI = 0.9999   # of c2; secular -> -d^2 < 0 at c2, so a sign change
_SCAN_POINTS = 512     # is guaranteed whenever a surface mode exists


class CutoffError(ValueError):
    """Micropolar mode requested below its cutoff frequency."""


class NoSurfaceModeError(RuntimeError):
    """The secular function has no sign change in the physical bracket."""


class LeakyRegimeWarning(UserWarning):
    """secular_leading evaluated at v >= c2 (complex r20, real part returned)."""


@dataclass(frozen=True)
class DispersionPoint:
    omega: float
    k: float
    v: float
    mode_tag: str
    exponents: DecayExponents | None
    secular_residual: float
    admissible: bool

    @property
    def propagating(self) -> bool:
        return math.isfinite(self.v)


@dataclass(frozen=True)
class DispersionCurve:
    points: tuple[DispersionPoint, ...]
    fingerprint: str

    def __post_init__(self):
        omegas = [p.omega for p in self.points]
        if any(b <= a for a, b in zip(omegas, omegas[1:])):
            raise ValueError("curve frequencies must be strictly increasing")

    @property
    def propagating_count(self) -> int:
        return sum(1 for p in self.points if p.propagating)


def secular_leading(m: MaterialParams, v: float) -> float:
    """The leading-order elastic-mode secular function at phase velocity v.

    Real-valued for 0 <= v < c2; past c2 the shear exponent turns imaginary
    and the real part is returned under a LeakyRegimeWarning.
    """
    if v < 0:
        raise ValueError("phase velocity must be >= 0")
    sc = derive_scales(m)
    d = sc.d
    r10_sq = 1.0 - (v / sc.c1) ** 2
    r20_sq = 1.0 - (v / sc.c2) ** 2
    if r20_sq >= 0.0 and r10_sq >= 0.0:
        r10 = math.sqrt(r10_sq)
        r20 = math.sqrt(r20_sq)
        return (1.0 + d) ** 2 * r10 * r20 - (r20_sq + d) ** 2
    warnings.warn("evaluating the secular function in the leaky regime "
                  f"(v = {v!r} >= c2)", LeakyRegimeWarning, stacklevel=2)
    r10 = complex(r10_sq) ** 0.5
    r20 = complex(r20_sq) ** 0.5
    value = (1.0 + d) ** 2 * r10 * r20 - (complex(r20_sq) + d) ** 2
    return value.real


def solve_rayleigh(m: MaterialParams, tol: float = 1e-10) -> DispersionPoint:
    """Bisect the elastic-mode root of `secular_leading` in (0.01, 0.9999) c2.

    The secular function is positive just above the trivial v = 0 double
    root (its leading term is +v^2 (1+d)[2/c2^2 - (1+d)(1/(2 c1^2)
    + 1/(2 c2^2))] > 0 because c1 > c2 and d <= 1) and equals -d^2 < 0 at
    c2, so a sign change exists whenever the mode does.  With several sign
    changes the largest-velocity bracket (the physical Rayleigh branch) is
    taken.  The leading-order mode is non-dispersive: omega and k of the
    returned point are NaN metadata, exponents are attached by `sweep`.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    sc = derive_scales(m)
    lo = _BRACKET_LO * sc.c2
    hi = _BRACKET_HI * sc.c2
    grid = np.linspace(lo, hi, _SCAN_POINTS)
    vals = [secular_leading(m, float(v)) for v in grid]
    bracket = None
    for i in range(_SCAN_POINTS - 2, -1, -1):
        if vals[i] == 0.0:
            bracket = (grid[i], grid[i])
            break
        if vals[i] * vals[i + 1] < 0.0:
            bracket = (grid[i], grid[i + 1])
            break
    if bracket is None:
        raise NoSurfaceModeError(
            "no sign change of the secular function in "
            f"({lo!r}, {hi!r}); no elastic surface mode for this material")
    a, b = float(bracket[0]), float(bracket[1])
    fa = secular_leading(m, a)
    while b - a > tol * sc.c2:
        mid = 0.5 * (a + b)
        fm = secular_leading(m, mid)
        if fm == 0.0:
            a = b = mid
            break
        if fa * fm < 0.0:
            b = mid
        else:
            a, fa = mid, fm
    v = 0.5 * (a + b)
    return DispersionPoint(
        omega=math.nan, k=math.nan, v=v, mode_tag="elastic", exponents=None,
        secular_residual=abs(secular_leading(m, v)),
        admissible=v < sc.c2,
    )


def micropolar_velocity(m: MaterialParams, omega: float) -> float:
    """Phase velocity of the micropolar mode, v = c4/sqrt(1 - omega_c^2/omega^2)."""
    sc = derive_scales(m)
    if not omega > sc.omega_cutoff:
        raise CutoffError(
            f"mode does not propagate: omega = {omega!r} is at or below the "
            f"cutoff {sc.omega_cutoff!r}")
    return sc.c4 / math.sqrt(1.0 - (sc.omega_cutoff / omega) ** 2)


def _leading_exponents(m: MaterialParams, v: float) -> tuple[complex, complex]:
    sc = derive_scales(m)
    r10 = complex(1.0 - (v / sc.c1) ** 2) ** 0.5
    r20 = complex(1.0 - (v / sc.c2) ** 2) ** 0.5
    if r10.real < 0:
        r10 = -r10
    if r20.real < 0:
        r20 = -r20
    return r10, r20


def amplitude_ratios(m: MaterialParams, point: DispersionPoint,
                     eps: float) -> Amplitudes:
    """Potential amplitudes of a solved point, normalized to Q = 1.

    Elastic mode:  P = i (r20^2 + d)(1 + (r10 - r20)(eps - eps^2 r20))
                        / ((1 + d) r10),                      R = 0.
    Micropolar mode:
                   P = i (1 + d) r20 (1 + (r10 - r20)(eps - eps^2 r20))
                        / (r20^2 + d),
                   R = [(r20^2 + d)^2 - (1 + d)^2 r10 r20] / (r20^2 + d)
                        * (1 + (r30 - r20)(eps - eps^2 r20)).
    """
    sc = derive_scales(m)
    d = sc.d
    r10, r20 = _leading_exponents(m, point.v)
    corr = eps - eps * eps * r20
    if point.mode_tag == "elastic":
        if r10 == 0:
            raise ZeroDivisionError("amplitude ratio is singular: r10 = 0")
        p = (1j * (r20 * r20 + d) * (1.0 + (r10 - r20) * corr)
             / ((1.0 + d) * r10))
        return Amplitudes(P=p, Q=1.0 + 0j, R=0j)
    if point.mode_tag == "micropolar":
        if not math.isfinite(point.omega):
            raise ValueError("micropolar amplitudes need the point frequency")
        micro = 1.0 - (sc.omega_cutoff / point.omega) ** 2
        r30 = complex(1.0 - (point.v / sc.c4) ** 2 * micro) ** 0.5
        if r30.real < 0:
            r30 = -r30
        p = (1j * (1.0 + d) * r20 * (1.0 + (r10 - r20) * corr)
             / (r20 * r20 + d))
        r_amp = (((r20 * r20 + d) ** 2 - (1.0 + d) ** 2 * r10 * r20)
                 / (r20 * r20 + d)) * (1.0 + (r30 - r20) * corr)
        return Amplitudes(P=p, Q=1.0 + 0j, R=r_amp)
    raise ValueError(f"unknown mode tag {point.mode_tag!r}")


def _micropolar_residual(m: MaterialParams, v: float, omega: float) -> float:
    sc = derive_scales(m)
    micro = 1.0 - (sc.omega_cutoff / omega) ** 2
    return abs(1.0 - (v / sc.c4) ** 2 * micro)


def _solved_point(m: MaterialParams, omega: float, v: float,
                  mode_tag: str, residual: float) -> DispersionPoint:
    k = omega / v
    mp = ModeParams(k=k, omega=omega, v=v, eps=m.a_nl * k, mode_tag=mode_tag)
    de = decay_exponents(m, mp)
    return DispersionPoint(omega=omega, k=k, v=v, mode_tag=mode_tag,
                           exponents=de, secular_residual=residual,
                           admissible=de.admissible)


def sweep(m: MaterialParams, omega_lo: float, omega_hi: float, n: int,
          mode_tag: str = "elastic", tol: float = 1e-10) -> DispersionCurve:
    """Solve the requested mode on n log-spaced frequencies.

    Micropolar frequencies at or below the cutoff are recorded as
    non-propagating entries (NaN velocity, no exponents) rather than
    dropped, so the output always has n rows in increasing omega.  tol is
    the elastic root tolerance relative to c2.
    """
    if not (0 < omega_lo < omega_hi):
        raise ValueError("need 0 < omega_lo < omega_hi")
    if n < 2:
        raise ValueError("need at least 2 sweep points")
    if mode_tag not in ("elastic", "micropolar"):
        raise ValueError(f"unknown mode tag {mode_tag!r}")
    omegas = np.geomspace(omega_lo, omega_hi, n)
    points: list[DispersionPoint] = []
    if mode_tag == "elastic":
        root = solve_rayleigh(m, tol)
        for omega in map(float, omegas):
            points.append(_solved_point(m, omega, root.v, "elastic",
                                        abs(secular_leading(m, root.v))))
    else:
        sc = derive_scales(m)
        for omega in map(float, omegas):
            if omega <= sc.omega_cutoff:
                points.append(DispersionPoint(
                    omega=omega, k=math.nan, v=math.nan,
                    mode_tag="micropolar", exponents=None,
                    secular_residual=math.nan, admissible=False))
                continue
            v = micropolar_velocity(m, omega)
            points.append(_solved_point(m, omega, v, "micropolar",
                                        _micropolar_residual(m, v, omega)))
    return DispersionCurve(points=tuple(points),
                           fingerprint=material_fingerprint(m))


_CSV_HEADER = "omega,k,v,mode,r1,r2,r3_re,r3_im,secular_residual,admissible"


def curve_to_csv(curve: DispersionCurve) -> str:
    """One row per point; r1, r2 print their real parts, r3 both parts."""
    lines = [_CSV_HEADER]
    for p in curve.points:
        if p.exponents is None:
            r1 = r2 = r3re = r3im = math.nan
        else:
            r1 = p.exponents.r1.real
            r2 = p.exponents.r2.real
            if p.exponents.r3 is None:
                r3re = r3im = math.nan
            else:
                r3re = p.exponents.r3.real
                r3im = p.exponents.r3.imag
        lines.append(
            f"{p.omega!r},{p.k!r},{p.v!r},{p.mode_tag},{r1!r},{r2!r},"
            f"{r3re!r},{r3im!r},{p.secular_residual!r},"
            f"{'true' if p.admissible else 'false'}"
        )
    return "\n".join(lines) + "\n"


def curve_from_csv(text: str) -> list[dict]:
    """Parse a curve CSV back into row dictionaries (for round-trip checks)."""
    lines = text.strip().split("\n")
    if not lines or lines[0] != _CSV_HEADER:
        raise ValueError("curve CSV must start with the canonical header")
    cols = _CSV_HEADER.split(",")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != len(cols):
            raise ValueError("curve CSV row has the wrong number of fields")
        row: dict = dict(zip(cols, parts))
        for key in ("omega", "k", "v", "r1", "r2", "r3_re", "r3_im",
                    "secular_residual"):
            row[key] = float(row[key])
        rows.append(row)
    return rows
