"""Command-line front end.

Commands:
    validate PATH          check a material config, print OK or violations
    speeds                 derived wave speeds and cutoff frequency
    dispersion             sweep a mode over a frequency range, emit CSV
    residuals              surface-condition residual report (JSON)
    blayer                 boundary-layer integral convergence report (JSON)
    kernel-check           kernel normalization and roundtrip self-check

Exit codes: 0 success, 1 malformed input or config, 2 physical
infeasibility (below cutoff, no surface mode), 3 numerical convergence
failure.  All numeric output uses shortest round-trip floats, so repeated
runs produce identical bytes.  MNW_QUAD_TOL overrides the default
quadrature relative tolerance.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import asymptotic, dispersion, kernel, material, specfun, wavefield

_EXIT_OK = 0
_EXIT_BAD_INPUT = 1
_EXIT_INFEASIBLE = 2
_EXIT_NO_CONVERGENCE = 3

_BLAYER_EPS_GRID = (0.2, 0.1, 0.05)
_BLAYER_ETA_GRID = (0.0, 0.5, 2.0)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); the contract says 1
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="mnw", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="validate a material config file")
    p_val.add_argument("path", help="material JSON file")

    def common(p, need_material=True):
        p.add_argument("--material", required=need_material,
                       help="material JSON file")
        p.add_argument("--out", help="write output to this file instead of stdout")

    p_speed = sub.add_parser("speeds", help="derived scales of a material")
    common(p_speed)

    p_disp = sub.add_parser("dispersion", help="frequency sweep of one mode")
    common(p_disp)
    p_disp.add_argument("--mode", choices=("elastic", "micropolar"),
                        default="elastic")
    p_disp.add_argument("--omega-min", type=float, required=True)
    p_disp.add_argument("--omega-max", type=float, required=True)
    p_disp.add_argument("--num", type=int, default=50)
    p_disp.add_argument("--tol", type=float, default=1e-10,
                        help="root tolerance relative to c2")
    p_disp.add_argument("--emit-plot-script", action="store_true",
                        help="write a gnuplot script next to --out")

    p_res = sub.add_parser("residuals", help="surface-condition residual report")
    common(p_res)
    p_res.add_argument("--eps", type=float,
                       help="dimensionless non-locality a*k (default 0.1; "
                            "fixes k = eps/a)")

    p_bl = sub.add_parser("blayer", help="boundary-layer integral convergence")
    common(p_bl)
    p_bl.add_argument("--eps", type=float,
                      help="single eps instead of the default grid")

    p_kc = sub.add_parser("kernel-check", help="kernel normalization and "
                                               "roundtrip self-check")
    common(p_kc)
    return parser


def _quad_spec() -> specfun.QuadratureSpec:
    raw = os.environ.get("MNW_QUAD_TOL")
    if raw is None:
        return specfun.DEFAULT_QUAD_SPEC
    try:
        rel = float(raw)
    except ValueError:
        raise _UsageError(f"MNW_QUAD_TOL is not a number: {raw!r}")
    if not rel > 0:
        raise _UsageError(f"MNW_QUAD_TOL must be positive: {raw!r}")
    return specfun.QuadratureSpec(rel_tol=rel)


def _load_material(path: str) -> material.MaterialParams:
    try:
        m = material.load_material(path)
    except FileNotFoundError:
        raise _UsageError(f"material file not found: {path}")
    except material.InvalidMaterialError as exc:
        raise _UsageError(str(exc))
    outcome = material.validate(m)
    if not outcome.ok:
        raise _UsageError("invalid material: " + "; ".join(outcome.violations))
    return m


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _cpair(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def _cmd_validate(args) -> int:
    try:
        m = material.load_material(args.path)
    except FileNotFoundError:
        print(f"material file not found: {args.path}", file=sys.stderr)
        return _EXIT_BAD_INPUT
    except material.InvalidMaterialError as exc:
        print(str(exc), file=sys.stderr)
        return _EXIT_BAD_INPUT
    outcome = material.validate(m)
    if outcome.ok:
        print("OK")
        return _EXIT_OK
    print("INVALID")
    for violation in outcome.violations:
        print(f"  violated: {violation}")
    return _EXIT_BAD_INPUT


def _cmd_speeds(args) -> int:
    m = _load_material(args.material)
    sc = material.derive_scales(m)
    lines = [
        f"c1 = {sc.c1!r}",
        f"c2 = {sc.c2!r}",
        f"c3 = {sc.c3!r}",
        f"c4 = {sc.c4!r}",
        f"d = {sc.d!r}",
        f"omega_c = {sc.omega_cutoff!r}",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return _EXIT_OK


_PLOT_TEMPLATE = """\
# gnuplot script for a dispersion curve
set datafile separator ","
set key autotitle columnhead
set logscale x
set xlabel "omega [rad/s]"
set ylabel "phase velocity [m/s]"
plot "{csv}" using 1:3 with linespoints title "v(omega)"
"""


def _cmd_dispersion(args) -> int:
    m = _load_material(args.material)
    if not args.omega_min < args.omega_max:
        raise _UsageError("--omega-min must be below --omega-max")
    if args.emit_plot_script and args.out is None:
        raise _UsageError("--emit-plot-script needs --out to reference the CSV")
    if not args.tol > 0:
        raise _UsageError("--tol must be positive")
    try:
        curve = dispersion.sweep(m, args.omega_min, args.omega_max, args.num,
                                 args.mode, tol=args.tol)
    except dispersion.NoSurfaceModeError as exc:
        print(str(exc), file=sys.stderr)
        return _EXIT_INFEASIBLE
    if curve.propagating_count == 0:
        sc = material.derive_scales(m)
        print(f"entire range is at or below the cutoff {sc.omega_cutoff!r}; "
              "the micropolar mode does not propagate", file=sys.stderr)
        return _EXIT_INFEASIBLE
    _emit(dispersion.curve_to_csv(curve), args.out)
    if args.emit_plot_script:
        out_path = Path(args.out)
        script = _PLOT_TEMPLATE.format(csv=out_path.name)
        out_path.with_suffix(out_path.suffix + ".gp").write_text(
            script, encoding="utf-8")
    return _EXIT_OK


def _residual_wavenumber(m: material.MaterialParams,
                         eps_arg: float | None) -> tuple[float, float]:
    """(k, eps) for the residual report: k = eps / a, defaulting eps to 0.1.

    A strictly local material (a = 0) only admits eps = 0; the reference
    wavenumber is then 1.
    """
    if m.a_nl == 0.0:
        if eps_arg is not None and eps_arg != 0.0:
            raise _UsageError("--eps must be 0 for a material with a = 0")
        return 1.0, 0.0
    eps = 0.1 if eps_arg is None else eps_arg
    if not eps > 0:
        raise _UsageError("--eps must be positive for a non-local material")
    return eps / m.a_nl, eps


def _cmd_residuals(args) -> int:
    m = _load_material(args.material)
    k, eps = _residual_wavenumber(m, args.eps)
    try:
        text = asymptotic.residual_report_json(m, k, eps)
    except dispersion.NoSurfaceModeError as exc:
        print(str(exc), file=sys.stderr)
        return _EXIT_INFEASIBLE
    _emit(text + "\n", args.out)
    return _EXIT_OK


def _cmd_blayer(args) -> int:
    m = _load_material(args.material)
    spec = _quad_spec()
    sc = material.derive_scales(m)
    v = 0.3 * sc.c2
    if m.kappa > 0:
        omega = 3.0 * sc.omega_cutoff
        k = omega / v
        branches = (1, 2, 3)
    else:
        k = 1.0
        omega = v * k
        branches = (1, 2)
    eps_grid = _BLAYER_EPS_GRID if args.eps is None else (args.eps,)
    if any(not e > 0 for e in eps_grid):
        raise _UsageError("--eps must be positive")
    entries = []
    series: dict[str, list[float]] = {}
    for i in branches:
        for eta in _BLAYER_ETA_GRID:
            for eps in eps_grid:
                mp = wavefield.ModeParams(k=k, omega=omega, v=v, eps=eps)
                de = wavefield.decay_exponents(m, mp)
                closed = wavefield.blayer_integral_closed(i, de, eps, eta)
                quad = wavefield.blayer_integral_quadrature(i, de, eps, eta,
                                                            spec)
                deviation = abs(quad - closed) / abs(closed)
                entries.append({
                    "i": i, "eta": eta, "eps": eps,
                    "closed": _cpair(closed),
                    "quadrature": _cpair(quad),
                    "deviation": deviation,
                })
                series.setdefault(f"i={i},eta={eta!r}", []).append(deviation)
    slopes = None
    if len(eps_grid) >= 2:
        log_eps = np.log(np.asarray(eps_grid))
        slopes = {key: float(np.polyfit(log_eps, np.log(devs), 1)[0])
                  for key, devs in series.items()}
    payload = {
        "rel_tol": spec.rel_tol,
        "state": {"v": v, "omega": omega, "k": k},
        "entries": entries,
        "slopes": slopes,
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return _EXIT_OK


def _cmd_kernel_check(args) -> int:
    m = _load_material(args.material)
    if m.a_nl <= 0:
        print("kernel checks need a non-local material (a > 0)",
              file=sys.stderr)
        return _EXIT_INFEASIBLE
    spec = _quad_spec()
    a = m.a_nl
    mass_spec = specfun.QuadratureSpec(
        rel_tol=max(spec.rel_tol, 1e-8), abs_tol=spec.abs_tol,
        max_subdivisions=spec.max_subdivisions)
    mass = specfun.integrate_2d_polar(
        lambda r, theta: kernel.kernel_weight(r, a), 40.0 * a, mass_spec).real

    n = 96
    h = 0.5 * a
    xs = h * np.arange(n)
    grid_x, grid_z = np.meshgrid(xs, xs)
    center = xs[n // 2]
    width = 5.0 * a
    gauss = np.exp(-(((grid_x - center) ** 2 + (grid_z - center) ** 2)
                     / width ** 2)).astype(complex)
    field = kernel.ScalarField2D(nx=n, nz=n, dx=h, dz=h, x0=0.0, values=gauss)
    convolved = kernel.convolve_halfplane(field, a, spec)
    smoothed = kernel.apply_helmholtz(convolved, a)
    margin = int(math.ceil(12.0 * a / h))
    lo, hi = margin, n - 1 - margin
    err = np.max(np.abs(smoothed.values[lo - 1:hi, lo - 1:hi]
                        - gauss[lo:hi + 1, lo:hi + 1]))
    rel = float(err / np.max(np.abs(gauss)))
    payload = {
        "rel_tol": spec.rel_tol,
        "kernel_mass": mass,
        "mass_error": abs(mass - 1.0),
        "roundtrip_rel_linf": rel,
        "grid": {"n": n, "spacing": h, "a": a, "gaussian_width": width},
        "warnings": list(convolved.warnings),
    }
    print(json.dumps(payload, indent=2))
    if args.out is not None:
        Path(args.out).write_text(kernel.field_to_csv(convolved),
                                  encoding="utf-8")
    return _EXIT_OK


_HANDLERS = {
    "validate": _cmd_validate,
    "speeds": _cmd_speeds,
    "dispersion": _cmd_dispersion,
    "residuals": _cmd_residuals,
    "blayer": _cmd_blayer,
    "kernel-check": _cmd_kernel_check,
}


def run(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _HANDLERS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_BAD_INPUT
    except material.InvalidMaterialError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_BAD_INPUT
    except dispersion.CutoffError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_INFEASIBLE
    except dispersion.NoSurfaceModeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_INFEASIBLE
    except specfun.ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_NO_CONVERGENCE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
