"""Command-line front end.

Commands: spin-check, spectrum, phase-space, critical, orbit.  Every run
writes its data as CSV plus a JSON manifest naming the command, all
resolved parameters, and the emitted files; `spinjc --replay manifest.json`
reproduces the run.  CSV output is deterministic: header row, LF line
endings, floats printed with 12 significant digits.

Exit codes: 0 success, 2 argument error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .classical import (
    ClassicalParams,
    LAMBDA_PRIME_CRITICAL,
    PhasePoint,
    critical_coupling_scan,
    find_fixed_points,
    integrate_orbit,
    lambda_from_coupling,
    lambda_from_coupling_finite_j,
    reduced_h_grid,
    separatrix_energy,
    trace_contours,
)
from .errors import NumericalError
from .mjc_model import ModelParams
from .spectra import blockwise_spectrum, second_difference, spectrum_scan
from .spin_algebra import HalfInteger, hp_roundtrip_report

EXIT_OK = 0
EXIT_ARGS = 2
EXIT_NUMERIC = 3


def _fmt(x) -> str:
    return format(float(x), ".12g")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if isinstance(v, (int, float, np.floating)) and not isinstance(v, bool) else str(v) for v in row) + "\n")


def _write_manifest(out: Path, command: str, parameters: dict, outputs: list[str]) -> Path:
    manifest = {
        "command": command,
        "parameters": parameters,
        "versions": {"spinjc": __version__},
        "outputs": outputs,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def _parse_grid(spec: str) -> list[float]:
    """Grid syntax start:stop:step, inclusive of both ends when step
    divides the interval; a bare number is a one-point grid."""
    parts = spec.split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) != 3:
        raise ValueError(f"bad grid {spec!r}: expected start:stop:step")
    start, stop, step = (float(p) for p in parts)
    if step <= 0 or stop < start:
        raise ValueError(f"bad grid {spec!r}: need step > 0 and stop >= start")
    values = []
    k = 0
    while True:
        v = start + k * step
        if v > stop + 1e-12:
            break
        values.append(min(v, stop))
        k += 1
    return values


def _half(name: str, value: float) -> HalfInteger:
    try:
        return HalfInteger.from_value(value)
    except ValueError as exc:
        raise ValueError(f"--{name}: {exc}") from exc


# ---------------------------------------------------------------- commands


def run_spectrum(params: dict, out: Path) -> list[str]:
    j1 = _half("j1", params["j1"])
    j2 = _half("j2", params["j2"])
    model = ModelParams(
        epsilon=params["eps"],
        g=params["g"],
        gprime=params["gp"],
        j1=j1,
        j2=j2,
    )
    approx = params["approx"]
    if params["g_grid"] is not None:
        grid, which = _parse_grid(params["g_grid"]), "g"
    elif params["gp_grid"] is not None:
        grid, which = _parse_grid(params["gp_grid"]), "gprime"
    elif approx == "counter":
        grid, which = [params["gp"]], "gprime"
    else:
        grid, which = [params["g"]], "g"
    curve, observable = spectrum_scan(model, grid, approx, which_coupling=which)

    n_levels = min(params["levels"], curve.energies.shape[1])
    rows = []
    for i, c in enumerate(curve.coupling_grid):
        for level in range(n_levels):
            rows.append((c, level, curve.energies[i, level]))
    _write_csv(out / "spectrum.csv", ["coupling", "level_index", "energy"], rows)
    _write_csv(
        out / "expectation.csv",
        ["coupling", "mean_n"],
        [
            (c, v / model.epsilon)
            for c, v in zip(observable.coupling_grid, observable.values)
        ],
    )
    return ["spectrum.csv", "expectation.csv"]


def _resolve_portrait(params: dict) -> tuple[str, ClassicalParams]:
    lam = params.get("lam") or 0.0
    lam_prime = params.get("lam_prime") or 0.0
    if params.get("g"):
        lam = lambda_from_coupling(params["g"])
    if params.get("gp"):
        lam_prime = lambda_from_coupling(params["gp"])
    if (lam > 0) == (lam_prime > 0):
        raise ValueError(
            "exactly one of --lambda/--g and --lambda-prime/--gp must be nonzero"
        )
    if lam > 0:
        return "rotating", ClassicalParams(lam=lam)
    return "counter", ClassicalParams(lam_prime=lam_prime)


def run_phase_space(params: dict, out: Path) -> list[str]:
    which, cparams = _resolve_portrait(params)
    try:
        n_q, n_p = (int(v) for v in params["grid"].lower().split("x"))
    except ValueError as exc:
        raise ValueError(f"--grid: expected NQxNP, got {params['grid']!r}") from exc

    fixed = find_fixed_points(which, cparams)
    _write_csv(
        out / "fixed_points.csv",
        ["q", "p", "energy", "kind"],
        [(fp.point.q, fp.point.p, fp.energy, fp.kind) for fp in fixed],
    )

    # level selection: evenly spaced between the grid extrema, plus the
    # lowest closed-orbit level when the transition point exists
    _, _, hgrid = reduced_h_grid(which, cparams, n_q=n_q, n_p=n_p)
    levels = list(np.linspace(hgrid.min(), hgrid.max(), params["n_levels"] + 2)[1:-1])
    if which == "counter":
        try:
            levels.append(separatrix_energy(cparams))
        except NumericalError:
            pass
    levels.sort()

    contours = trace_contours(which, cparams, levels, n_q=n_q, n_p=n_p)
    rows = []
    poly_id = 0
    for contour in contours:
        for poly in contour.polylines:
            for vid, (q, p) in enumerate(poly):
                rows.append((contour.level, poly_id, vid, q, p))
            poly_id += 1
    _write_csv(
        out / "contours.csv",
        ["level", "polyline_id", "vertex_index", "q", "p"],
        rows,
    )
    return ["contours.csv", "fixed_points.csv"]


def run_critical(params: dict, out: Path) -> list[str]:
    report: dict = {
        "lambda_prime_critical": critical_coupling_scan(tol=params["tol"]),
        "lambda_prime_critical_analytic": LAMBDA_PRIME_CRITICAL,
    }
    if params.get("at") is not None:
        fps = find_fixed_points("counter", ClassicalParams(lam_prime=params["at"]))
        report["at"] = {
            "lambda_prime": params["at"],
            "fixed_points": [
                {"q": fp.point.q, "p": fp.point.p, "energy": fp.energy, "kind": fp.kind}
                for fp in fps
            ],
        }
    if params.get("with_quantum"):
        grid = _parse_grid(params["gp_grid"])
        quantum = []
        for jval in params["with_quantum"]:
            j = _half("with-quantum", jval)
            model = ModelParams(epsilon=1.0, g=0.0, gprime=0.0, j1=j, j2=j)
            energy = []
            for c in grid:
                point = model.with_coupling(gprime=float(c))
                energy.append(blockwise_spectrum(point, "counter").eigenvalues[0])
            curvature = second_difference(grid, energy)
            quantum.append(
                {
                    "j": j.value,
                    "curvature_peak_gprime": curvature.peak_coupling,
                    "lambda_prime_naive": lambda_from_coupling(curvature.peak_coupling),
                    "lambda_prime_lieb": lambda_from_coupling_finite_j(
                        curvature.peak_coupling, j
                    ),
                }
            )
        report["quantum_curvature_peaks"] = quantum
    path = out / "critical.json"
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    print(f"lambda'_c = {report['lambda_prime_critical']:.6f}")
    for entry in report.get("quantum_curvature_peaks", []):
        print(
            f"J = {entry['j']:g}: curvature peak g' = "
            f"{entry['curvature_peak_gprime']:.4f}, Lieb-scaled lambda' = "
            f"{entry['lambda_prime_lieb']:.4f}"
        )
    return ["critical.json"]


def run_orbit(params: dict, out: Path) -> list[str]:
    which, cparams = _resolve_portrait(params)
    try:
        q0, p0 = (float(v) for v in params["start"].split(","))
    except ValueError as exc:
        raise ValueError(f"--start: expected q,p, got {params['start']!r}") from exc
    trajectory = integrate_orbit(
        which, cparams, PhasePoint(q=q0, p=p0), dt=params["dt"], steps=params["steps"]
    )
    _write_csv(
        out / "orbit.csv",
        ["t", "q", "p"],
        zip(trajectory.times, trajectory.qs, trajectory.ps),
    )
    if trajectory.boundary_hit:
        print("orbit reached the |p| = 1 boundary; trajectory truncated")
    return ["orbit.csv"]


def run_spin_check(params: dict, out: Path) -> list[str]:
    report = hp_roundtrip_report(_half("j", params["j"]))
    path = out / "spin_check.json"
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    worst = max(v for k, v in report.items() if k.startswith("max_"))
    status = "ok" if worst <= 1e-12 else "FAILED"
    print(f"spin-check up to j = {params['j']:g}: {status} (worst residual {worst:.3e})")
    if worst > 1e-12:
        raise NumericalError("operator algebra residuals exceed 1e-12")
    return ["spin_check.json"]


RUNNERS = {
    "spectrum": run_spectrum,
    "phase-space": run_phase_space,
    "critical": run_critical,
    "orbit": run_orbit,
    "spin-check": run_spin_check,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinjc",
        description="Spinorized Jaynes-Cummings model: spectra and classical phase space",
    )
    parser.add_argument("--replay", metavar="FILE", help="re-run from a manifest")
    sub = parser.add_subparsers(dest="command")

    sp = sub.add_parser("spectrum", help="spectral scan over a coupling grid")
    sp.add_argument("--j1", type=float, default=25.0)
    sp.add_argument("--j2", type=float, default=25.0)
    sp.add_argument("--eps", type=float, default=1.0)
    sp.add_argument("--g", type=float, default=0.0)
    sp.add_argument("--gp", type=float, default=0.0)
    sp.add_argument("--g-grid", dest="g_grid", default=None)
    sp.add_argument("--gp-grid", dest="gp_grid", default=None)
    sp.add_argument(
        "--approx", choices=["rotating", "counter", "full"], default="rotating"
    )
    sp.add_argument("--levels", type=int, default=200)
    sp.add_argument("--out", default=".")

    ph = sub.add_parser("phase-space", help="classical portrait: contours and fixed points")
    ph.add_argument("--lambda", dest="lam", type=float, default=0.0)
    ph.add_argument("--lambda-prime", dest="lam_prime", type=float, default=0.0)
    ph.add_argument("--g", type=float, default=0.0)
    ph.add_argument("--gp", type=float, default=0.0)
    ph.add_argument("--grid", default="512x512")
    ph.add_argument("--n-levels", dest="n_levels", type=int, default=20)
    ph.add_argument("--out", default=".")

    cr = sub.add_parser("critical", help="critical coupling and curvature peaks")
    cr.add_argument("--at", type=float, default=None)
    cr.add_argument("--tol", type=float, default=1e-4)
    cr.add_argument(
        "--with-quantum",
        dest="with_quantum",
        default=None,
        help="comma-separated list of j values for the quantum comparison",
    )
    cr.add_argument("--gp-grid", dest="gp_grid", default="0.02:0.62:0.02")
    cr.add_argument("--out", default=".")

    orb = sub.add_parser("orbit", help="integrate a classical orbit")
    orb.add_argument("--lambda", dest="lam", type=float, default=0.0)
    orb.add_argument("--lambda-prime", dest="lam_prime", type=float, default=0.0)
    orb.add_argument("--g", type=float, default=0.0)
    orb.add_argument("--gp", type=float, default=0.0)
    orb.add_argument("--start", required=True, help="q,p")
    orb.add_argument("--dt", type=float, default=1e-3)
    orb.add_argument("--steps", type=int, default=10_000)
    orb.add_argument("--out", default=".")

    sc = sub.add_parser("spin-check", help="verify the operator algebra")
    sc.add_argument("--j", type=float, default=12.5)
    sc.add_argument("--out", default=".")

    return parser


def _dispatch(command: str, parameters: dict) -> int:
    out = Path(parameters.get("out", "."))
    out.mkdir(parents=True, exist_ok=True)
    outputs = RUNNERS[command](parameters, out)
    _write_manifest(out, command, parameters, outputs)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.replay:
            manifest = json.loads(Path(args.replay).read_text())
            command = manifest["command"]
            if command not in RUNNERS:
                raise ValueError(f"manifest names unknown command {command!r}")
            return _dispatch(command, manifest["parameters"])
        if not args.command:
            parser.print_help()
            return EXIT_ARGS
        parameters = {
            k: v for k, v in vars(args).items() if k not in ("command", "replay")
        }
        if args.command == "critical" and parameters.get("with_quantum"):
            parameters["with_quantum"] = [
                float(v) for v in str(parameters["with_quantum"]).split(",")
            ]
        return _dispatch(args.command, parameters)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
