"""Command-line front end: analysis, bifurcation points, parameter sweeps,
simulation, and mode tables, with reproducible JSON configs and manifests.

Resolution order for every subcommand is defaults < flags < config file
(--config JSON overrides flags).  Each file-producing invocation writes a
manifest (command, resolved parameters, version, config hash, output list)
next to its primary output; numeric output uses 17 significant digits so
byte-identical reproduction is checkable.

Exit codes: 0 success, 1 usage error, 2 analysis precondition violated,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from skimage import measure

from . import __version__
from .bifurcation import coop_bif_points, pp_hopf_points, pp_steady_points
from .errors import NumericalError, PreconditionError
from .model import CoopLV, RMNonlocal, model_from_spec
from .solver import InitialCondition, SimConfig, run
from .spectral import Domain1D, decompose
from .stability import DispersionData, classify
from .model import jacobians

_SCALAR_FAMILIES = ("logistic", "genlogistic", "membrane")


class UsageError(Exception):
    """Bad flags, malformed parameters, or missing required inputs."""


def _fmt(x: float) -> str:
    return "%.17g" % x


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)!r}")


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_json_default)


def _parse_params(text: str) -> dict[str, float]:
    out: dict[str, float] = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"malformed --params entry {item!r}; expected name=value")
        try:
            out[key.strip()] = float(value)
        except ValueError as exc:
            raise UsageError(f"non-numeric value in --params entry {item!r}") from exc
    return out


_DEFAULTS = {
    "l": 1.0,
    "N": 256,
    "dt": 1e-3,
    "stepper": "IMEX",
    "snapshot_every": 100,
    "steady_tol": 1e-9,
    "format": "long",
    "max_mode": None,
    "params": {},
    "localized": False,
}


def _resolve(args: argparse.Namespace) -> tuple[dict, bytes]:
    """defaults < flags < config file; returns (resolved dict, config bytes)."""
    resolved = dict(_DEFAULTS)
    for key, value in vars(args).items():
        if key in ("func", "config") or value is None:
            continue
        resolved[key] = value
    if isinstance(resolved.get("params"), str):
        resolved["params"] = _parse_params(resolved["params"])
    if isinstance(resolved.get("ic"), str):
        try:
            resolved["ic"] = json.loads(resolved["ic"])
        except json.JSONDecodeError as exc:
            raise UsageError(f"--ic is not valid JSON: {exc}") from exc
    config_bytes = b""
    cfg_path = getattr(args, "config", None)
    if cfg_path:
        try:
            with open(cfg_path, "rb") as fh:
                config_bytes = fh.read()
            cfg = json.loads(config_bytes)
        except OSError as exc:
            raise UsageError(f"cannot read config {cfg_path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {cfg_path} is not valid JSON: {exc}") from exc
        if not isinstance(cfg, dict):
            raise UsageError(f"config {cfg_path} must be a JSON object")
        resolved.update(cfg)
    return resolved, config_bytes


def _require(resolved: dict, *keys: str) -> None:
    missing = [k for k in keys if resolved.get(k) is None]
    if missing:
        raise UsageError(f"missing required option(s): {', '.join('--' + k for k in missing)}")


def _build_model(resolved: dict):
    _require(resolved, "model")
    try:
        return model_from_spec(
            {
                "model": resolved["model"],
                "params": resolved.get("params", {}),
                "localized": resolved.get("localized", False),
            }
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _domain(resolved: dict) -> Domain1D:
    return Domain1D(l=float(resolved["l"]), N=int(resolved["N"]))


def _write_manifest(out_path: str, command: str, resolved: dict, outputs: list[str], config_bytes: bytes) -> str:
    manifest = {
        "command": command,
        "config_hash": hashlib.sha256(config_bytes).hexdigest(),
        "outputs": sorted(outputs),
        "resolved": {k: v for k, v in sorted(resolved.items()) if k != "func"},
        "version": __version__,
    }
    path = out_path + ".manifest.json"
    with open(path, "w") as fh:
        fh.write(_dumps(manifest) + "\n")
    return path


def _emit(text: str, resolved: dict, command: str, config_bytes: bytes) -> None:
    """Print to stdout and, when --out is given, also write file + manifest."""
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    out = resolved.get("out")
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
        _write_manifest(out, command, resolved, [out], config_bytes)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_analyze(args: argparse.Namespace) -> int:
    resolved, config_bytes = _resolve(args)
    model = _build_model(resolved)
    _require(resolved, "d1")
    d2 = resolved.get("d2")
    if model.n_species == 2 and d2 is None:
        raise UsageError("two-species model needs --d2")
    J = jacobians(model, float(resolved["d1"]), None if d2 is None else float(d2))
    try:
        report = classify(J, _domain(resolved))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(_dumps(report.to_json_dict()), resolved, "analyze", config_bytes)
    return 0


def cmd_bifpoints(args: argparse.Namespace) -> int:
    resolved, config_bytes = _resolve(args)
    name = resolved.get("model")
    _require(resolved, "model")
    dom = _domain(resolved)
    max_mode = resolved.get("max_mode")
    points = []
    if name in _SCALAR_FAMILIES:
        from .bifurcation import scalar_bif_points

        model = _build_model(resolved)
        points = scalar_bif_points(model.f_u, model.r, dom, int(max_mode or 8))
    elif name == "coop":
        model = _build_model(resolved)
        points = coop_bif_points(model, dom, int(max_mode or 8))
    elif name == "rm":
        params = dict(resolved.get("params", {}))
        if "m" not in params:
            # the lambda-diagram depends only on (k, theta, d1, d2); any valid
            # conversion efficiency gives the same curves
            k, theta = params.get("k"), params.get("theta", 1.0)
            if k is None:
                raise UsageError("rm bifpoints needs k in --params")
            params["m"] = theta * (1.0 + 2.0 / k)
            params.setdefault("theta", theta)
        model = RMNonlocal(**params)
        _require(resolved, "d1", "d2")
        d1, d2 = float(resolved["d1"]), float(resolved["d2"])
        points = pp_hopf_points(model, d1, d2, dom, n_max=int(max_mode or 8))
        points += pp_steady_points(model, d1, d2, dom, i_max=int(max_mode or 20))
    else:
        raise UsageError(
            f"bifpoints supports {', '.join(_SCALAR_FAMILIES)}, coop, rm; got {name!r}"
        )
    payload = [
        {
            "kind": p.kind,
            "param": p.param_name,
            "value": p.value,
            "mode": p.mode,
            "side": p.side,
            "kernel_slope": p.kernel_slope,
        }
        for p in points
    ]
    _emit(_dumps(payload), resolved, "bifpoints", config_bytes)
    return 0


def _parse_range(spec, fallback: tuple[float, float, int]) -> tuple[np.ndarray, tuple]:
    if spec is None:
        lo, hi, count = fallback
    elif isinstance(spec, (list, tuple)) and len(spec) == 3:
        lo, hi, count = spec
    elif isinstance(spec, str):
        parts = spec.split(":")
        if len(parts) != 3:
            raise UsageError(f"range must be min:max:count, got {spec!r}")
        try:
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise UsageError(f"non-numeric range {spec!r}") from exc
    else:
        raise UsageError(f"bad range spec {spec!r}")
    if not (hi > lo and count >= 2):
        raise UsageError(f"range needs max > min and count >= 2, got {spec!r}")
    return np.linspace(lo, hi, int(count)), (float(lo), float(hi), int(count))


def _contours(grid: np.ndarray, xs: np.ndarray, ps: np.ndarray) -> list[list[list[float]]]:
    """Zero-level polylines of grid(x, p) in data coordinates."""
    lines = []
    for poly in measure.find_contours(grid, 0.0):
        rows, cols = poly[:, 0], poly[:, 1]
        xvals = np.interp(rows, np.arange(len(xs)), xs)
        pvals = np.interp(cols, np.arange(len(ps)), ps)
        lines.append([[float(a), float(b)] for a, b in zip(xvals, pvals)])
    return lines


def cmd_sweep(args: argparse.Namespace) -> int:
    resolved, config_bytes = _resolve(args)
    name = resolved.get("model")
    _require(resolved, "model", "out")
    if name == "coop":
        model = _build_model(resolved)
        d2 = float(resolved.get("d2") or 1.0)
        beta1 = coop_bif_points(model, Domain1D(l=float(resolved["l"])), 1)[0].value
        xs, _ = _parse_range(resolved.get("x_range"), (0.1 * beta1, 2.0 * beta1, 201))
        from .bifurcation import coop_p_sharp

        p_hi = 1.1 * coop_p_sharp(model, float(xs[0]))
        ps, _ = _parse_range(resolved.get("p_range"), (1e-3, p_hi, 201))
        xname = "beta"

        def row(x: float) -> tuple[np.ndarray, np.ndarray]:
            disp = DispersionData.from_jacobians(jacobians(model, float(x), d2))
            return disp.D(ps), disp.T(ps)

    elif name == "rm":
        params = dict(resolved.get("params", {}))
        k, theta = params.get("k"), params.get("theta", 1.0)
        if k is None:
            raise UsageError("rm sweep needs k in --params")
        _require(resolved, "d1", "d2")
        d1, d2 = float(resolved["d1"]), float(resolved["d2"])
        xs, _ = _parse_range(resolved.get("x_range"), (1e-3 * k, k * (1 - 1e-3), 201))
        from .bifurcation import PredatorPreyCurves

        curves = PredatorPreyCurves(k, theta, d1, d2)
        p_hi = 1.2 * curves.C1(curves.lambda_star) / d1
        ps, _ = _parse_range(resolved.get("p_range"), (1e-3, p_hi, 201))
        xname = "lambda"

        def row(x: float) -> tuple[np.ndarray, np.ndarray]:
            m = RMNonlocal(k=k, m=theta * (1.0 + 1.0 / float(x)), theta=theta)
            disp = DispersionData.from_jacobians(jacobians(m, d1, d2))
            return disp.D(ps), disp.T(ps)

    else:
        raise UsageError(f"sweep supports coop and rm; got {name!r}")

    env = os.environ.get("NRD_THREADS", "").strip()
    workers = int(env) if env else min(8, os.cpu_count() or 1)
    if workers < 1:
        raise UsageError(f"NRD_THREADS must be >= 1, got {env!r}")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(row, xs))
    D = np.stack([r[0] for r in rows])
    T = np.stack([r[1] for r in rows])

    out = resolved["out"]
    lines = [f"{xname},p,D,T"]
    for i, x in enumerate(xs):
        for j, p in enumerate(ps):
            lines.append(f"{_fmt(x)},{_fmt(p)},{_fmt(D[i, j])},{_fmt(T[i, j])}")
    with open(out, "w") as fh:
        fh.write("\n".join(lines) + "\n")

    stem, _ = os.path.splitext(out)
    contour_path = stem + "_contours.json"
    payload = {
        "x_name": xname,
        "D": _contours(D, xs, ps),
        "T": _contours(T, xs, ps),
    }
    with open(contour_path, "w") as fh:
        fh.write(_dumps(payload) + "\n")
    _write_manifest(out, "sweep", resolved, [out, contour_path], config_bytes)
    return 0


def _build_ic(spec, n_species: int, N: int, seed) -> InitialCondition | None:
    if spec is None:
        return None
    if not isinstance(spec, dict) or "type" not in spec:
        raise UsageError('ic spec must be an object with a "type" key')
    kind = spec["type"]
    if kind == "cosine":
        terms = spec.get("terms")
        if not terms or len(terms) != n_species:
            raise UsageError(
                f"cosine ic needs {n_species} [offset, amplitude, wavenumber] terms"
            )
        return InitialCondition.cosine(*[tuple(t) for t in terms])
    if kind == "random":
        return InitialCondition.random_positive(
            n_species, N, float(spec.get("low", 0.0)), float(spec.get("high", 1.0)),
            None if seed is None else int(seed),
        )
    if kind == "profile":
        values = spec.get("values")
        if values is None:
            raise UsageError("profile ic needs a 'values' array, one row per species")
        arr = np.asarray(values, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != n_species:
            raise UsageError(f"profile ic must be {n_species} rows of grid samples")
        return InitialCondition.from_arrays(arr)
    raise UsageError(f"unknown ic type {kind!r}")


def _write_long(path: str, traj, two: bool) -> None:
    x = traj.domain.x
    lines = ["t,x,u,v" if two else "t,x,u"]
    for f, t in enumerate(traj.times):
        for j in range(traj.domain.N):
            cells = [_fmt(t), _fmt(x[j]), _fmt(traj.frames[f, 0, j])]
            if two:
                cells.append(_fmt(traj.frames[f, 1, j]))
            lines.append(",".join(cells))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_frames(path: str, traj, two: bool) -> None:
    N = traj.domain.N
    header = ["t"] + [f"u{j}" for j in range(N)]
    if two:
        header += [f"v{j}" for j in range(N)]
    lines = [",".join(header)]
    for f, t in enumerate(traj.times):
        cells = [_fmt(t)] + [_fmt(v) for v in traj.frames[f, 0]]
        if two:
            cells += [_fmt(v) for v in traj.frames[f, 1]]
        lines.append(",".join(cells))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_simulate(args: argparse.Namespace) -> int:
    resolved, config_bytes = _resolve(args)
    model = _build_model(resolved)
    _require(resolved, "d1", "t_end")
    d2 = resolved.get("d2")
    if model.n_species == 2 and d2 is None:
        raise UsageError("two-species model needs --d2")
    dom = _domain(resolved)
    ic = _build_ic(resolved.get("ic"), model.n_species, dom.N, resolved.get("seed"))
    try:
        cfg = SimConfig(
            domain=dom,
            d1=float(resolved["d1"]),
            d2=None if d2 is None else float(d2),
            t_end=float(resolved["t_end"]),
            dt=float(resolved["dt"]),
            stepper=str(resolved["stepper"]),
            snapshot_every=int(resolved["snapshot_every"]),
            steady_tol=float(resolved["steady_tol"]),
            ic=ic,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    traj, outcome = run(model, cfg)

    outcome_json = _dumps(
        {
            "kind": outcome.kind,
            "mode": outcome.mode,
            "period": outcome.period,
            "evidence": outcome.evidence,
        }
    )
    sys.stdout.write(outcome_json + "\n")

    out = resolved.get("out")
    if out:
        two = model.n_species == 2
        fmt = resolved.get("format", "long")
        if fmt == "long":
            _write_long(out, traj, two)
        elif fmt == "frames":
            _write_frames(out, traj, two)
        else:
            raise UsageError(f"--format must be long or frames, got {fmt!r}")
        stem, _ = os.path.splitext(out)
        outcome_path = stem + "_outcome.json"
        with open(outcome_path, "w") as fh:
            fh.write(outcome_json + "\n")
        _write_manifest(out, "simulate", resolved, [out, outcome_path], config_bytes)
    return 0


def cmd_modes(args: argparse.Namespace) -> int:
    resolved, config_bytes = _resolve(args)
    path = resolved.get("in")
    if not path:
        raise UsageError("modes needs --in FRAME_CSV")
    try:
        with open(path) as fh:
            header = fh.readline().strip().split(",")
            last = None
            for line in fh:
                if line.strip():
                    last = line
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    if last is None:
        raise UsageError(f"{path} has no data rows")
    values = [float(v) for v in last.strip().split(",")]
    u_idx = [i for i, name in enumerate(header) if name.startswith("u")]
    v_idx = [i for i, name in enumerate(header) if name.startswith("v")]
    if not u_idx:
        raise UsageError(f"{path} has no u columns; expected the frames CSV format")
    dom = Domain1D(l=float(resolved["l"]), N=len(u_idx))  # coefficients are l-free
    species = [np.array([values[i] for i in u_idx])]
    names = ["amp_u"]
    if v_idx:
        if len(v_idx) != len(u_idx):
            raise UsageError("u and v column counts differ")
        species.append(np.array([values[i] for i in v_idx]))
        names.append("amp_v")
    amps = np.stack([decompose(s, dom).amplitudes for s in species])
    composite = np.sqrt(np.sum(amps**2, axis=0))
    floor = 1e-10 * max(1.0, float(composite.max()))
    lines = ["mode," + ",".join(names)]
    for i in range(dom.N):
        if composite[i] > floor:
            lines.append(",".join([str(i)] + [_fmt(a[i]) for a in amps]))
    _emit("\n".join(lines), resolved, "modes", config_bytes)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", help="model name: logistic, genlogistic, membrane, coop, coop2, rm")
    p.add_argument("--params", help="comma-separated name=value model parameters")
    p.add_argument("--localized", action="store_true", default=None,
                   help="replace averaged arguments by local values")
    p.add_argument("--d1", type=float, help="first diffusivity")
    p.add_argument("--d2", type=float, help="second diffusivity (two-species models)")
    p.add_argument("--l", type=float, help="domain is (0, l*pi)")
    p.add_argument("--N", type=int, help="grid cells")
    p.add_argument("--out", help="output file; a manifest is written alongside")
    p.add_argument("--format", choices=("long", "frames"), help="trajectory CSV layout")
    p.add_argument("--config", help="JSON config file (overrides flags)")
    p.add_argument("--seed", type=int, help="seed for random initial conditions")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nrd",
        description="Analyze and simulate reaction-diffusion systems with "
        "spatial-average kinetics on (0, l*pi) with Neumann boundaries.",
    )
    parser.add_argument("--version", action="version", version=f"nrd {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("analyze", help="classify the instability of the constant state")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bifpoints", help="closed-form / numeric bifurcation points")
    _add_common(p)
    p.add_argument("--max-mode", type=int, dest="max_mode", help="highest mode to report")
    p.set_defaults(func=cmd_bifpoints)

    p = sub.add_parser("sweep", help="dispersion grids and zero contours of D and T")
    _add_common(p)
    p.add_argument("--x-range", dest="x_range", help="parameter axis as min:max:count")
    p.add_argument("--p-range", dest="p_range", help="p axis as min:max:count")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="integrate a model and classify the outcome")
    _add_common(p)
    p.add_argument("--t-end", type=float, dest="t_end", help="final time")
    p.add_argument("--dt", type=float, help="time step")
    p.add_argument("--stepper", choices=("IMEX", "explicit-RK4"))
    p.add_argument("--snapshot-every", type=int, dest="snapshot_every")
    p.add_argument("--steady-tol", type=float, dest="steady_tol")
    p.add_argument("--ic", help='inline JSON initial condition; cosine terms are '
                   '[offset, amplitude, wavenumber] per species, e.g. '
                   '{"type":"cosine","terms":[[1.0,0.01,0.5]]}')
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("modes", help="mode-amplitude table from a saved frame")
    _add_common(p)
    p.add_argument("--in", dest="in_", metavar="FRAME_CSV", help="frames-format CSV")
    p.set_defaults(func=cmd_modes)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    # modes stores --in under in_; expose it like the other options
    if hasattr(args, "in_"):
        setattr(args, "in", args.in_)
        delattr(args, "in_")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PreconditionError as exc:
        print(f"precondition: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
