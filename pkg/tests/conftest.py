import json
import pathlib
import time

import numpy as np
from hypothesis import settings

from nrd import Domain1D, InitialCondition, SimConfig, model_from_spec, run

settings.register_profile("suite", deadline=None, max_examples=50)
settings.load_profile("suite")

FIGS = pathlib.Path(__file__).resolve().parent.parent / "figs"


def load_config(name: str) -> dict:
    return json.loads((FIGS / f"{name}.json").read_text())


def build_ic(spec):
    if spec is None:
        return None
    if spec["type"] == "cosine":
        return InitialCondition.cosine(*[tuple(t) for t in spec["terms"]])
    if spec["type"] == "profile":
        return InitialCondition.from_arrays(np.asarray(spec["values"], dtype=float))
    raise ValueError(f"unknown ic type {spec['type']!r}")


def run_fig(name: str, *, override: dict | None = None):
    """Run one committed figure config; returns (trajectory, outcome, seconds)."""
    cfg = load_config(name)
    if override:
        cfg = {**cfg, **override}
    model = model_from_spec({"model": cfg["model"], "params": cfg.get("params", {})})
    config = SimConfig(
        domain=Domain1D(l=cfg["l"], N=cfg["N"]),
        d1=cfg["d1"],
        d2=cfg.get("d2"),
        t_end=cfg["t_end"],
        dt=cfg["dt"],
        stepper=cfg.get("stepper", "IMEX"),
        snapshot_every=cfg.get("snapshot_every", 100),
        steady_tol=cfg.get("steady_tol", 1e-9),
        ic=build_ic(cfg.get("ic")),
    )
    t0 = time.perf_counter()
    traj, outcome = run(model, config)
    return traj, outcome, time.perf_counter() - t0
