"""Time integration of averaged reaction-diffusion systems on (0, l*pi).

The semi-discretization is a cell-centered finite-volume grid with reflective
(Neumann) end closures, so the discrete Laplacian has exact zero row sums and
pure diffusion conserves mass to rounding.  Two steppers are provided:

* ``IMEX`` — backward-Euler diffusion through a pre-factored tridiagonal
  Cholesky solve, explicit reaction (the averaged arguments are recomputed
  from the current state each step and kept in the explicit stage so the
  implicit operator stays tridiagonal);
* ``explicit-RK4`` — classical RK4 on the full right side, guarded by the
  diffusive CFL bound dt <= 0.4 h^2 / max(d).

`run` integrates to ``t_end`` or early-exits once the semi-discrete residual
stays below ``steady_tol`` for 50 consecutive snapshots, then classifies the
outcome from the final frame's mode spectrum and, failing that, from
peak-to-peak analysis of the L2-norm time series (second half only).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded

from .errors import NegativeDensityWarning, NonFiniteState, WindowTooShort
from .model import GeneralAveragedLogistic, MembraneFeedback, jacobians
from .spectral import Domain1D, ModeSpectrum, decompose, dominant_mode, eigenvalue

__all__ = [
    "InitialCondition",
    "SimConfig",
    "Trajectory",
    "Outcome",
    "step",
    "run",
    "averaged_ode_reduce",
    "growth_rate_probe",
]

_STEPPERS = ("IMEX", "explicit-RK4")
_BLOWUP_LIMIT = 1e6
_STEADY_STREAK = 50


@dataclass(frozen=True, eq=False)
class InitialCondition:
    """Either per-species cosine terms (offset, amplitude, wavenumber) or a raw profile.

    The cosine form builds ``offset + amplitude*cos(q*x)`` per species on any
    grid; the Neumann eigenmode i corresponds to q = i/l.  A raw profile is
    tied to the sampled resolution.  Population models require non-negative
    data, which `build` enforces unless ``require_nonnegative`` is switched
    off.
    """

    terms: tuple[tuple[float, float, float], ...] | None = None
    profile: np.ndarray | None = None
    require_nonnegative: bool = True

    def __post_init__(self) -> None:
        if (self.terms is None) == (self.profile is None):
            raise ValueError("give exactly one of cosine terms or a raw profile")

    @classmethod
    def cosine(cls, *terms: tuple[float, float, float]) -> "InitialCondition":
        """One (offset, amplitude, wavenumber q) triple per species."""
        return cls(terms=tuple((float(c0), float(c1), float(q)) for c0, c1, q in terms))

    @classmethod
    def from_arrays(cls, values, require_nonnegative: bool = True) -> "InitialCondition":
        arr = np.atleast_2d(np.asarray(values, dtype=float))
        return cls(profile=arr, require_nonnegative=require_nonnegative)

    @classmethod
    def random_positive(
        cls, n_species: int, N: int, low: float, high: float, seed: int | None = None
    ) -> "InitialCondition":
        if not 0 <= low < high:
            raise ValueError(f"need 0 <= low < high, got [{low}, {high}]")
        rng = np.random.default_rng(seed)
        return cls(profile=rng.uniform(low, high, size=(n_species, N)))

    @property
    def n_species(self) -> int:
        return len(self.terms) if self.terms is not None else self.profile.shape[0]

    def build(self, domain: Domain1D) -> np.ndarray:
        if self.terms is not None:
            x = domain.x
            out = np.empty((len(self.terms), domain.N))
            for s, (c0, c1, q) in enumerate(self.terms):
                out[s] = c0 + c1 * np.cos(q * x)
        else:
            if self.profile.shape[1] != domain.N:
                raise ValueError(
                    f"profile has {self.profile.shape[1]} cells, domain has {domain.N}"
                )
            out = self.profile.astype(float).copy()
        if self.require_nonnegative and (out < 0).any():
            raise ValueError("initial condition has negative samples")
        return out


@dataclass(frozen=True)
class SimConfig:
    """Grid, diffusivities, stepping, and detection thresholds for one run."""

    domain: Domain1D
    d1: float
    t_end: float
    d2: float | None = None
    dt: float = 1e-3
    stepper: str = "IMEX"
    snapshot_every: int = 100
    steady_tol: float = 1e-9
    ic: InitialCondition | None = None

    def __post_init__(self) -> None:
        if self.stepper not in _STEPPERS:
            raise ValueError(f"stepper must be one of {_STEPPERS}, got {self.stepper!r}")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.t_end > self.dt:
            raise ValueError(f"t_end must exceed dt, got {self.t_end}")
        if not self.d1 > 0 or (self.d2 is not None and not self.d2 > 0):
            raise ValueError("diffusivities must be positive")
        if self.snapshot_every < 1:
            raise ValueError("snapshot_every must be >= 1")
        if self.steady_tol < 0:
            raise ValueError("steady_tol must be non-negative")
        if self.stepper == "explicit-RK4":
            dmax = self.d1 if self.d2 is None else max(self.d1, self.d2)
            limit = 0.4 * self.domain.h**2 / dmax
            if self.dt > limit:
                raise ValueError(
                    f"explicit-RK4 needs dt <= 0.4 h^2/max(d) = {limit:.3e}, got {self.dt}"
                )


@dataclass(eq=False)
class Trajectory:
    """Stored snapshots: times (F,), frames (F, n, N), and per-frame diagnostics."""

    domain: Domain1D
    times: np.ndarray
    frames: np.ndarray
    averages: np.ndarray  # (F, n) spatial averages, exact means of the frames
    norms: np.ndarray  # (F,) composite L2 norms over all species
    spectra: np.ndarray  # (F, n, N) cosine-mode amplitudes per species


@dataclass(frozen=True, eq=False)
class Outcome:
    """Classification of where a run ended up."""

    kind: str  # ConstantSteady | PatternedSteady | PeriodicOrbit | Undecided
    mode: int | None = None
    period: float | None = None
    evidence: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# spatial operators
# ---------------------------------------------------------------------------

def _laplacian(U: np.ndarray, h: float) -> np.ndarray:
    """Second difference with reflective ends; exact zero row sums."""
    out = np.empty_like(U)
    out[..., 1:-1] = U[..., 2:] - 2.0 * U[..., 1:-1] + U[..., :-2]
    out[..., 0] = U[..., 1] - U[..., 0]
    out[..., -1] = U[..., -2] - U[..., -1]
    out /= h * h
    return out


@lru_cache(maxsize=128)
def _imex_factor(N: int, h: float, dt: float, d: float):
    """Banded Cholesky factor of I - dt*d*L (upper storage, for cho_solve_banded)."""
    c = dt * d / (h * h)
    ab = np.zeros((2, N))
    ab[1, :] = 1.0 + 2.0 * c
    ab[1, 0] = ab[1, -1] = 1.0 + c
    ab[0, 1:] = -c
    return cholesky_banded(ab), False


def _diffusivities(model, config: SimConfig) -> np.ndarray:
    n = model.n_species
    if n == 1:
        return np.array([config.d1])
    if config.d2 is None:
        raise ValueError("two-species model needs d2")
    return np.array([config.d1, config.d2])


def _rhs(U: np.ndarray, model, ds: np.ndarray, h: float) -> np.ndarray:
    return ds[:, None] * _laplacian(U, h) + model.reaction(U, U.mean(axis=1))


def step(state: np.ndarray, model, config: SimConfig, *, t: float | None = None) -> np.ndarray:
    """Advance one time step with the configured stepper; returns a new array."""
    U = np.asarray(state, dtype=float)
    dom, dt = config.domain, config.dt
    ds = _diffusivities(model, config)
    if config.stepper == "IMEX":
        R = model.reaction(U, U.mean(axis=1))
        out = np.empty_like(U)
        for s in range(U.shape[0]):
            factor = _imex_factor(dom.N, dom.h, dt, float(ds[s]))
            out[s] = cho_solve_banded(factor, U[s] + dt * R[s], check_finite=False)
    else:
        k1 = _rhs(U, model, ds, dom.h)
        k2 = _rhs(U + 0.5 * dt * k1, model, ds, dom.h)
        k3 = _rhs(U + 0.5 * dt * k2, model, ds, dom.h)
        k4 = _rhs(U + dt * k3, model, ds, dom.h)
        out = U + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(out)):
        raise NonFiniteState(math.nan if t is None else t)
    return out


# ---------------------------------------------------------------------------
# trajectory recording and outcome classification
# ---------------------------------------------------------------------------

def _default_ic(model, domain: Domain1D) -> InitialCondition:
    eq = np.atleast_1d(model.equilibrium())
    return InitialCondition.cosine(*((float(c), 0.01, 1.0 / domain.l) for c in eq))


def _record(U: np.ndarray, domain: Domain1D):
    n = U.shape[0]
    avg = U.mean(axis=1)
    norm = math.sqrt(domain.h * float(np.sum(U * U)))
    spec = np.stack([decompose(U[s], domain).amplitudes for s in range(n)])
    return U.copy(), avg, norm, spec


def _composite(spec: np.ndarray) -> ModeSpectrum:
    """Euclidean cross-species combination of per-species mode amplitudes."""
    if spec.ndim == 3:  # average over frames first
        spec = np.sqrt(np.mean(spec**2, axis=0))
    return ModeSpectrum(np.sqrt(np.sum(spec**2, axis=0)))


def _refine_peak(times: np.ndarray, series: np.ndarray, j: int) -> float:
    """Vertex of the parabola through three samples around a peak index."""
    ym, y0, yp = series[j - 1], series[j], series[j + 1]
    denom = ym - 2.0 * y0 + yp
    if denom == 0.0:
        return float(times[j])
    return float(times[j] + 0.5 * (ym - yp) / denom * (times[j] - times[j - 1]))


def _periodic_analysis(times: np.ndarray, norms: np.ndarray) -> tuple[float, dict] | dict:
    """Period from L2-norm peaks in the second half; dict alone means no orbit."""
    half = len(norms) // 2
    t, s = times[half:], norms[half:]
    if len(s) < 5:
        return {"oscillation": "too few snapshots"}
    amp = float(s.max() - s.min())
    if amp <= max(1e-9, 1e-6 * float(np.mean(np.abs(s)))):
        return {"oscillation_amplitude": amp}
    peaks = [j for j in range(1, len(s) - 1) if s[j - 1] < s[j] > s[j + 1]]
    if len(peaks) < 6:
        return {"oscillation_amplitude": amp, "peaks": len(peaks)}
    peak_times = np.array([_refine_peak(t, s, j) for j in peaks])
    intervals = np.diff(peak_times)[-5:]
    spread = float((intervals.max() - intervals.min()) / intervals.mean())
    if spread >= 0.02:
        return {"oscillation_amplitude": amp, "peaks": len(peaks), "period_spread": spread}
    return float(intervals.mean()), {
        "oscillation_amplitude": amp,
        "peaks": len(peaks),
        "period_spread": spread,
    }


def run(model, config: SimConfig) -> tuple[Trajectory, Outcome]:
    """Integrate to t_end (or early steady exit) and classify the outcome."""
    dom = config.domain
    ds = _diffusivities(model, config)
    ic = config.ic if config.ic is not None else _default_ic(model, dom)
    if ic.n_species != model.n_species:
        raise ValueError(
            f"initial condition has {ic.n_species} species, model has {model.n_species}"
        )
    U = ic.build(dom)

    steps = int(round(config.t_end / config.dt))
    every = config.snapshot_every
    frames, avgs, norms, specs, times = [], [], [], [], []

    def snapshot(t: float) -> None:
        f, a, nrm, sp = _record(U, dom)
        times.append(t)
        frames.append(f)
        avgs.append(a)
        norms.append(nrm)
        specs.append(sp)

    snapshot(0.0)
    warned_negative = False
    streak = 0
    resid = math.inf
    steady = False
    for k in range(1, steps + 1):
        t = k * config.dt
        U = step(U, model, config, t=t)
        if k % every:
            continue
        if np.abs(U).max() > _BLOWUP_LIMIT:
            raise NonFiniteState(t, f"density exceeded {_BLOWUP_LIMIT:g} at t = {t:g}")
        if not warned_negative and (U < 0).any():
            warnings.warn(
                f"negative density at t = {t:g} (not clipped)",
                NegativeDensityWarning,
                stacklevel=2,
            )
            warned_negative = True
        snapshot(t)
        resid = float(np.abs(_rhs(U, model, ds, dom.h)).max())
        streak = streak + 1 if resid < config.steady_tol else 0
        if streak >= _STEADY_STREAK:
            steady = True
            break

    traj = Trajectory(
        domain=dom,
        times=np.asarray(times),
        frames=np.stack(frames),
        averages=np.stack(avgs),
        norms=np.asarray(norms),
        spectra=np.stack(specs),
    )

    if steady:
        mode = dominant_mode(_composite(traj.spectra[-1]))
        evidence = {"residual": resid, "consecutive_snapshots": _STEADY_STREAK}
        if mode is None:
            return traj, Outcome("ConstantSteady", evidence=evidence)
        return traj, Outcome("PatternedSteady", mode=mode, evidence=evidence)

    analysis = _periodic_analysis(traj.times, traj.norms)
    if isinstance(analysis, tuple):
        period, evidence = analysis
        half = len(traj.norms) // 2
        mode = dominant_mode(_composite(traj.spectra[half:]))
        return traj, Outcome("PeriodicOrbit", mode=mode, period=period, evidence=evidence)
    analysis["residual"] = resid
    return traj, Outcome("Undecided", evidence=analysis)


# ---------------------------------------------------------------------------
# exact mean reduction
# ---------------------------------------------------------------------------

def averaged_ode_reduce(model, ic_mean: float, t_end: float, dt: float):
    """RK4 on the closed mean equation ubar' = a - (b+c) ubar - (d+e) ubar^2.

    Accepts a GeneralAveragedLogistic or a MembraneFeedback (mapped through
    `as_general`).  Returns (times, values).
    """
    if isinstance(model, MembraneFeedback):
        model = model.as_general()
    if not isinstance(model, GeneralAveragedLogistic):
        raise TypeError("averaged_ode_reduce needs the averaged-logistic family")
    lin = model.b + model.c
    quad = model.d + model.e
    r = model.r

    def f(x: float) -> float:
        return r * (model.a - lin * x - quad * x * x)

    steps = int(round(t_end / dt))
    times = np.arange(steps + 1) * dt
    values = np.empty(steps + 1)
    values[0] = x = float(ic_mean)
    for k in range(1, steps + 1):
        k1 = f(x)
        k2 = f(x + 0.5 * dt * k1)
        k3 = f(x + 0.5 * dt * k2)
        k4 = f(x + dt * k3)
        x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        values[k] = x
    return times, values


# ---------------------------------------------------------------------------
# empirical growth-rate measurement
# ---------------------------------------------------------------------------

def _mode_block(model, ds: np.ndarray, domain: Domain1D, mode: int) -> np.ndarray:
    J = jacobians(model, float(ds[0]), float(ds[1]) if len(ds) > 1 else None)
    lam = eigenvalue(domain, mode)
    return J.J_U - lam * J.D


def growth_rate_probe(
    model,
    d,
    mode: int = 1,
    config: SimConfig | None = None,
    *,
    domain: Domain1D | None = None,
    eps: float = 1e-4,
):
    """Measure the linear growth rate of mode ``mode`` around the equilibrium.

    Seeds equilibrium + eps*w*cos(mode*x/l) with w the leading eigenvector of
    the mode block -lam_i D + J_U, integrates, and fits the stored mode
    amplitudes over the linear window (samples within a factor of 8 of the
    initial amplitude).  Returns the fitted slope for a real leading
    eigenvalue, or (growth, angular frequency) for a complex pair, extracted
    from the one-step linear map between consecutive snapshot coefficients.

    ``d`` is a scalar diffusivity or a (d1, d2) pair.  Give either a full
    ``config`` or just a ``domain`` (window is then sized from the analytic
    rate).  Raises WindowTooShort when fewer than 20 snapshots are usable.
    """
    ds = np.atleast_1d(np.asarray(d, dtype=float))
    n = model.n_species
    if len(ds) != n:
        raise ValueError(f"model has {n} species but got {len(ds)} diffusivities")
    if config is None:
        if domain is None:
            raise ValueError("give a config or a domain")
        block = _mode_block(model, ds, domain, mode)
        mu = np.linalg.eigvals(block)
        lead = mu[np.argmax(mu.real)]
        rate = abs(lead.real)
        t_end = math.log(8.0) / max(rate, 1e-3)
        if abs(lead.imag) > 1e-12:
            t_end = max(t_end, 3.0 * 2.0 * math.pi / abs(lead.imag))
        config = SimConfig(
            domain=domain,
            d1=float(ds[0]),
            d2=float(ds[1]) if n > 1 else None,
            t_end=t_end,
            dt=0.01,
            snapshot_every=10,
            steady_tol=0.0,
        )
    else:
        domain = config.domain

    block = _mode_block(model, ds, domain, mode)
    mu = np.linalg.eigvals(block)
    lead = mu[np.argmax(mu.real)]
    is_complex = abs(lead.imag) > 1e-12

    eq = np.atleast_1d(model.equilibrium()).astype(float)
    if is_complex or n > 1:
        w, vecs = np.linalg.eig(block)
        vec = vecs[:, np.argmax(w.real)]
        direction = np.real(vec)
        if np.abs(direction).max() < 1e-8:
            direction = np.imag(vec)
    else:
        direction = np.ones(1)
    direction = direction / np.abs(direction).max()

    amp0 = eps * max(1.0, float(np.abs(eq).max()))
    profile = eq[:, None] + amp0 * direction[:, None] * np.cos(mode * domain.x / domain.l)
    cfg = SimConfig(
        domain=config.domain,
        d1=config.d1,
        d2=config.d2,
        t_end=config.t_end,
        dt=config.dt,
        stepper=config.stepper,
        snapshot_every=config.snapshot_every,
        steady_tol=0.0,
        ic=InitialCondition.from_arrays(profile, require_nonnegative=False),
    )
    traj, _ = run(model, cfg)

    coeffs = traj.spectra[:, :, mode]  # (F, n)
    amps = np.sqrt(np.sum(coeffs**2, axis=1))
    a0 = amps[0]
    usable = (amps > a0 / 8.0) & (amps < a0 * 8.0) & (amps > 1e-13)
    if not usable[0]:
        usable[0] = True
    # keep the contiguous window from t=0
    stop = int(np.argmin(usable)) if not usable.all() else len(usable)
    if stop < 20:
        raise WindowTooShort(f"only {stop} snapshots in the linear window")

    if not is_complex:
        slope = np.polyfit(traj.times[:stop], np.log(amps[:stop]), 1)[0]
        return float(slope)

    Y = coeffs[:stop].T  # (n, m)
    Y0, Y1 = Y[:, :-1], Y[:, 1:]
    G = Y1 @ np.linalg.pinv(Y0)
    gmu = np.log(np.linalg.eigvals(G).astype(complex)) / (
        traj.times[1] - traj.times[0]
    )
    glead = gmu[np.argmax(gmu.real)]
    return float(glead.real), float(abs(glead.imag))
