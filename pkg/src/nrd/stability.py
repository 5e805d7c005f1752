"""Linear stability of constant steady states for averaged reaction-diffusion systems.

Because the averaged terms vanish on every non-constant cosine mode, the
linearization block for mode i >= 1 is ``J_i = -lambda_i D + J_U`` while the
zero mode sees ``J_0 = J_U + J_Ubar``.  Writing p for the wave-number surrogate
lambda_i, per-mode stability of a two-species system is governed by

    T(p) = f_u + g_v - (d1 + d2) p          (trace of J_U - pD)
    D(p) = d1 d2 p^2 - (d1 g_v + d2 f_u) p + Det(J_U)

A mode can destabilize in a steady fashion exactly when D(p) < 0 (the
steady-state wave-number set I_S) and in an oscillatory fashion exactly when
T(p) > 0 with D(p) > 0 (the cycle wave-number set I_H).  The classifier
enumerates the sign patterns of Det(J_U), Tr(J_U), the discriminant of D, and
the ordering of the trace root p_* against the roots p_± of D.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BaseStateUnstable, DegenerateCase, MismatchAt, NotDestabilizable
from .model import JacobianData
from .spectral import Domain1D, eigenvalue

__all__ = [
    "DispersionData",
    "InstabilityReport",
    "scalar_mode_eigenvalues",
    "scalar_critical_diffusion",
    "block_matrices",
    "classify",
    "verify_intervals",
]

_TIE_TOL = 1e-12  # |Tr|, |Det| or relative p-collisions below this are refused


def scalar_mode_eigenvalues(
    f_u: float,
    f_ubar: float,
    r: float,
    d: float,
    domain: Domain1D,
    i_max: int,
) -> np.ndarray:
    """Eigenvalues mu_0..mu_{i_max} of the scalar linearization.

    mu_0 = r (f_u + f_ubar) for the constant mode; mu_i = -d lambda_i + r f_u
    for i >= 1.
    """
    if not (r > 0 and d > 0):
        raise ValueError(f"need r > 0 and d > 0, got r={r}, d={d}")
    lam = np.array([eigenvalue(domain, i) for i in range(i_max + 1)])
    mu = -d * lam + r * f_u
    mu[0] = r * (f_u + f_ubar)
    return mu


def scalar_critical_diffusion(f_u: float, r: float, domain: Domain1D) -> float:
    """Stability boundary d_1 = r f_u / lambda_1 of the constant state.

    For d above this value every non-constant mode decays; below it mode 1
    grows.  Raises NotDestabilizable when f_u <= 0, in which case the constant
    state survives all diffusion rates.
    """
    if f_u <= 0:
        raise NotDestabilizable(
            f"f_u = {f_u} <= 0: no diffusion rate destabilizes the constant state"
        )
    return r * f_u / eigenvalue(domain, 1)


def block_matrices(J: JacobianData, domain: Domain1D, i: int) -> tuple[np.ndarray, np.ndarray]:
    """Mode-i linearization blocks (J_i, J~_i).

    J_0 = J~_0 = J_U + J_Ubar; for i >= 1, J_i = -lambda_i D + J_U and
    J~_i = -lambda_i D + J_U + J_Ubar.  Only J_i governs mode i >= 1 (the
    averaged coupling annihilates mean-free modes); J~_i is provided for
    comparison against the localized system.
    """
    if i < 0:
        raise ValueError("mode index must be non-negative")
    if i == 0:
        J0 = J.J_U + J.J_Ubar
        return J0.copy(), J0.copy()
    lam = eigenvalue(domain, i)
    Ji = -lam * J.D + J.J_U
    return Ji, Ji + J.J_Ubar


@dataclass(frozen=True)
class DispersionData:
    """Trace/determinant dispersion functions of J_U - pD and their roots."""

    trace_JU: float
    det_JU: float
    d1: float
    d2: float
    cross: float  # d1*g_v + d2*f_u, the linear coefficient of D(p)
    Delta: float
    p_star: float
    p_minus: float | None
    p_plus: float | None

    @classmethod
    def from_jacobians(cls, J: JacobianData) -> "DispersionData":
        if J.n != 2:
            raise ValueError("dispersion analysis is defined for two-species systems")
        d1, d2 = J.diffusivities
        f_u, g_v = J.J_U[0, 0], J.J_U[1, 1]
        tr = float(np.trace(J.J_U))
        det = float(np.linalg.det(J.J_U))
        cross = d1 * g_v + d2 * f_u
        Delta = cross**2 - 4 * d1 * d2 * det
        p_star = tr / (d1 + d2)
        if Delta > 0:
            root = math.sqrt(Delta)
            p_minus = (cross - root) / (2 * d1 * d2)
            p_plus = (cross + root) / (2 * d1 * d2)
        else:
            p_minus = p_plus = None
        return cls(tr, det, d1, d2, cross, Delta, p_star, p_minus, p_plus)

    def T(self, p) -> float | np.ndarray:
        return self.trace_JU - (self.d1 + self.d2) * p

    def D(self, p) -> float | np.ndarray:
        return self.d1 * self.d2 * p**2 - self.cross * p + self.det_JU


@dataclass(frozen=True)
class InstabilityReport:
    """Classification of which wave numbers can destabilize the constant state."""

    case_label: str
    I_S: tuple[tuple[float, float], ...]
    I_H: tuple[tuple[float, float], ...]
    steady_modes: tuple[int, ...]
    hopf_modes: tuple[int, ...]
    dispersion: DispersionData = field(repr=False)

    def to_json_dict(self) -> dict:
        d = self.dispersion
        return {
            "case": self.case_label,
            "p_star": d.p_star,
            "p_minus": d.p_minus,
            "p_plus": d.p_plus,
            "I_S": [list(iv) for iv in self.I_S],
            "I_H": [list(iv) for iv in self.I_H],
            "steady_modes": list(self.steady_modes),
            "hopf_modes": list(self.hopf_modes),
        }


def _admissible(intervals: tuple[tuple[float, float], ...], domain: Domain1D) -> tuple[int, ...]:
    """Modes i >= 1 whose eigenvalue lambda_i lies strictly inside some interval."""
    if not intervals:
        return ()
    hi = max(b for _, b in intervals)
    modes = []
    i = 1
    while eigenvalue(domain, i) < hi:
        lam = eigenvalue(domain, i)
        if any(a < lam < b for a, b in intervals):
            modes.append(i)
        i += 1
    return tuple(modes)


def classify(J: JacobianData, domain: Domain1D | None = None) -> InstabilityReport:
    """Case label and wave-number intervals I_S, I_H for a two-species system.

    Requires the diffusion-free state to be stable (J_U + J_Ubar has negative
    trace and positive determinant), else BaseStateUnstable.  Sign ties within
    1e-12 on Tr(J_U), Det(J_U), or between p_* and p_± raise DegenerateCase —
    the theory covers only strict inequalities.  When a domain is supplied the
    admissible mode lists are filled from lambda_i = i^2/l^2 membership.
    """
    if J.n != 2:
        raise ValueError("classification is defined for two-species systems")
    J0 = J.J_U + J.J_Ubar
    tr0, det0 = float(np.trace(J0)), float(np.linalg.det(J0))
    if not (tr0 < 0 and det0 > 0):
        raise BaseStateUnstable(
            f"diffusion-free state is not stable: Tr(J0)={tr0:g}, Det(J0)={det0:g}"
        )

    disp = DispersionData.from_jacobians(J)
    tr, det = disp.trace_JU, disp.det_JU
    scale_t = max(1.0, abs(tr))
    scale_d = max(1.0, abs(det))
    if abs(tr) < _TIE_TOL * scale_t or abs(det) < _TIE_TOL * scale_d:
        raise DegenerateCase(
            f"Tr(J_U)={tr:g} or Det(J_U)={det:g} sits on a case boundary"
        )

    ps, pm, pp = disp.p_star, disp.p_minus, disp.p_plus
    roots_usable = disp.Delta > 0 and disp.cross > 0
    if roots_usable and any(
        abs(ps - p) <= _TIE_TOL * max(1.0, abs(ps)) for p in (pm, pp)
    ):
        raise DegenerateCase(f"p_* = {ps:g} collides with a root of D(p)")

    I_S: tuple[tuple[float, float], ...]
    I_H: tuple[tuple[float, float], ...]
    if det < 0:
        # D(0) < 0: a single positive root p_+ regardless of the discriminant sign
        p_pos = (disp.cross + math.sqrt(disp.Delta)) / (2 * disp.d1 * disp.d2)
        I_S = ((0.0, p_pos),)
        if tr < 0:
            label, I_H = "i", ()
        else:
            if abs(ps - p_pos) <= _TIE_TOL * max(1.0, abs(ps)):
                raise DegenerateCase(f"p_* = {ps:g} collides with the root of D(p)")
            if ps < p_pos:
                label, I_H = "iii-a", ()
            else:
                label, I_H = "iii-b", ((p_pos, ps),)
    elif tr > 0:
        # Det > 0, Tr > 0
        if not roots_usable:
            label, I_S, I_H = "ii-a", (), ((0.0, ps),)
        elif ps > pp:
            label, I_S, I_H = "ii-b", ((pm, pp),), ((0.0, pm), (pp, ps))
        elif ps > pm:
            label, I_S, I_H = "ii-c", ((pm, pp),), ((0.0, pm),)
        else:
            label, I_S, I_H = "ii-d", ((pm, pp),), ((0.0, ps),)
    else:
        # Det > 0, Tr < 0: no oscillatory window ever
        if not roots_usable:
            label, I_S, I_H = "iv-a", (), ()
        else:
            label, I_S, I_H = "iv-b", ((pm, pp),), ()

    steady = _admissible(I_S, domain) if domain is not None else ()
    hopf = _admissible(I_H, domain) if domain is not None else ()
    return InstabilityReport(label, I_S, I_H, steady, hopf, disp)


def verify_intervals(J: JacobianData, report: InstabilityReport, grid_size: int = 1000) -> bool:
    """Brute-force check of I_S/I_H against the spectrum of J_U - pD.

    Samples a log-uniform grid of p over (0, 10*max(1, p_plus, p_star)) and at
    each point compares interval membership with the actual eigenvalues: a
    saddle (real eigenvalues of opposite sign) must occur iff p is in I_S, and
    an unstable non-saddle (largest real part positive, eigenvalue product
    positive) iff p is in I_H.  The eigenvalue product equals D(p), so I_S
    collects exactly the wave numbers that destabilize through a zero
    eigenvalue and I_H those that destabilize through the trace sign change.
    (The unstable pair inside I_H is complex through most of the window but
    briefly real next to a root of D; both belong to the trace-driven window,
    which is why membership is tested via the product rather than by
    complexness.)  Points within 1e-8 of any interval endpoint are skipped.
    Raises MismatchAt on the first disagreement.
    """
    if grid_size < 1000:
        raise ValueError("grid_size must be at least 10^3")
    disp = report.dispersion
    upper = 10.0 * max(1.0, disp.p_star or 0.0, disp.p_plus or 0.0)
    grid = np.logspace(math.log10(upper) - 6, math.log10(upper), grid_size)

    endpoints = [e for iv in (*report.I_S, *report.I_H) for e in iv]
    for p in grid:
        if any(abs(p - e) < 1e-8 * max(1.0, abs(e)) for e in endpoints):
            continue
        in_S = any(a < p < b for a, b in report.I_S)
        in_H = any(a < p < b for a, b in report.I_H)
        eigs = np.linalg.eigvals(J.J_U - p * J.D)
        prod = float(np.real(eigs[0] * eigs[1]))
        saddle = prod < 0
        unstable_nonsaddle = prod > 0 and float(np.max(eigs.real)) > 0
        if saddle != in_S:
            raise MismatchAt(
                p, f"p={p:g}: saddle={saddle}, but I_S membership={in_S}"
            )
        if unstable_nonsaddle != in_H:
            raise MismatchAt(
                p, f"p={p:g}: unstable non-saddle={unstable_nonsaddle}, but I_H membership={in_H}"
            )
    return True
