"""Reaction kinetics with local and spatially averaged arguments.

Every model describes a reaction system

    u_t = d1 * u_xx + r * f(u, v, ubar, vbar)
    v_t = d2 * v_xx + r * g(u, v, ubar, vbar)      (two-species case)

where ``ubar``/``vbar`` are the spatial averages of the densities.  The kinetic
parameter ``r`` is carried by every model for a uniform signature; models whose
published form has no such factor keep ``r = 1``.

Conventions
-----------
* ``reaction(U, means)`` evaluates the full reaction rates (including ``r``)
  with the averaged arguments taken from ``means`` — or from the local values
  when the model is ``localized``.
* ``ju()`` / ``jubar()`` return the full-reaction partial-derivative blocks
  J_U and J_Ubar at the equilibrium (including ``r``), *without* localized
  folding; :func:`jacobians` applies the folding.
* Scalar models additionally expose ``f_u``, ``f_ubar``, ``f_uu``, ``f_uubar``,
  ``f_uuu`` — partials of the r-free kinetics ``f`` — because the scalar
  stability/bifurcation formulas take ``r`` as a separate argument.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, ClassVar, Sequence

import numpy as np

from .errors import NumericalError, ParameterConstraintViolated

__all__ = [
    "Equilibrium",
    "JacobianData",
    "NonlocalLogistic",
    "GeneralAveragedLogistic",
    "MembraneFeedback",
    "CoopLV",
    "CoopLV2",
    "RMNonlocal",
    "UserModel",
    "ScalarUserModel",
    "MODEL_REGISTRY",
    "equilibrium",
    "jacobians",
    "model_from_spec",
]

_FD_STEP = 1e-6  # relative step for first-order finite-difference partials


@dataclass(frozen=True)
class Equilibrium:
    """A constant steady state (per-species densities)."""

    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))

    @property
    def n_species(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class JacobianData:
    """Linearization blocks (J_U, J_Ubar) and the diffusion matrix D at a steady state."""

    J_U: np.ndarray
    J_Ubar: np.ndarray
    D: np.ndarray

    def __post_init__(self) -> None:
        J_U = np.atleast_2d(np.asarray(self.J_U, dtype=float))
        J_Ubar = np.atleast_2d(np.asarray(self.J_Ubar, dtype=float))
        D = np.atleast_2d(np.asarray(self.D, dtype=float))
        for name, M in (("J_U", J_U), ("J_Ubar", J_Ubar), ("D", D)):
            if M.shape != J_U.shape:
                raise ValueError(f"{name} has shape {M.shape}, expected {J_U.shape}")
        if not np.allclose(D, np.diag(np.diag(D))):
            raise ValueError("diffusion matrix must be diagonal")
        if np.any(np.diag(D) <= 0):
            raise ValueError("diffusion coefficients must be strictly positive")
        object.__setattr__(self, "J_U", J_U)
        object.__setattr__(self, "J_Ubar", J_Ubar)
        object.__setattr__(self, "D", D)

    @property
    def n(self) -> int:
        return self.J_U.shape[0]

    @property
    def diffusivities(self) -> np.ndarray:
        return np.diag(self.D)


class _ModelBase:
    """Shared behaviour: localized evaluation, FD fallbacks for partials."""

    n_species: ClassVar[int]
    r: float
    localized: bool

    # -- kinetics ---------------------------------------------------------

    def _rates(self, U: np.ndarray, A: np.ndarray) -> np.ndarray:
        """Raw reaction rates r*f with explicit averaged-argument array A."""
        raise NotImplementedError

    def reaction(self, U: np.ndarray, means: np.ndarray) -> np.ndarray:
        """Full reaction rates; substitutes local values for the averages if localized.

        ``U`` has shape (n_species, ...) and ``means`` shape (n_species,).
        """
        U = np.asarray(U, dtype=float)
        if self.localized:
            A = U
        else:
            means = np.asarray(means, dtype=float)
            A = means.reshape((self.n_species,) + (1,) * (U.ndim - 1))
            A = np.broadcast_to(A, U.shape)
        return self._rates(U, A)

    # -- equilibrium and linearization ------------------------------------

    def equilibrium(self) -> np.ndarray:
        raise NotImplementedError

    def ju(self) -> np.ndarray:
        """J_U at the equilibrium (finite differences unless overridden)."""
        return self._fd_block(vary_local=True)

    def jubar(self) -> np.ndarray:
        """J_Ubar at the equilibrium (finite differences unless overridden)."""
        return self._fd_block(vary_local=False)

    def _fd_block(self, vary_local: bool) -> np.ndarray:
        n = self.n_species
        ustar = self.equilibrium()
        out = np.empty((n, n))
        for k in range(n):
            h = _FD_STEP * max(1.0, abs(ustar[k]))
            up, dn = ustar.copy(), ustar.copy()
            up[k] += h
            dn[k] -= h
            if vary_local:
                hi = self._rates(up, ustar)
                lo = self._rates(dn, ustar)
            else:
                hi = self._rates(ustar, up)
                lo = self._rates(ustar, dn)
            out[:, k] = (hi - lo) / (2 * h)
        return out


class _ScalarModelBase(_ModelBase):
    """Scalar models expose r-free partials of f for the scalar theory."""

    n_species: ClassVar[int] = 1

    def _f(self, u: float, ub: float) -> float:
        """r-free kinetics at scalar arguments."""
        return float(self._rates(np.array([u]), np.array([ub]))[0]) / self.r

    @property
    def u_star(self) -> float:
        return float(self.equilibrium()[0])

    # FD fallbacks: second and third partials use wider steps than the first
    # derivatives because the difference quotients divide by h^2 and h^3.

    @property
    def f_u(self) -> float:
        u, h = self.u_star, _FD_STEP * max(1.0, abs(self.u_star))
        return (self._f(u + h, u) - self._f(u - h, u)) / (2 * h)

    @property
    def f_ubar(self) -> float:
        u, h = self.u_star, _FD_STEP * max(1.0, abs(self.u_star))
        return (self._f(u, u + h) - self._f(u, u - h)) / (2 * h)

    @property
    def f_uu(self) -> float:
        u, h = self.u_star, 1e-4 * max(1.0, abs(self.u_star))
        return (self._f(u + h, u) - 2 * self._f(u, u) + self._f(u - h, u)) / h**2

    @property
    def f_uubar(self) -> float:
        u, h = self.u_star, 1e-4 * max(1.0, abs(self.u_star))
        return (
            self._f(u + h, u + h) - self._f(u + h, u - h)
            - self._f(u - h, u + h) + self._f(u - h, u - h)
        ) / (4 * h**2)

    @property
    def f_uuu(self) -> float:
        u, h = self.u_star, 1e-3 * max(1.0, abs(self.u_star))
        return (
            self._f(u + 2 * h, u) - 2 * self._f(u + h, u)
            + 2 * self._f(u - h, u) - self._f(u - 2 * h, u)
        ) / (2 * h**3)

    def ju(self) -> np.ndarray:
        return np.array([[self.r * self.f_u]])

    def jubar(self) -> np.ndarray:
        return np.array([[self.r * self.f_ubar]])


@dataclass(frozen=True)
class NonlocalLogistic(_ScalarModelBase):
    """u_t = d u_xx + r u (1 + a u − b ubar): logistic growth shaped by the population mean.

    Requires b > a so that the positive equilibrium u* = 1/(b−a) exists.
    """

    a: float
    b: float
    r: float = 1.0
    localized: bool = False

    def __post_init__(self) -> None:
        if not self.b > self.a:
            raise ParameterConstraintViolated(
                f"NonlocalLogistic needs b > a, got a={self.a}, b={self.b}"
            )
        if not self.r > 0:
            raise ParameterConstraintViolated(f"r must be positive, got {self.r}")

    def _rates(self, U: np.ndarray, A: np.ndarray) -> np.ndarray:
        u, ub = U[0], A[0]
        return np.asarray([self.r * u * (1 + self.a * u - self.b * ub)])

    def equilibrium(self) -> np.ndarray:
        return np.array([1.0 / (self.b - self.a)])

    # closed-form partials of f = u(1 + a u − b ubar) at u* = 1/(b−a)

    @property
    def f_u(self) -> float:
        return self.a / (self.b - self.a)

    @property
    def f_ubar(self) -> float:
        return -self.b / (self.b - self.a)

    @property
    def f_uu(self) -> float:
        return 2 * self.a

    @property
    def f_uubar(self) -> float:
        return -self.b

    @property
    def f_uuu(self) -> float:
        return 0.0


@dataclass(frozen=True)
class GeneralAveragedLogistic(_ScalarModelBase):
    """u_t = d u_xx + a − b ubar − c u − d ubar² − e u ubar, the averaged-logistic family.

    Requires a > 0 and d + e > 0; the unique positive equilibrium solves
    a − (b+c) u − (d+e) u² = 0.  The spatial mean obeys the closed ODE
    ubar_t = a − (b+c) ubar − (d+e) ubar² exactly.
    """

    a: float
    b: float
    c: float
    d: float
    e: float
    r: float = 1.0
    localized: bool = False

    def __post_init__(self) -> None:
        if not self.a > 0:
            raise ParameterConstraintViolated(f"need a > 0, got a={self.a}")
        if not self.d + self.e > 0:
            raise ParameterConstraintViolated(
                f"need d + e > 0, got d={self.d}, e={self.e}"
            )
        if not self.r > 0:
            raise ParameterConstraintViolated(f"r must be positive, got {self.r}")

    def _rates(self, U: np.ndarray, A: np.ndarray) -> np.ndarray:
        u, ub = U[0], A[0]
        return np.asarray(
            [self.r * (self.a - self.b * ub - self.c * u - self.d * ub**2 - self.e * u * ub)]
        )

    def equilibrium(self) -> np.ndarray:
        s, q = self.b + self.c, self.d + self.e
        return np.array([(-s + np.sqrt(s * s + 4 * self.a * q)) / (2 * q)])

    @property
    def f_u(self) -> float:
        return -(self.c + self.e * self.u_star)

    @property
    def f_ubar(self) -> float:
        u = self.u_star
        return -(self.b + 2 * self.d * u + self.e * u)

    @property
    def f_uu(self) -> float:
        return 0.0

    @property
    def f_uubar(self) -> float:
        return -self.e

    @property
    def f_uuu(self) -> float:
        return 0.0

    def mean_ode_rhs(self, ubar: float | np.ndarray):
        """Right side of the exact ODE for the spatial mean."""
        return self.r * (self.a - (self.b + self.c) * ubar - (self.d + self.e) * ubar**2)


@dataclass(frozen=True)
class MembraneFeedback(_ScalarModelBase):
    """Bulk-to-membrane exchange with mean-limited binding and positive feedback.

    u is the membrane-bound density; attachment k_on and feedback k_fb are
    throttled by the free pool (1 − ubar), detachment is k_off:

        u_t = d u_xx + k_on (1 − ubar) + k_fb (1 − ubar) u − k_off u.

    This is the averaged-logistic family with (a,b,c,d,e) =
    (k_on, k_on, k_off − k_fb, 0, k_fb); see :meth:`as_general`.
    """

    k_on: float
    k_fb: float
    k_off: float
    r: float = 1.0
    localized: bool = False

    def __post_init__(self) -> None:
        if not (self.k_on > 0 and self.k_fb > 0 and self.k_off >= 0):
            raise ParameterConstraintViolated(
                "MembraneFeedback needs k_on > 0, k_fb > 0, k_off >= 0, got "
                f"({self.k_on}, {self.k_fb}, {self.k_off})"
            )
        if not self.r > 0:
            raise ParameterConstraintViolated(f"r must be positive, got {self.r}")

    def as_general(self) -> GeneralAveragedLogistic:
        return GeneralAveragedLogistic(
            a=self.k_on,
            b=self.k_on,
            c=self.k_off - self.k_fb,
            d=0.0,
            e=self.k_fb,
            r=self.r,
            localized=self.localized,
        )

    def _rates(self, U: np.ndarray, A: np.ndarray) -> np.ndarray:
        u, ub = U[0], A[0]
        return np.asarray(
            [self.r * (self.k_on * (1 - ub) + self.k_fb * (1 - ub) * u - self.k_off * u)]
        )

    def equilibrium(self) -> np.ndarray:
        # positive root of k_fb u^2 + (k_on + k_off - k_fb) u - k_on = 0
        p = self.k_on + self.k_off - self.k_fb
        return np.array(
            [(-p + np.sqrt(p * p + 4 * self.k_fb * self.k_on)) / (2 * self.k_fb)]
        )

    @property
    def f_u(self) -> float:
        return self.as_general().f_u

    @property
    def f_ubar(self) -> float:
        g = self.as_general()
        # evaluate at our own equilibrium (identical to g's)
        u = self.u_star
        return -(g.b + 2 * g.d * u + g.e * u)

    @property
    def f_uu(self) -> float:
        return 0.0

    @property
    def f_uubar(self) -> float:
        return -self.k_fb

    @property
    def f_uuu(self) -> float:
        return 0.0

    def mean_ode_rhs(self, ubar: float | np.ndarray):
        return self.as_general().mean_ode_rhs(ubar)


@dataclass(frozen=True)
class CoopLV(_ModelBase):
    """Cooperative Lotka–Volterra pair; the u-equation saturates on the mean of u.

        u_t = d1 u_xx + u (1 − a ubar + b v)
        v_t = d2 v_xx + v (1 + c u − d v)

    Requires a,b,c,d > 0 and ad − bc > 0 (weak cooperation), giving the
    coexistence state u* = (d+b)/(ad−bc), v* = (a+c)/(ad−bc).
    """

    a: float
    b: float
    c: float
    d: float
    r: float = 1.0
    localized: bool = False
    n_species: ClassVar[int] = 2

    def __post_init__(self) -> None:
        if min(self.a, self.b, self.c, self.d) <= 0:
            raise ParameterConstraintViolated("CoopLV parameters must be positive")
        if not self.a * self.d - self.b * self.c > 0:
            raise ParameterConstraintViolated(
                f"CoopLV needs ad − bc > 0, got {self.a * self.d - self.b * self.c}"
            )

    def _rates(self, U: np.ndarray, A: np.ndarray) -> np.ndarray:
        u, v = U[0], U[1]
        ub = A[0]
        return np.stack(
            [
                self.r * u * (1 - self.a * ub + self.b * v),
                self.r * v * (1 + self.c * u - self.d * v),
            ]
        )

    def equilibrium(self) -> np.ndarray:
        det = self.a * self.d - self.b * self.c
        return np.array([(self.d + self.b) / det, (self.a + self.c) / det])

    def ju(self) -> np.ndarray:
        u, v = self.equilibrium()
        return self.r * np.array([[0.0, self.b * u], [self.c * v, -self.d * v]])

    def jubar(self) -> np.ndarray:
        u, _ = self.equilibrium()
        return self.r * np.array([[-self.a * u, 0.0], [0.0, 0.0]])


@dataclass(frozen=True)
class CoopLV2(_ModelBase):
    """Cooperative pair with averaged crowding in both equations.

        u_t = d1 u_xx + u (1 − a ubar + b v)
        v_t = d2 v_xx + v (1 + c u + d v − e vbar)

    Requires e > d and a(e−d) − bc > 0; then u* = (e−d+b)/(a(e−d)−bc) and
    v* = (a+c)/(a(e−d)−bc).
    """

    a: float
    b: float
    c: float
    d: float
    e: float
    r: float = 1.0
    localized: bool = False
    n_species: ClassVar[int] = 2

    def __post_init__(self) -> None:
        if min(self.a, self.b, self.c, self.d, self.e) <= 0:
            raise ParameterConstraintViolated("CoopLV2 parameters must be positive")
        if not self.e > self.d:
            raise ParameterConstraintViolated(
                f"CoopLV2 needs e > d, got d={self.d}, e={self.e}"
            )
        if not self.a * (self.e - self.d) - self.b * self.c > 0:
            raise ParameterConstraintViolated("CoopLV2 needs a(e−d) − bc > 0")

    def _rates(self, U: np.ndarray, A: np.ndarray) -> np.ndarray:
        u, v = U[0], U[1]
        ub, vb = A[0], A[1]
        return np.stack(
            [
                self.r * u * (1 - self.a * ub + self.b * v),
                self.r * v * (1 + self.c * u + self.d * v - self.e * vb),
            ]
        )

    def equilibrium(self) -> np.ndarray:
        det = self.a * (self.e - self.d) - self.b * self.c
        return np.array([(self.e - self.d + self.b) / det, (self.a + self.c) / det])

    def ju(self) -> np.ndarray:
        u, v = self.equilibrium()
        return self.r * np.array([[0.0, self.b * u], [self.c * v, self.d * v]])

    def jubar(self) -> np.ndarray:
        u, v = self.equilibrium()
        return self.r * np.array([[-self.a * u, 0.0], [0.0, -self.e * v]])


@dataclass(frozen=True)
class RMNonlocal(_ModelBase):
    """Rosenzweig–MacArthur predator–prey with mean-field prey crowding.

        u_t = d1 u_xx + u (1 − ubar/k) − m u v / (1 + u)
        v_t = d2 v_xx − theta v + m u v / (1 + u)

    The coexistence state is (lam, v_lam) with lam = theta/(m − theta) and
    v_lam = (k − lam)(1 + lam)/(k m); requires 0 < lam < k.
    """

    k: float
    m: float
    theta: float
    r: float = 1.0
    localized: bool = False
    n_species: ClassVar[int] = 2

    def __post_init__(self) -> None:
        if not (self.k > 0 and self.theta > 0):
            raise ParameterConstraintViolated("RMNonlocal needs k > 0 and theta > 0")
        if not self.m > self.theta:
            raise ParameterConstraintViolated(
                f"RMNonlocal needs m > theta, got m={self.m}, theta={self.theta}"
            )
        if not self.lam < self.k:
            raise ParameterConstraintViolated(
                f"RMNonlocal needs lam = theta/(m−theta) < k, got lam={self.lam}, k={self.k}"
            )

    @property
    def lam(self) -> float:
        """Prey equilibrium density theta/(m − theta)."""
        return self.theta / (self.m - self.theta)

    def _rates(self, U: np.ndarray, A: np.ndarray) -> np.ndarray:
        u, v = U[0], U[1]
        ub = A[0]
        fr = self.m * u / (1 + u)
        return np.stack(
            [
                self.r * (u * (1 - ub / self.k) - fr * v),
                self.r * (-self.theta * v + fr * v),
            ]
        )

    def equilibrium(self) -> np.ndarray:
        lam = self.lam
        return np.array([lam, (self.k - lam) * (1 + lam) / (self.k * self.m)])

    def C1(self) -> float:
        """Trace of J_U: lam(k − lam)/(k(1 + lam))."""
        lam = self.lam
        return lam * (self.k - lam) / (self.k * (1 + lam))

    def ju(self) -> np.ndarray:
        lam = self.lam
        A = (self.k - lam) / (self.k * (1 + lam))  # = C1/lam
        return self.r * np.array([[self.C1(), -self.theta], [A, 0.0]])

    def jubar(self) -> np.ndarray:
        return self.r * np.array([[-self.lam / self.k, 0.0], [0.0, 0.0]])


@dataclass(frozen=True)
class UserModel(_ModelBase):
    """A user-supplied reaction system.

    ``kinetics(U, A, r)`` must accept arrays of shape (n_species, ...) for the
    local densities U and averaged arguments A and return rates of the same
    shape.  The equilibrium is found by damped Newton from ``equilibrium_seed``
    unless ``equilibrium_values`` is given; Jacobian blocks fall back to
    central finite differences unless analytic callables are supplied.
    """

    kinetics: Callable[[np.ndarray, np.ndarray, float], np.ndarray]
    n_species_: int
    r: float = 1.0
    localized: bool = False
    equilibrium_seed: Sequence[float] | None = None
    equilibrium_values: Sequence[float] | None = None
    ju_fn: Callable[[np.ndarray], np.ndarray] | None = None
    jubar_fn: Callable[[np.ndarray], np.ndarray] | None = None
    _eq_cache: list = field(default_factory=list, compare=False, repr=False)

    @property
    def n_species(self) -> int:  # type: ignore[override]
        return self.n_species_

    def _rates(self, U: np.ndarray, A: np.ndarray) -> np.ndarray:
        return np.asarray(self.kinetics(U, A, self.r), dtype=float)

    def equilibrium(self) -> np.ndarray:
        if self.equilibrium_values is not None:
            return np.asarray(self.equilibrium_values, dtype=float)
        if self._eq_cache:
            return self._eq_cache[0].copy()
        if self.equilibrium_seed is None:
            raise ParameterConstraintViolated(
                "UserModel needs equilibrium_values or equilibrium_seed"
            )
        x = np.asarray(self.equilibrium_seed, dtype=float)
        res = self._rates(x, x)
        for _ in range(100):
            if np.max(np.abs(res)) < 1e-12:
                break
            Jtot = self._constant_state_jacobian(x)
            try:
                step = np.linalg.solve(Jtot, -res)
            except np.linalg.LinAlgError as exc:
                raise NumericalError("singular Jacobian in equilibrium search") from exc
            # damp until the residual actually shrinks
            lam, best = 1.0, np.max(np.abs(res))
            for _ in range(30):
                trial = x + lam * step
                tres = self._rates(trial, trial)
                if np.max(np.abs(tres)) < best:
                    x, res = trial, tres
                    break
                lam *= 0.5
            else:
                raise NumericalError("equilibrium search stalled (damping exhausted)")
        else:
            raise NumericalError("equilibrium search did not converge in 100 iterations")
        self._eq_cache.append(x.copy())
        return x

    def _constant_state_jacobian(self, x: np.ndarray) -> np.ndarray:
        """d/dx of U -> rates(U, U): local plus averaged partials."""
        n = self.n_species
        J = np.empty((n, n))
        for k_ in range(n):
            h = _FD_STEP * max(1.0, abs(x[k_]))
            up, dn = x.copy(), x.copy()
            up[k_] += h
            dn[k_] -= h
            J[:, k_] = (self._rates(up, up) - self._rates(dn, dn)) / (2 * h)
        return J

    def ju(self) -> np.ndarray:
        if self.ju_fn is not None:
            return np.atleast_2d(np.asarray(self.ju_fn(self.equilibrium()), dtype=float))
        return self._fd_block(vary_local=True)

    def jubar(self) -> np.ndarray:
        if self.jubar_fn is not None:
            return np.atleast_2d(np.asarray(self.jubar_fn(self.equilibrium()), dtype=float))
        return self._fd_block(vary_local=False)


class ScalarUserModel(UserModel, _ScalarModelBase):
    """Scalar user model: adds the finite-difference f_u/f_uu/... properties.

    The inherited partials are r-free (``_f`` divides the rate by r), matching
    the convention of the built-in scalar models.
    """


def equilibrium(model) -> Equilibrium:
    """The model's constant steady state as an :class:`Equilibrium`."""
    return Equilibrium(model.equilibrium())


def jacobians(model, d1: float, d2: float | None = None) -> JacobianData:
    """Linearization blocks at the equilibrium with diffusion matrix diag(d1[, d2]).

    For localized models the averaged block is folded into the local one:
    J_U ← J_U + J_Ubar, J_Ubar ← 0.
    """
    if not d1 > 0:
        raise ValueError(f"d1 must be positive, got {d1}")
    n = model.n_species
    if n == 1:
        D = np.array([[d1]])
    else:
        if d2 is None:
            raise ValueError("two-species models need both d1 and d2")
        if not d2 > 0:
            raise ValueError(f"d2 must be positive, got {d2}")
        D = np.diag([d1, d2])
    J_U, J_Ub = model.ju(), model.jubar()
    if model.localized:
        J_U = J_U + J_Ub
        J_Ub = np.zeros_like(J_Ub)
    return JacobianData(J_U=J_U, J_Ubar=J_Ub, D=D)


MODEL_REGISTRY: dict[str, type] = {
    "logistic": NonlocalLogistic,
    "genlogistic": GeneralAveragedLogistic,
    "membrane": MembraneFeedback,
    "coop": CoopLV,
    "coop2": CoopLV2,
    "rm": RMNonlocal,
}


def model_from_spec(spec: dict):
    """Build a model from {"model": name, "params": {...}, "localized": bool}."""
    try:
        name = spec["model"]
    except KeyError as exc:
        raise ValueError("model spec needs a 'model' key") from exc
    try:
        cls = MODEL_REGISTRY[name]
    except KeyError as exc:
        raise ValueError(
            f"unknown model {name!r}; choose from {sorted(MODEL_REGISTRY)}"
        ) from exc
    params = dict(spec.get("params", {}))
    if spec.get("localized"):
        params["localized"] = True
    try:
        return cls(**params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for model {name!r}: {exc}") from exc
