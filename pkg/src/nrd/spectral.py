"""Neumann eigenpairs on (0, l*pi), cosine-mode transforms, and spatial averages.

The interval (0, l*pi) with no-flux boundaries has eigenpairs
``lambda_i = i**2 / l**2`` with eigenfunctions ``cos(i x / l)``.  All fields
are sampled at cell centers ``x_j = (j + 1/2) * l*pi / N`` so that the cosine
modes are discretely orthogonal under the midpoint rule and reflective
symmetry is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import LengthMismatch

__all__ = [
    "Domain1D",
    "ModeSpectrum",
    "eigenvalue",
    "eigenfunction",
    "spatial_average",
    "decompose",
    "reconstruct",
    "dominant_mode",
]


@dataclass(frozen=True)
class Domain1D:
    """The interval (0, l*pi) discretized into N uniform cells."""

    l: float
    N: int = 256

    def __post_init__(self) -> None:
        if not self.l > 0:
            raise ValueError(f"domain length scale must be positive, got l={self.l}")
        if self.N < 16:
            raise ValueError(f"need at least 16 cells, got N={self.N}")

    @property
    def length(self) -> float:
        return self.l * np.pi

    @property
    def h(self) -> float:
        """Cell width."""
        return self.l * np.pi / self.N

    @property
    def x(self) -> np.ndarray:
        """Cell-center coordinates."""
        return (np.arange(self.N) + 0.5) * self.h


@dataclass(frozen=True)
class ModeSpectrum:
    """Cosine-mode amplitudes c_i of a field, u(x) = sum_i c_i cos(i x / l)."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "amplitudes", np.asarray(self.amplitudes, dtype=float))
        if self.amplitudes.ndim != 1 or self.amplitudes.size == 0:
            raise ValueError("amplitudes must be a nonempty 1-D array")


def eigenvalue(domain: Domain1D, i: int) -> float:
    """i-th Neumann eigenvalue i^2/l^2 (i >= 0)."""
    if i < 0:
        raise ValueError("mode index must be non-negative")
    return (i / domain.l) ** 2


def eigenfunction(domain: Domain1D, i: int) -> np.ndarray:
    """cos(i x / l) sampled at the cell centers."""
    return np.cos(i * domain.x / domain.l)


@lru_cache(maxsize=32)
def _cosine_matrix(N: int) -> np.ndarray:
    # C[i, j] = cos(i * pi * (j + 1/2) / N); row i is the i-th mode on the
    # cell-centered grid.  Independent of l because x_j / l = pi*(j+1/2)/N.
    j = np.arange(N) + 0.5
    i = np.arange(N)[:, None]
    return np.cos(i * np.pi * j / N)


def _check_field(field: np.ndarray, domain: Domain1D) -> np.ndarray:
    field = np.asarray(field, dtype=float)
    if field.shape != (domain.N,):
        raise LengthMismatch(
            f"field has shape {field.shape}, expected ({domain.N},) for this domain"
        )
    return field


def spatial_average(field: np.ndarray, domain: Domain1D) -> float:
    """Midpoint-rule mean of a sampled profile, (1/N) * sum(field)."""
    field = _check_field(field, domain)
    return float(field.mean())


def decompose(field: np.ndarray, domain: Domain1D) -> ModeSpectrum:
    """Project a sampled field onto the cosine modes.

    Direct O(N^2) projection; exact inverse of :func:`reconstruct` on the
    cell-centered grid by discrete orthogonality.
    """
    field = _check_field(field, domain)
    C = _cosine_matrix(domain.N)
    coeffs = C @ field * (2.0 / domain.N)
    coeffs[0] *= 0.5
    return ModeSpectrum(coeffs)


def reconstruct(spectrum: ModeSpectrum, domain: Domain1D) -> np.ndarray:
    """Synthesize a field from cosine-mode amplitudes."""
    amps = spectrum.amplitudes
    if amps.size > domain.N:
        raise LengthMismatch(
            f"spectrum has {amps.size} modes, more than the {domain.N} grid cells"
        )
    C = _cosine_matrix(domain.N)
    return C[: amps.size].T @ amps


def dominant_mode(spectrum: ModeSpectrum, threshold: float = 0.02) -> int | None:
    """Index i >= 1 of the largest |c_i|, or None if the field is essentially flat.

    The winner must exceed ``threshold * max(1, |c_0|)``; otherwise the
    spectrum is considered pattern-free.
    """
    amps = spectrum.amplitudes
    if amps.size < 2:
        return None
    tail = np.abs(amps[1:])
    best = int(np.argmax(tail)) + 1
    if tail[best - 1] > threshold * max(1.0, abs(amps[0])):
        return best
    return None
