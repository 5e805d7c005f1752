"""Dense-matrix oracle for the semidiscrete linearization.

Assembles the full N*n x N*n linearization of the averaged system about a
constant state using an exact spectral Laplacian, so its eigenvalues can be
compared against the per-mode block eigenvalues without discretization error
on the resolved cosine modes.
"""

import numpy as np

from nrd import Domain1D, eigenvalue
from nrd.stability import block_matrices


def spectral_laplacian(domain: Domain1D) -> np.ndarray:
    # Synthesis matrix V[:, i] = cos(i x / l) on the cell centers; its inverse
    # is the analysis transform, so L = -V diag(lambda_i) V^{-1} acts as the
    # exact Laplacian on every resolved cosine mode.
    N = domain.N
    i = np.arange(N)
    V = np.cos(np.outer(domain.x, i) / domain.l)
    lam = np.array([eigenvalue(domain, int(k)) for k in i])
    return -V @ (lam[:, None] * np.linalg.inv(V))


def dense_linearization(J, domain: Domain1D) -> np.ndarray:
    """kron-assembled linearization: diffusion + local part + averaged part."""
    N = domain.N
    L = spectral_laplacian(domain)
    P = np.full((N, N), 1.0 / N)  # spatial-average projector
    return np.kron(J.D, L) + np.kron(J.J_U, np.eye(N)) + np.kron(J.J_Ubar, P)


def analytic_mode_eigs(J, domain: Domain1D, i: int) -> np.ndarray:
    Ji, _ = block_matrices(J, domain, i)
    return np.linalg.eigvals(Ji)


def case_examples() -> dict:
    """One linearization per classification label, keyed by the label it must get.

    The ii/iii subcases are distinguished by where the trace root p_* falls
    relative to the roots p_- < p_+ of D(p), so the synthetic entries pin those
    orderings; the two iv entries have no averaged part at all.
    """
    from nrd import CoopLV, CoopLV2, JacobianData, RMNonlocal, jacobians

    diag = np.diag
    return {
        "i": jacobians(CoopLV(a=1.0, b=0.1, c=0.1, d=1.0), 0.004, 1.0),
        "ii-a": jacobians(RMNonlocal(k=0.5, m=6.0, theta=1.0), 0.1, 0.2),
        "ii-b": JacobianData(
            np.array([[0.65, 1.0], [-0.07, -0.1]]), diag([-2.0, -1.0]), diag([3.0, 1.0])
        ),
        "ii-c": JacobianData(
            np.array([[1.0, 0.99], [0.99, 1.0]]), diag([-4.0, -4.0]), diag([0.1, 0.1])
        ),
        "ii-d": JacobianData(
            np.array([[1.0, -2.0], [0.7, 0.5]]), diag([-5.0, -5.0]), diag([0.01, 1.0])
        ),
        "iii-a": jacobians(CoopLV2(a=1.0, b=0.1, c=0.1, d=0.5, e=1.5), 0.005, 1.0),
        "iii-b": JacobianData(
            np.array([[-0.3, 1.0], [-0.29, 1.0]]), diag([-2.0, -3.0]), diag([0.5, 1.0])
        ),
        "iv-a": JacobianData(
            np.array([[-1.0, 0.5], [-0.5, -1.0]]), np.zeros((2, 2)), diag([1.0, 1.0])
        ),
        "iv-b": JacobianData(
            np.array([[1.0, -2.0], [1.0, -1.5]]), np.zeros((2, 2)), diag([0.01, 1.0])
        ),
    }
