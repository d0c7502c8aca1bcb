"""Fixed-size complex linear algebra for the two-spin system.

Basis ordering for the four-level space: |1> = |up,up>, |2> = |up,down>,
|3> = |down,up>, |4> = |down,down>.  The first Kronecker factor is the first
spin, so rho_i = sigma_i (x) I acts on it and Sigma_i = I (x) sigma_i acts on
the second.  With this ordering diag(Sigma_3 + rho_3) = (2, 0, 0, -2) and the
outer spinor components v1, v4 decouple from the middle pair.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "SIGMA",
    "IDENTITY2",
    "IDENTITY4",
    "UNITARITY_TOL",
    "kron",
    "sigma_big",
    "rho_big",
    "sigma_dot_rho",
    "swap_operator",
    "unitarity_defect",
    "hermiticity_defect",
    "require_unitary",
    "fidelity_phase_invariant",
    "matrix_to_json",
    "matrix_from_json",
]

UNITARITY_TOL = 1e-10

_s1 = np.array([[0, 1], [1, 0]], dtype=complex)
_s2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
_s3 = np.array([[1, 0], [0, -1]], dtype=complex)

#: Pauli matrices (sigma_1, sigma_2, sigma_3).
SIGMA = (_s1, _s2, _s3)
IDENTITY2 = np.eye(2, dtype=complex)
IDENTITY4 = np.eye(4, dtype=complex)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two 2x2 matrices (standard row-major convention)."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def sigma_big(i: int) -> np.ndarray:
    """Sigma_i = I (x) sigma_i, acting on the second spin; i in {1, 2, 3}."""
    return kron(IDENTITY2, SIGMA[i - 1])


def rho_big(i: int) -> np.ndarray:
    """rho_i = sigma_i (x) I, acting on the first spin; i in {1, 2, 3}."""
    return kron(SIGMA[i - 1], IDENTITY2)


def sigma_dot_rho() -> np.ndarray:
    """Sum_i sigma_i (x) sigma_i, the Heisenberg coupling operator."""
    return sum(kron(s, s) for s in SIGMA)


def swap_operator() -> np.ndarray:
    """A = (1/2)[I + Sigma.rho]; swaps the two spins, A^2 = I."""
    return 0.5 * (IDENTITY4 + sigma_dot_rho())


def unitarity_defect(u: np.ndarray) -> float:
    """Frobenius norm of U^dag U - I."""
    u = np.asarray(u, dtype=complex)
    n = u.shape[0]
    return float(np.linalg.norm(u.conj().T @ u - np.eye(n)))


def hermiticity_defect(h: np.ndarray) -> float:
    """Frobenius norm of H - H^dag."""
    h = np.asarray(h, dtype=complex)
    return float(np.linalg.norm(h - h.conj().T))


def require_unitary(u: np.ndarray, tol: float = UNITARITY_TOL, name: str = "matrix") -> None:
    defect = unitarity_defect(u)
    if not np.isfinite(defect) or defect > tol:
        raise ValueError(f"{name} is not unitary: defect {defect:.3e} > {tol:.1e}")


def fidelity_phase_invariant(u: np.ndarray, v: np.ndarray, tol: float = UNITARITY_TOL) -> float:
    """Global-phase-invariant gate fidelity |Tr(u^dag v)| / dim.

    Equals 1 exactly when u and v agree up to a global phase.  Both inputs
    must be unitary to within ``tol``.
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape or u.shape[0] != u.shape[1]:
        raise ValueError(f"shape mismatch: {u.shape} vs {v.shape}")
    require_unitary(u, tol, "first argument")
    require_unitary(v, tol, "second argument")
    return float(abs(np.trace(u.conj().T @ v)) / u.shape[0])


def matrix_to_json(u: np.ndarray) -> list[list[list[float]]]:
    """Row-major nested lists of [re, im] pairs, the CLI wire format."""
    u = np.asarray(u, dtype=complex)
    return [[[float(x.real), float(x.imag)] for x in row] for row in u]


def matrix_from_json(data: list) -> np.ndarray:
    rows = len(data)
    out = np.empty((rows, len(data[0])), dtype=complex)
    for i, row in enumerate(data):
        for j, (re, im) in enumerate(row):
            out[i, j] = complex(re, im)
    return out
