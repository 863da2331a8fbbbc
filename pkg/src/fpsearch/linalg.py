"""Dense complex linear algebra for small qubit registers.

States are 1-D complex numpy arrays of length ``2**n`` and operators are
square complex arrays. Basis indexing puts qubit 1 (the proton in the
two-spin system) on the most significant bit, so for two qubits ``"10"``
maps to index 2.
"""

from __future__ import annotations

import numpy as np

# Tolerance for algebraic identities on directly constructed objects
# (unitarity, normalization, hermiticity).
ATOL = 1e-12

# Density-matrix eigenvalues may dip slightly negative through rounding.
EIGVAL_FLOOR = -1e-10


def basis_index(bits: str) -> int:
    """Index of the computational basis state labelled by a bit string."""
    if not bits or any(c not in "01" for c in bits):
        raise ValueError(f"not a bit string: {bits!r}")
    return int(bits, 2)


def basis_state(n: int, label: int | str) -> np.ndarray:
    """Computational basis state of an n-qubit register."""
    idx = basis_index(label) if isinstance(label, str) else int(label)
    dim = 1 << n
    if not 0 <= idx < dim:
        raise ValueError(f"basis index {idx} out of range for n={n}")
    psi = np.zeros(dim, dtype=complex)
    psi[idx] = 1.0
    return psi


def zero_state(n: int) -> np.ndarray:
    """The all-zeros register state."""
    return basis_state(n, 0)


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with ``a`` acting on the more significant qubits."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def apply_unitary(u: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Apply an operator to a state vector; dimensions must match."""
    u = np.asarray(u, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    if u.shape != (psi.size, psi.size):
        raise ValueError(f"dimension mismatch: operator {u.shape}, state {psi.shape}")
    return u @ psi


def is_unitary(u: np.ndarray, tol: float = ATOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    eye = np.eye(u.shape[0])
    return bool(np.max(np.abs(u.conj().T @ u - eye)) <= tol)


def assert_unitary(u: np.ndarray, tol: float = ATOL, what: str = "operator") -> None:
    if not is_unitary(u, tol):
        dev = float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
        raise ValueError(f"{what} is not unitary (max deviation {dev:.3e})")


def equal_up_to_global_phase(u: np.ndarray, v: np.ndarray, tol: float) -> bool:
    """True iff ``u == c * v`` entrywise within ``tol`` for some unit-modulus c.

    The candidate phase is read off the largest-magnitude entry of ``v``;
    an all-zero ``v`` compares unequal to everything.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch: {u.shape} vs {v.shape}")
    idx = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    if abs(v[idx]) == 0.0:
        return False
    c = u[idx] * np.conj(v[idx])
    if abs(c) == 0.0:
        return False
    c /= abs(c)
    return bool(np.max(np.abs(u - c * v)) <= tol)


def pure_density(psi: np.ndarray) -> np.ndarray:
    """Outer product ``psi psi^dag`` of a normalized state."""
    psi = np.asarray(psi, dtype=complex)
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"state not normalized (norm {norm})")
    return np.outer(psi, psi.conj())


def is_density_matrix(rho: np.ndarray, tol: float = ATOL) -> bool:
    """Hermitian, unit trace, and no eigenvalue below the rounding floor."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        return False
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        return False
    if abs(np.trace(rho) - 1.0) > tol:
        return False
    return bool(np.min(np.linalg.eigvalsh(rho)) >= EIGVAL_FLOOR)
