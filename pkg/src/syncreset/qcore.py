"""Minimal dense complex linear algebra shared by all simulation modules.

Composite basis convention used throughout: the left tensor factor is the
most significant, so a letter qubit stacked on an n-node position register
indexes basis states as j = letter * n + position.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

ATOL_ALGEBRAIC = 1e-10
ATOL_SPECTRAL = 1e-8


def basis_state(dim: int, k: int) -> np.ndarray:
    """The computational basis vector |k> as a complex array."""
    if not 0 <= k < dim:
        raise ValueError(f"basis index {k} out of range for dim {dim}")
    v = np.zeros(dim, dtype=complex)
    v[k] = 1.0
    return v


def uniform_state(dim: int) -> np.ndarray:
    """Equally weighted superposition of all basis states."""
    return np.full(dim, 1.0 / np.sqrt(dim), dtype=complex)


def normalize(psi: np.ndarray) -> np.ndarray:
    nrm = np.linalg.norm(psi)
    if nrm == 0:
        raise ValueError("cannot normalize the zero vector")
    return psi / nrm


def density(psi: np.ndarray) -> np.ndarray:
    """Rank-1 density matrix |psi><psi| of a normalized pure state."""
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def maximally_mixed(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex) / dim


def tensor(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product; the left factor is the most significant."""
    out = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        out = np.kron(out, np.asarray(f, dtype=complex))
    return out


def apply(op: np.ndarray, psi: np.ndarray) -> np.ndarray:
    op = np.asarray(op)
    psi = np.asarray(psi)
    if op.shape[1] != psi.shape[0]:
        raise ValueError(f"dimension mismatch: {op.shape} vs {psi.shape}")
    return op @ psi


def partial_trace(rho: np.ndarray, keep: Iterable[int], dims: Sequence[int]) -> np.ndarray:
    """Trace out all tensor factors except those in ``keep``.

    ``dims`` lists the factor dimensions from most significant to least;
    ``keep`` holds indices into ``dims``.  Kept factors stay in their
    original relative order.
    """
    rho = np.asarray(rho, dtype=complex)
    dims = list(dims)
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise ValueError(f"factor dims {dims} inconsistent with shape {rho.shape}")
    keep = sorted(set(keep))
    if any(not 0 <= k < len(dims) for k in keep):
        raise ValueError("keep index out of range")
    nfac = len(dims)
    tensored = rho.reshape(dims + dims)
    # Contract the traced factors pairwise, highest axis first so earlier
    # axis numbers stay valid.
    for k in reversed(range(nfac)):
        if k not in keep:
            nleft = tensored.ndim // 2
            tensored = np.trace(tensored, axis1=k, axis2=k + nleft)
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return tensored.reshape(d_keep, d_keep)


def basis_fidelity(rho: np.ndarray, k: int) -> float:
    """<k|rho|k>, the fidelity of rho to the basis state |k>."""
    rho = np.asarray(rho)
    if not 0 <= k < rho.shape[0]:
        raise ValueError(f"basis index {k} out of range for dim {rho.shape[0]}")
    val = rho[k, k]
    if abs(val.imag) > 1e-12:
        raise ValueError(f"diagonal entry not real: {val}")
    return float(val.real)


def purity(rho: np.ndarray) -> float:
    """Tr rho^2; equals 1 exactly for pure states."""
    rho = np.asarray(rho)
    return float(np.trace(rho @ rho).real)


def is_unitary(op: np.ndarray, tol: float = ATOL_ALGEBRAIC) -> bool:
    op = np.asarray(op)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValueError("operator must be square")
    dev = op.conj().T @ op - np.eye(op.shape[0])
    return bool(np.max(np.abs(dev)) <= tol)


def check_density(rho: np.ndarray, atol: float = ATOL_ALGEBRAIC) -> None:
    """Assert Hermiticity, unit trace, and positivity of a density matrix."""
    rho = np.asarray(rho)
    if np.max(np.abs(rho - rho.conj().T)) > atol:
        raise ValueError("density matrix not Hermitian")
    if abs(np.trace(rho) - 1.0) > atol:
        raise ValueError("density matrix trace != 1")
    eigs = np.linalg.eigvalsh(rho)
    if eigs.min() < -1e-9:
        raise ValueError(f"density matrix not positive: min eigenvalue {eigs.min()}")
