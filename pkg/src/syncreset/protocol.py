"""Ancilla-qubit reset protocol: the 2n-state step permutation and its runs.

One step couples a single letter qubit to the n-node position register.  The
step unitary is the single 2n-cycle

    (a,0) -> (a,1) -> ... -> (a,n-1) -> (b,pi[0]) -> ... -> (b,pi[n-1]) -> (a,0)

indexed as j = letter * n + position with letter a = 0, b = 1.  Restricted to
letter-a states it reproduces the a-graph (letter flips on the contraction
edge (a,n-1) -> (b,1)); on letter-b states it reproduces the b-graph (flip on
(b,pi[n-1]) -> (a,0)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .automata import PermutationSpec, Word
from .qcore import partial_trace

#: Joint state-vector runs are capped at this many qubits-equivalent.
MAX_JOINT_DIM = 1 << 22


class CapacityError(Exception):
    pass


@dataclass(frozen=True)
class StepUnitary:
    """The step permutation on 2n letter (x) position states."""

    n: int
    spec: PermutationSpec
    perm: tuple  # perm[j] = image of basis index j

    @property
    def op(self) -> np.ndarray:
        """Dense permutation matrix, op[perm[j], j] = 1."""
        dim = 2 * self.n
        mat = np.zeros((dim, dim), dtype=complex)
        mat[list(self.perm), range(dim)] = 1.0
        return mat

    def inverse_perm(self) -> np.ndarray:
        inv = np.empty(2 * self.n, dtype=np.intp)
        inv[list(self.perm)] = np.arange(2 * self.n)
        return inv


@dataclass(frozen=True)
class ProtocolRun:
    n: int
    spec: PermutationSpec
    word: Word
    joint_state: np.ndarray        # dim 2^k * n, ancillas most significant
    reduced_system: np.ndarray     # n x n density matrix


def build_step_unitary(spec: PermutationSpec) -> StepUnitary:
    n = spec.n
    cycle = [k for k in range(n)] + [n + spec.pi[k] for k in range(n)]
    perm = [0] * (2 * n)
    for i, j in enumerate(cycle):
        perm[j] = cycle[(i + 1) % (2 * n)]
    return StepUnitary(n, spec, tuple(perm))


def _apply_step(state: np.ndarray, perm: tuple, bit: int, k: int, n: int) -> np.ndarray:
    """Apply the 2n permutation between ancilla ``bit`` and the position axis.

    ``state`` has shape (2^k, n); ancilla j occupies bit j-1 of the first
    axis index.
    """
    high = 1 << (k - 1 - bit)
    low = 1 << bit
    work = state.reshape(high, 2, low, n)
    work = np.moveaxis(work, 1, 2)              # (high, low, 2, n)
    flat = work.reshape(high * low, 2 * n)
    inv = np.empty(2 * n, dtype=np.intp)
    inv[list(perm)] = np.arange(2 * n)
    flat = flat[:, inv]
    work = flat.reshape(high, low, 2, n)
    work = np.moveaxis(work, 2, 1)
    return work.reshape(high << (bit + 1), n).reshape(-1, n)


def run_protocol(spec: PermutationSpec, word: Word, system: np.ndarray) -> ProtocolRun:
    """Run the full joint-state protocol of a word on a pure system state.

    Ancilla j (the j-th applied letter) occupies tensor slot j counted from
    the system outward, so an operator-order word string maps character-wise
    onto the ancilla register read most-significant-first.
    """
    n = spec.n
    system = np.asarray(system, dtype=complex)
    if system.shape != (n,):
        raise ValueError(f"system state must have dimension {n}")
    k = len(word)
    if k == 0:
        raise ValueError("word must be nonempty")
    if (1 << k) * n > MAX_JOINT_DIM:
        raise CapacityError("joint state too large; use run_traced instead")
    letters = word.application_letters()
    anc0 = sum(1 << (j - 1) for j, letter in enumerate(letters, 1) if letter == "b")
    state = np.zeros(((1 << k), n), dtype=complex)
    state[anc0, :] = system
    step = build_step_unitary(spec)
    for j in range(1, k + 1):
        state = _apply_step(state, step.perm, j - 1, k, n)
    reduced = state.T @ state.conj()
    return ProtocolRun(n, spec, word, state.reshape(-1), reduced)


def run_traced(spec: PermutationSpec, word: Word, system_rho: np.ndarray) -> np.ndarray:
    """Memory-lean protocol run: trace each ancilla out right after its step.

    Equals the partial trace of the run_protocol joint state; memory is
    O(n^2) independent of word length.
    """
    n = spec.n
    rho = np.asarray(system_rho, dtype=complex)
    if rho.shape != (n, n):
        raise ValueError(f"system density matrix must be {n}x{n}")
    step = build_step_unitary(spec)
    inv = step.inverse_perm()
    for letter in word.application_letters():
        anc = np.zeros((2, 2), dtype=complex)
        anc[int(letter == "b"), int(letter == "b")] = 1.0
        joint = np.kron(anc, rho)
        joint = joint[np.ix_(inv, inv)]
        rho = joint[:n, :n] + joint[n:, n:]
    return rho


def reduced_of_run(run: ProtocolRun) -> np.ndarray:
    """Partial trace of the joint state onto the position register."""
    k = len(run.word)
    rho_joint = np.outer(run.joint_state, run.joint_state.conj())
    return partial_trace(rho_joint, keep=[k], dims=[2] * k + [run.n])
