"""Quantum-walk reading of the reset: fresh-ancilla coins and theta sweeps.

The walk step operator is the protocol step unitary for the reversed node
permutation (1,0)(n-1,...,2).  Each step consumes a fresh coin prepared in
the letter state of the word, rotated by the coin operator C_theta, coupled
to the position register by the step permutation, and traced out.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from . import automata
from .automata import PermutationSpec, Word
from .protocol import StepUnitary, build_step_unitary


def coin_operator(theta: float) -> np.ndarray:
    """The 2x2 walk coin exp(-i sigma_y theta): a real rotation by theta."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


def build_walk_step(n: int) -> StepUnitary:
    """Step operator of the walk; needs n >= 4 (reversed preset degenerate)."""
    return build_step_unitary(PermutationSpec.reversed_cycle(n))


def oracle_word(n: int) -> Word:
    """BFS shortest synchronizing word for the reversed-preset DFA."""
    dfa = automata.build_family(PermutationSpec.reversed_cycle(n))
    word = automata.shortest_sync_word(dfa)
    assert word is not None
    return word


def coin_pattern_word(n: int) -> Word:
    """The a(ab)^(n-3) ancilla pattern, in operator order, for reproduction.

    Not verified synchronizing for small n; prefer oracle_word unless
    deliberately reproducing that preparation.
    """
    return Word("a" + "ab" * (n - 3), "operator")


@dataclass(frozen=True)
class WalkConfig:
    n: int
    word: Word
    theta: float
    target: int

    @staticmethod
    def default(n: int, theta: float) -> "WalkConfig":
        word = oracle_word(n)
        dfa = automata.build_family(PermutationSpec.reversed_cycle(n))
        target = automata.is_synchronizing(dfa, word)
        assert target is not None
        return WalkConfig(n, word, theta, target)


@dataclass(frozen=True)
class WalkTrace:
    distributions: List[np.ndarray]   # length steps+1, each sums to 1
    final_rho: np.ndarray
    final_fidelity: float


def _as_density(state: np.ndarray, n: int) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    if state.shape == (n,):
        return np.outer(state, state.conj())
    if state.shape == (n, n):
        return state
    raise ValueError(f"state must be a length-{n} vector or {n}x{n} matrix")


def evolve(cfg: WalkConfig, system: np.ndarray) -> WalkTrace:
    """Run the walk, tracing each coin out right after its step."""
    n = cfg.n
    rho = _as_density(system, n)
    step = build_walk_step(n)
    inv = step.inverse_perm()
    coin = coin_operator(cfg.theta)
    dists = [np.real(np.diag(rho)).copy()]
    for letter in cfg.word.application_letters():
        cvec = coin @ np.array([1.0, 0.0] if letter == "a" else [0.0, 1.0],
                               dtype=complex)
        joint = np.kron(np.outer(cvec, cvec.conj()), rho)
        joint = joint[np.ix_(inv, inv)]
        rho = joint[:n, :n] + joint[n:, n:]
        dists.append(np.real(np.diag(rho)).copy())
    fid = float(rho[cfg.target, cfg.target].real)
    return WalkTrace(dists, rho, fid)


def evolve_joint(cfg: WalkConfig, system: np.ndarray) -> np.ndarray:
    """Full joint-state walk on a pure initial state, no early tracing.

    Returns the final reduced position density matrix; must agree with
    evolve() entrywise.  Exponential in the word length.
    """
    n = cfg.n
    system = np.asarray(system, dtype=complex)
    if system.shape != (n,):
        raise ValueError("joint simulation needs a pure position state")
    letters = cfg.word.application_letters()
    k = len(letters)
    step = build_walk_step(n)
    inv2n = step.inverse_perm()
    coin = coin_operator(cfg.theta)
    anc0 = sum(1 << (j - 1) for j, letter in enumerate(letters, 1) if letter == "b")
    state = np.zeros((1 << k, n), dtype=complex)
    state[anc0, :] = system
    for j in range(k):
        high, low = 1 << (k - 1 - j), 1 << j
        work = np.moveaxis(state.reshape(high, 2, low, n), 1, 2)
        flat = work.reshape(high * low, 2, n)
        # Coin on this step's ancilla, then the step permutation.
        flat = np.einsum("lc,xcn->xln", coin, flat)
        flat = flat.reshape(high * low, 2 * n)[:, inv2n]
        state = np.moveaxis(flat.reshape(high, low, 2, n), 2, 1).reshape(-1, n)
    return state.T @ state.conj()


def fidelity_sweep(n: int, word: Word, thetas: Sequence[float],
                   target: Optional[int] = None) -> List[tuple]:
    """Fidelity to the target state vs theta, from the uniform position state."""
    if target is None:
        dfa = automata.build_family(PermutationSpec.reversed_cycle(n))
        target = automata.is_synchronizing(dfa, word)
        if target is None:
            raise ValueError("word does not synchronize; pass target explicitly")
    init = np.full(n, 1.0 / np.sqrt(n), dtype=complex)
    rows = []
    for theta in thetas:
        trace = evolve(WalkConfig(n, word, float(theta), target), init)
        rows.append((float(theta), trace.final_fidelity))
    return rows
