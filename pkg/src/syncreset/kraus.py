"""Noisy-channel reset: planar rotations, Kraus pairs, and angle sweeps.

Each letter becomes a two-operator Kraus channel.  The first operator chains
planar rotations along the letter's great cycle while excluding the
contraction target; the second is the rank-1 map that feeds the excluded
state into the contraction.  At phi = pi/2 the channel action on basis
projectors reduces to the classical DFA transition tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from . import automata
from .automata import PermutationSpec, Word
from .qcore import basis_fidelity, purity, maximally_mixed, uniform_state, density


@dataclass(frozen=True)
class RotationSpec:
    i: int
    j: int
    k: int
    phi: float
    n: int

    def __post_init__(self) -> None:
        ids = (self.i, self.j, self.k)
        if len(set(ids)) != 3:
            raise ValueError("rotation indices i, j, k must be pairwise distinct")
        if any(not 0 <= q < self.n for q in ids):
            raise ValueError("rotation index out of range")


def rotation(spec: RotationSpec) -> np.ndarray:
    """Planar rotation in the (i, j) plane that annihilates |k>.

    Identity on every basis state other than i, j, k; the k column is zero,
    so the operator is not unitary on its own.
    """
    mat = np.eye(spec.n, dtype=complex)
    c, s = np.cos(spec.phi), np.sin(spec.phi)
    mat[spec.i, spec.i] = c
    mat[spec.j, spec.j] = c
    mat[spec.i, spec.j] = -s
    mat[spec.j, spec.i] = s
    mat[spec.k, spec.k] = 0.0
    return mat


@dataclass(frozen=True)
class ChannelPair:
    """Kraus sets {A1, A2} and {B1, B2} for letters a and b."""

    n: int
    phi_a: float
    phi_b: float
    A1: np.ndarray
    A2: np.ndarray
    B1: np.ndarray
    B2: np.ndarray

    def kraus(self, which: str):
        if which == "a":
            return (self.A1, self.A2)
        if which == "b":
            return (self.B1, self.B2)
        raise ValueError(f"unknown channel: {which!r}")


def build_channels(n: int, phi_a: float, phi_b: float) -> ChannelPair:
    """Build both letter channels; completeness K1+K1 + K2+K2 = I holds.

    A1 = R_{1,2} R_{2,3} ... R_{n-2,n-1} excluding state 0 (rightmost
    applied first), completed by A2 = |1><0|.  B1 analogously excludes
    state 1, starts with R_{0,2}, and is completed by B2 = |0><1|.
    """
    if n < 3:
        raise ValueError("channels need n >= 3")
    a_pairs = [(1, 2)] + [(q, q + 1) for q in range(2, n - 1)]
    b_pairs = [(0, 2)] + [(q, q + 1) for q in range(2, n - 1)]
    A1 = np.eye(n, dtype=complex)
    for i, j in a_pairs:
        A1 = A1 @ rotation(RotationSpec(i, j, 0, phi_a, n))
    B1 = np.eye(n, dtype=complex)
    for i, j in b_pairs:
        B1 = B1 @ rotation(RotationSpec(i, j, 1, phi_b, n))
    A2 = np.zeros((n, n), dtype=complex)
    A2[1, 0] = 1.0
    B2 = np.zeros((n, n), dtype=complex)
    B2[0, 1] = 1.0
    return ChannelPair(n, phi_a, phi_b, A1, A2, B1, B2)


def apply_channel(rho: np.ndarray, which: str, pair: ChannelPair) -> np.ndarray:
    """rho -> K1 rho K1+ + K2 rho K2+ for the requested letter channel."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (pair.n, pair.n):
        raise ValueError(f"density matrix must be {pair.n}x{pair.n}")
    k1, k2 = pair.kraus(which)
    return k1 @ rho @ k1.conj().T + k2 @ rho @ k2.conj().T


def run_channel_word(rho: np.ndarray, word: Word, phi_a: float, phi_b: float,
                     n: int) -> np.ndarray:
    """Apply the letter channels along the word, in application order."""
    pair = build_channels(n, phi_a, phi_b)
    out = np.asarray(rho, dtype=complex)
    for letter in word.application_letters():
        out = apply_channel(out, letter, pair)
    return out


def classical_target(n: int, word: Word) -> Optional[int]:
    """Synchronization target of the channel word's classical shadow."""
    dfa = automata.build_family(PermutationSpec.basic(n))
    return automata.is_synchronizing(dfa, word)


def default_word(n: int) -> Word:
    """A-first alternation of length n - 1, e.g. abab for n = 5 (Fig-style)."""
    letters = ("ab" * n)[: n - 1]
    return Word(letters, "application")


def sweep(n: int, phis: Sequence[float], init: str, word: Word,
          target: Optional[int] = None) -> List[tuple]:
    """Fidelity and purity of the channel word's output over an angle grid.

    init is "mixed" (I/n) or "uniform" (the equal superposition pure state).
    Rows are emitted in grid order: phi_a outer, phi_b inner.
    """
    if init == "mixed":
        rho0 = maximally_mixed(n)
    elif init == "uniform":
        rho0 = density(uniform_state(n))
    else:
        raise ValueError(f"unknown initial state: {init!r}")
    if target is None:
        target = classical_target(n, word)
        if target is None:
            raise ValueError("word does not synchronize; pass target explicitly")
    rows = []
    for phi_a in phis:
        for phi_b in phis:
            out = run_channel_word(rho0, word, float(phi_a), float(phi_b), n)
            rows.append((float(phi_a), float(phi_b),
                         basis_fidelity(out, target), purity(out)))
    return rows
