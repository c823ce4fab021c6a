"""Cycle-based DFA family, synchronizing words, and the closed-form word.

The DFA family lives on n nodes: letter ``a`` acts as the reference graph
(node 0 feeds the cycle 1 -> 2 -> ... -> n-1 -> 1) and letter ``b`` acts as
the same graph conjugated by a permutation ``pi`` with pi[0] = 1, pi[1] = 0.
Words carry an explicit order convention to avoid silent reversal bugs:
``operator`` order lists the last-applied letter first (right-to-left
reading), ``application`` order lists the first-applied letter first.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

ALPHABET = ("a", "b")

#: Largest n for which the power-set BFS is attempted (2^n subsets).
DEFAULT_BFS_BOUND = 20


class CapacityError(Exception):
    """Raised when a request exceeds the configured desk-scale bounds."""


@dataclass(frozen=True)
class Word:
    """A finite word over {a, b} with an explicit order convention.

    ``operator`` order: the rightmost letter is applied first.
    ``application`` order: the leftmost letter is applied first.
    """

    letters: str
    order: str = "operator"

    def __post_init__(self) -> None:
        if self.order not in ("operator", "application"):
            raise ValueError(f"unknown word order: {self.order!r}")
        bad = set(self.letters) - set(ALPHABET)
        if bad:
            raise ValueError(f"letters outside alphabet: {sorted(bad)}")

    def __len__(self) -> int:
        return len(self.letters)

    def to_order(self, order: str) -> "Word":
        """Convert to the given convention; a double conversion round-trips."""
        if order == self.order:
            return self
        return Word(self.letters[::-1], order)

    def application_letters(self) -> str:
        """Letters in the order they are applied, first-applied first."""
        return self.to_order("application").letters

    def swapped(self) -> "Word":
        """Interchange the roles of a and b."""
        table = str.maketrans("ab", "ba")
        return Word(self.letters.translate(table), self.order)

    def to_json(self) -> dict:
        return {"letters": self.letters, "order": self.order}

    @staticmethod
    def from_json(obj: dict) -> "Word":
        return Word(obj["letters"], obj.get("order", "operator"))


@dataclass(frozen=True)
class PermutationSpec:
    """A bijection on {0..n-1} with the standing assumption pi[0]=1, pi[1]=0."""

    n: int
    pi: tuple

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("need n >= 2")
        if len(self.pi) != self.n or sorted(self.pi) != list(range(self.n)):
            raise ValueError("pi is not a bijection on {0..n-1}")
        if self.pi[0] != 1 or self.pi[1] != 0:
            raise ValueError("pi must satisfy pi[0] = 1 and pi[1] = 0")

    def inverse(self) -> tuple:
        inv = [0] * self.n
        for k, v in enumerate(self.pi):
            inv[v] = k
        return tuple(inv)

    @staticmethod
    def basic(n: int) -> "PermutationSpec":
        """The transposition (1,0): pi = [1, 0, 2, 3, ...]."""
        return PermutationSpec(n, (1, 0) + tuple(range(2, n)))

    @staticmethod
    def reversed_cycle(n: int) -> "PermutationSpec":
        """(1,0)(n-1,...,2): pi = [1, 0, n-1, n-2, ..., 2].  Needs n >= 4."""
        if n < 4:
            raise ValueError("reversed preset needs n >= 4")
        return PermutationSpec(n, (1, 0) + tuple(range(n - 1, 1, -1)))


PRESETS = {
    "basic": PermutationSpec.basic,
    "reversed": PermutationSpec.reversed_cycle,
}


@dataclass(frozen=True)
class Dfa:
    """Transition tables for letters a and b over n states."""

    n: int
    delta_a: tuple
    delta_b: tuple

    def __post_init__(self) -> None:
        for table in (self.delta_a, self.delta_b):
            if len(table) != self.n or not all(0 <= q < self.n for q in table):
                raise ValueError("transition table entries must lie in {0..n-1}")

    def delta(self, letter: str) -> tuple:
        if letter == "a":
            return self.delta_a
        if letter == "b":
            return self.delta_b
        raise ValueError(f"unknown letter: {letter!r}")

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "delta_a": list(self.delta_a),
            "delta_b": list(self.delta_b),
        }

    @staticmethod
    def from_json(obj: dict) -> "Dfa":
        return Dfa(obj["n"], tuple(obj["delta_a"]), tuple(obj["delta_b"]))


def reference_a_table(n: int) -> tuple:
    """The a-graph: 0 -> 1, k -> k+1 for 1 <= k <= n-2, n-1 -> 1."""
    return (1,) + tuple(range(2, n)) + (1,)


def build_family(spec: PermutationSpec) -> Dfa:
    """Build the family DFA: b-graph is the a-graph conjugated by pi."""
    n = spec.n
    delta_a = reference_a_table(n)
    inv = spec.inverse()
    delta_b = tuple(spec.pi[delta_a[inv[q]]] for q in range(n))
    return Dfa(n, delta_a, delta_b)


def rotation_dfa(n: int) -> Dfa:
    """A pure cycle under both letters; has no synchronizing word."""
    rot = tuple((q + 1) % n for q in range(n))
    return Dfa(n, rot, rot)


def apply_letter(dfa: Dfa, q: int, letter: str) -> int:
    if not 0 <= q < dfa.n:
        raise ValueError(f"state {q} out of range for n={dfa.n}")
    return dfa.delta(letter)[q]


def apply_word(dfa: Dfa, q: int, word: Word) -> int:
    for letter in word.application_letters():
        q = apply_letter(dfa, q, letter)
    return q


def image(dfa: Dfa, states: Iterable[int], word: Word) -> frozenset:
    """Elementwise application of the word to a set of states."""
    current = frozenset(states)
    if not current:
        raise ValueError("empty state set")
    for letter in word.application_letters():
        table = dfa.delta(letter)
        current = frozenset(table[q] for q in current)
    return current


def is_synchronizing(dfa: Dfa, word: Word) -> Optional[int]:
    """Return the unique target state if the word synchronizes, else None."""
    result = image(dfa, range(dfa.n), word)
    if len(result) == 1:
        return next(iter(result))
    return None


def shortest_sync_word(dfa: Dfa, bound: int = DEFAULT_BFS_BOUND) -> Optional[Word]:
    """BFS over the power automaton for a minimum-length synchronizing word.

    Ties are broken by exploring letter a before b, which makes the output
    deterministic.  The word is returned in application order.
    """
    n = dfa.n
    if n > bound:
        raise CapacityError(f"n={n} exceeds the subset-search bound {bound}")
    # Per-letter bitmask successors of each single state.
    succ = {
        letter: [1 << dfa.delta(letter)[q] for q in range(n)]
        for letter in ALPHABET
    }

    def step(mask: int, letter: str) -> int:
        out = 0
        rest = mask
        while rest:
            low = rest & -rest
            out |= succ[letter][low.bit_length() - 1]
            rest ^= low
        return out

    full = (1 << n) - 1
    parent = {full: None}
    queue = deque([full])
    while queue:
        mask = queue.popleft()
        if mask & (mask - 1) == 0:
            # Singleton reached: walk back up to recover the word.
            letters = []
            node = mask
            while parent[node] is not None:
                prev, letter = parent[node]
                letters.append(letter)
                node = prev
            return Word("".join(reversed(letters)), "application")
        for letter in ALPHABET:
            nxt = step(mask, letter)
            if nxt not in parent:
                parent[nxt] = (mask, letter)
                queue.append(nxt)
    return None


def closed_form_word(n: int) -> Word:
    """The length n-1 synchronizing word for the basic preset.

    Emitted in operator order as (ab)^floor((n-1)/2) a^((n-1) mod 2), so the
    single-a block (when present) is applied first.  Synchronizes the basic
    family DFA to state 1.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    letters = "ab" * ((n - 1) // 2) + "a" * ((n - 1) % 2)
    return Word(letters, "operator")
