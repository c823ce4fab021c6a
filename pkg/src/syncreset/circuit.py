"""Gate-level compilation of one protocol step and QASM export.

The step unitary on 2n basis states is compiled as T . S . Tdag (Tdag applied
first): a basis change into the shift coordinate, a cyclic increment on all
2n states, and the change back.  Qubit layout: position bit 0 is the least
significant, the letter qubit is the most significant, so qubit q carries bit
q of the basis index j = letter * n + position.

Every circuit is built from X and multi-controlled-X gates with polarity
tagged controls; MCX is a primitive of the IR and of the QASM output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import numpy as np

from .automata import PermutationSpec
from .protocol import build_step_unitary

MAX_SIM_QUBITS = 20


class CapacityError(Exception):
    pass


@dataclass(frozen=True)
class Gate:
    """X or multi-controlled X; controls are (qubit, polarity) pairs."""

    kind: str                      # "x" or "mcx"
    target: int
    controls: Tuple[Tuple[int, str], ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ("x", "mcx"):
            raise ValueError(f"unknown gate kind: {self.kind!r}")
        if self.kind == "x" and self.controls:
            raise ValueError("plain x gate cannot carry controls")
        qubits = [q for q, _ in self.controls]
        if len(set(qubits)) != len(qubits) or self.target in qubits:
            raise ValueError("control qubits must be distinct and exclude the target")
        for _, pol in self.controls:
            if pol not in ("+", "-"):
                raise ValueError(f"bad control polarity: {pol!r}")

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "target": self.target,
            "controls": [[q, pol] for q, pol in self.controls],
        }


@dataclass(frozen=True)
class Circuit:
    """An ordered gate list; the first listed gate is applied first."""

    qubits: int
    gates: Tuple[Gate, ...]

    def __post_init__(self) -> None:
        for g in self.gates:
            touched = [g.target] + [q for q, _ in g.controls]
            if any(not 0 <= q < self.qubits for q in touched):
                raise ValueError("gate touches a qubit outside the register")

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.qubits != self.qubits:
            raise ValueError("qubit counts differ")
        return Circuit(self.qubits, self.gates + other.gates)

    def inverse(self) -> "Circuit":
        # X and MCX are self-inverse, so reversing the gate list suffices.
        return Circuit(self.qubits, tuple(reversed(self.gates)))

    def to_json(self) -> dict:
        return {"qubits": self.qubits, "gates": [g.to_json() for g in self.gates]}


@dataclass(frozen=True)
class CompiledStep:
    n: int
    spec: PermutationSpec
    t_circuit: Circuit
    s_circuit: Circuit
    full: Circuit


def _mcx(target: int, controls: Iterable[Tuple[int, str]]) -> Gate:
    controls = tuple(controls)
    if not controls:
        return Gate("x", target)
    return Gate("mcx", target, controls)


def pair_swap_gates(u: int, v: int, width: int,
                    extra_controls: Tuple[Tuple[int, str], ...] = ()) -> List[Gate]:
    """Gates whose product swaps basis states |u> and |v> and fixes the rest.

    Generalizes the fixed-top-state construction: pick the lowest differing
    bit b1, fold the remaining differing bits onto b1 with a CX cascade, flip
    b1 under controls matching the folded pattern, then unfold.
    """
    if u == v:
        raise ValueError("swap endpoints must differ")
    diff = u ^ v
    b1 = (diff & -diff).bit_length() - 1
    rest = [b for b in range(width) if b != b1 and (diff >> b) & 1]
    fold = [_mcx(b, ((b1, "+"),) + extra_controls) for b in rest]
    # Control pattern = bits of the folded u on every qubit except b1.
    folded_u = u
    if (u >> b1) & 1:
        for b in rest:
            folded_u ^= 1 << b
    controls = tuple(
        (b, "+" if (folded_u >> b) & 1 else "-")
        for b in range(width) if b != b1
    ) + extra_controls
    return fold + [_mcx(b1, controls)] + fold[::-1]


def transposition_circuit(k: int, dim: int) -> Circuit:
    """Swap |k> with the top state |dim-1>, fixing all other basis states."""
    width = dim.bit_length() - 1
    if dim != 1 << width:
        raise ValueError("dimension must be a power of two")
    if not 0 <= k < dim - 1:
        raise ValueError("k must satisfy 0 <= k < dim-1")
    return Circuit(width, tuple(pair_swap_gates(k, dim - 1, width)))


def _permutation_transpositions(pi: Tuple[int, ...]) -> List[Tuple[int, int]]:
    """Decompose a permutation (i -> pi[i]) into 2-cycles, first applied first."""
    seen = [False] * len(pi)
    out: List[Tuple[int, int]] = []
    for start in range(len(pi)):
        if seen[start]:
            continue
        cycle = [start]
        seen[start] = True
        nxt = pi[start]
        while nxt != start:
            cycle.append(nxt)
            seen[nxt] = True
            nxt = pi[nxt]
        # (c0 c1 ... cr-1) = apply (c0,c1), then (c0,c2), ..., (c0,cr-1).
        out.extend((cycle[0], c) for c in cycle[1:])
    return out


def build_T(spec: PermutationSpec) -> Circuit:
    """Letter-controlled node relabeling: |0><0| (x) I + |1><1| (x) T_g.

    T_g maps |i> -> |pi_i>; realized as letter-controlled transposition
    networks over the position qubits.
    """
    n = spec.n
    m = n.bit_length() - 1
    if n != 1 << m:
        raise ValueError("node count must be a power of two")
    letter_control = ((m, "+"),)
    gates: List[Gate] = []
    for u, v in _permutation_transpositions(spec.pi):
        gates.extend(pair_swap_gates(u, v, m, letter_control))
    return Circuit(m + 1, tuple(gates))


def build_S(dim: int) -> Circuit:
    """Cyclic increment |i> -> |(i+1) mod dim> on the whole register.

    Product of swaps with the top state: (t,0) applied first, then (t,1),
    up to (t,dim-2).
    """
    width = dim.bit_length() - 1
    if dim != 1 << width:
        raise ValueError("dimension must be a power of two")
    gates: List[Gate] = []
    for k in range(dim - 1):
        gates.extend(transposition_circuit(k, dim).gates)
    return Circuit(width, tuple(gates))


def build_step_circuit(spec: PermutationSpec) -> CompiledStep:
    """Compile one protocol step as T . S . Tdag, with Tdag applied first."""
    n = spec.n
    t = build_T(spec)
    s = build_S(2 * n)
    full = t.inverse() + s + t
    return CompiledStep(n, spec, t, s, full)


def unitary_of(circuit: Circuit) -> np.ndarray:
    """Dense matrix of the circuit, gates composed in application order."""
    if circuit.qubits > MAX_SIM_QUBITS:
        raise CapacityError(f"{circuit.qubits} qubits exceed the simulation cap")
    dim = 1 << circuit.qubits
    perm = np.arange(dim)
    for gate in circuit.gates:
        perm = _apply_gate_perm(perm, gate)
    mat = np.zeros((dim, dim), dtype=complex)
    mat[perm, np.arange(dim)] = 1.0
    return mat


def _apply_gate_perm(perm: np.ndarray, gate: Gate) -> np.ndarray:
    """Compose one X/MCX gate onto a running basis permutation."""
    x = perm
    hit = np.ones(x.shape, dtype=bool)
    for q, pol in gate.controls:
        bit = (x >> q) & 1
        hit &= bit == (1 if pol == "+" else 0)
    out = x.copy()
    out[hit] ^= 1 << gate.target
    return out


def export_qasm(circuit: Circuit, header: Optional[str] = None) -> str:
    """OpenQASM 3.0 text; negative controls become X-conjugated positives."""
    lines: List[str] = []
    if header:
        lines.extend(f"// {line}" for line in header.splitlines())
    lines.append("OPENQASM 3.0;")
    lines.append('include "stdgates.inc";')
    lines.append(f"qubit[{circuit.qubits}] q;")
    for gate in circuit.gates:
        neg = [q for q, pol in gate.controls if pol == "-"]
        for q in neg:
            lines.append(f"x q[{q}];")
        ctrls = [q for q, _ in gate.controls]
        args = ", ".join(f"q[{q}]" for q in ctrls + [gate.target])
        if not ctrls:
            lines.append(f"x q[{gate.target}];")
        elif len(ctrls) == 1:
            lines.append(f"cx {args};")
        elif len(ctrls) == 2:
            lines.append(f"ccx {args};")
        else:
            lines.append(f"ctrl({len(ctrls)}) @ x {args};")
        for q in reversed(neg):
            lines.append(f"x q[{q}];")
    return "\n".join(lines) + "\n"


def step_circuit_qasm(spec: PermutationSpec) -> str:
    """QASM for the full compiled step, with the layout recorded up top."""
    compiled = build_step_circuit(spec)
    header = (
        f"one reset step: n={spec.n}, pi={list(spec.pi)}\n"
        "layout: qubit q[i] carries bit i of j = letter*n + position;\n"
        "position bit 0 is least significant, the letter qubit is most significant"
    )
    return export_qasm(compiled.full, header)
