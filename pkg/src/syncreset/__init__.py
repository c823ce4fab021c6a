"""Classical synchronizing words and their quantum reset realizations.

Subpackages cover the cycle-based DFA family (automata), dense linear
algebra (qcore), the ancilla-unitary protocol (protocol), gate-level
compilation with QASM export (circuit), the coin-operator walk reading
(walk), the Kraus-channel formulation (kraus), and a deterministic CLI.
"""

__version__ = "0.1.0"

from . import automata, circuit, kraus, protocol, qcore, walk  # noqa: F401
