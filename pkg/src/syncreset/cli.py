"""Deterministic command-line front end emitting JSON/CSV for every experiment.

Exit codes: 0 success, 1 usage/validation error, 2 domain-level negative
result (e.g. no synchronizing word exists), 3 capacity exceeded.

Identical flags produce byte-identical primary outputs; the run manifest
records the resolved parameters and a checksum of the primary output
(its timestamp field is excluded from the checksum).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from typing import List, Optional, Sequence

import numpy as np

from . import __version__, automata, circuit, kraus, protocol, walk
from .automata import PermutationSpec, Word
from .qcore import basis_fidelity, basis_state, density, maximally_mixed, uniform_state

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NEGATIVE = 2
EXIT_CAPACITY = 3


class UsageError(Exception):
    pass


class NegativeResult(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    """9 significant digits, locale-independent."""
    return f"{x:.9g}"


def _resolve_spec(args) -> PermutationSpec:
    try:
        return automata.PRESETS[args.preset](args.n)
    except ValueError as exc:
        raise UsageError(str(exc))


def _parse_word(args, default: Optional[Word] = None) -> Word:
    if getattr(args, "word", None):
        return Word(args.word, args.order)
    if default is not None:
        return default
    raise UsageError("a word is required (pass --word)")


def _parse_init(text: str, n: int) -> np.ndarray:
    """Initial pure state: 'uniform', 'basis:K', or comma-separated amplitudes."""
    if text == "uniform":
        return uniform_state(n)
    if text.startswith("basis:"):
        k = int(text.split(":", 1)[1])
        if not 0 <= k < n:
            raise UsageError(f"basis index {k} out of range")
        return basis_state(n, k)
    try:
        amps = np.array([complex(part) for part in text.split(",")], dtype=complex)
    except ValueError:
        raise UsageError(f"cannot parse initial state {text!r}")
    if amps.shape != (n,):
        raise UsageError(f"initial state needs {n} amplitudes")
    nrm = np.linalg.norm(amps)
    if nrm == 0:
        raise UsageError("initial state must be nonzero")
    return amps / nrm


def _emit(args, text: str, params: dict) -> None:
    data = text.encode()
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(data)
        manifest = {
            "subcommand": params["subcommand"],
            "parameters": {k: v for k, v in params.items() if k != "subcommand"},
            "artifact_version": __version__,
            "output_sha256": hashlib.sha256(data).hexdigest(),
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        }
        with open(args.output + ".manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- dfa word

def cmd_dfa_word(args) -> int:
    if args.custom_cycle:
        dfa = automata.rotation_dfa(args.n)
    else:
        dfa = automata.build_family(_resolve_spec(args))
    word = automata.shortest_sync_word(dfa)
    if word is None:
        raise NegativeResult("no synchronizing word exists")
    op_word = word.to_order("operator")
    target = automata.is_synchronizing(dfa, word)
    matches = (not args.custom_cycle
               and args.preset == "basic"
               and op_word.letters == automata.closed_form_word(args.n).letters)
    out = {
        "word": op_word.letters,
        "order": "operator",
        "length": len(word),
        "target": target,
        "matches_closed_form": matches,
    }
    _emit(args, json.dumps(out, sort_keys=True) + "\n",
          {"subcommand": "dfa word", "n": args.n, "preset": args.preset,
           "custom_cycle": args.custom_cycle})
    return EXIT_OK


# ------------------------------------------------------------- unitary run

def cmd_unitary_run(args) -> int:
    spec = _resolve_spec(args)
    n = args.n
    dfa = automata.build_family(spec)
    word = _parse_word(args, default=automata.shortest_sync_word(dfa))
    system = _parse_init(args.init, n)
    if (1 << len(word)) * n > (1 << 16):
        raise protocol.CapacityError("joint run too large; n <= 16 qubits total")
    run = protocol.run_protocol(spec, word, system)
    target = automata.is_synchronizing(dfa, word)
    diag = [float(x) for x in np.real(np.diag(run.reduced_system))]
    out = {
        "n": n,
        "word": word.to_order("operator").letters,
        "order": "operator",
        "target": target,
        "reduced_diagonal": [float(_fmt(x)) for x in diag],
        "fidelity": float(_fmt(basis_fidelity(run.reduced_system, target)))
        if target is not None else None,
    }
    if len(word) <= 12:
        amps = run.joint_state.reshape(-1, n)
        register = {}
        for anc in range(amps.shape[0]):
            weight = float(np.sum(np.abs(amps[anc]) ** 2))
            if weight > 1e-12:
                label = "".join(
                    "b" if (anc >> b) & 1 else "a"
                    for b in reversed(range(len(word)))
                )
                register[label] = float(_fmt(weight))
        out["ancilla_weights"] = register
    _emit(args, json.dumps(out, sort_keys=True) + "\n",
          {"subcommand": "unitary run", "n": n, "preset": args.preset,
           "word": word.to_order("operator").letters, "init": args.init})
    return EXIT_OK


# ----------------------------------------------------------------- circuit

def cmd_circuit(args) -> int:
    spec = _resolve_spec(args)
    if args.n > 16:
        raise protocol.CapacityError("circuit commands support n <= 16")
    compiled = circuit.build_step_circuit(spec)
    if args.mode == "check":
        compiled_u = circuit.unitary_of(compiled.full)
        oracle = protocol.build_step_unitary(spec).op
        deviation = float(np.max(np.abs(compiled_u - oracle)))
        text = json.dumps({"n": args.n, "preset": args.preset,
                           "max_deviation": deviation,
                           "ok": deviation <= 1e-10}, sort_keys=True) + "\n"
        _emit(args, text, {"subcommand": "circuit check", "n": args.n,
                           "preset": args.preset})
        return EXIT_OK if deviation <= 1e-10 else EXIT_NEGATIVE
    if args.format == "qasm":
        text = circuit.step_circuit_qasm(spec)
    else:
        text = json.dumps(compiled.full.to_json(), sort_keys=True) + "\n"
    _emit(args, text, {"subcommand": "circuit emit", "n": args.n,
                       "preset": args.preset, "format": args.format})
    return EXIT_OK


# -------------------------------------------------------------------- walk

def _walk_word(args) -> Word:
    if args.word:
        return Word(args.word, args.order)
    if args.word_source == "pattern":
        return walk.coin_pattern_word(args.n)
    return walk.oracle_word(args.n)


def cmd_walk(args) -> int:
    n = args.n
    word = _walk_word(args)
    dfa = automata.build_family(PermutationSpec.reversed_cycle(n))
    target = automata.is_synchronizing(dfa, word)
    if target is None:
        raise NegativeResult("configured word does not synchronize classically")
    if args.mode == "sweep":
        thetas = np.linspace(0.0, args.theta_max, args.points)
        rows = walk.fidelity_sweep(n, word, thetas, target)
        lines = ["theta,fidelity"]
        lines += [f"{_fmt(t)},{_fmt(f)}" for t, f in rows]
        text = "\n".join(lines) + "\n"
        _emit(args, text, {"subcommand": "walk sweep", "n": n,
                           "word": word.to_order("operator").letters,
                           "theta_max": args.theta_max, "points": args.points})
        return EXIT_OK
    cfg = walk.WalkConfig(n, word, args.theta, target)
    trace = walk.evolve(cfg, uniform_state(n))
    lines = ["step,position,probability"]
    for step, dist in enumerate(trace.distributions):
        for pos, p in enumerate(dist):
            lines.append(f"{step},{pos},{_fmt(float(p))}")
    text = "\n".join(lines) + "\n"
    _emit(args, text, {"subcommand": "walk evolve", "n": n,
                       "word": word.to_order("operator").letters,
                       "theta": args.theta})
    return EXIT_OK


# ------------------------------------------------------------------- kraus

def cmd_kraus(args) -> int:
    n = args.n
    # The order flag reinterprets the letter string rather than converting
    # it, so --order operator turns the default abab into a B-first run.
    word = Word(args.word or kraus.default_word(n).letters, args.order)
    target = kraus.classical_target(n, word)
    if target is None:
        raise NegativeResult("channel word does not synchronize classically")
    if args.mode == "run":
        init = maximally_mixed(n) if args.init == "mixed" else density(uniform_state(n))
        out = kraus.run_channel_word(init, word, args.phia, args.phib, n)
        text = json.dumps({
            "n": n,
            "word": word.to_order("application").letters,
            "order": "application",
            "target": target,
            "fidelity": float(_fmt(basis_fidelity(out, target))),
            "purity": float(_fmt(kraus.purity(out))),
        }, sort_keys=True) + "\n"
        _emit(args, text, {"subcommand": "kraus run", "n": n,
                           "phia": args.phia, "phib": args.phib,
                           "init": args.init,
                           "word": word.to_order("application").letters})
        return EXIT_OK
    phis = np.linspace(0.0, args.phi_max, args.grid)
    rows = kraus.sweep(n, phis, args.init, word, target)
    lines = [
        f"# init={args.init}",
        f"# word={word.to_order('application').letters} (application order)",
        f"# target={target}",
        "phi_a,phi_b,fidelity,purity",
    ]
    lines += [f"{_fmt(a)},{_fmt(b)},{_fmt(f)},{_fmt(p)}" for a, b, f, p in rows]
    text = "\n".join(lines) + "\n"
    _emit(args, text, {"subcommand": "kraus sweep", "n": n, "grid": args.grid,
                       "phi_max": args.phi_max, "init": args.init,
                       "word": word.to_order("application").letters})
    return EXIT_OK


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="syncreset",
                     description="Synchronizing-word reset protocol simulator")
    parser.add_argument("--config", help="JSON file with flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, preset=True, word=False, order_default="operator"):
        p.add_argument("--n", type=int, required=True)
        if preset:
            p.add_argument("--preset", choices=sorted(automata.PRESETS),
                           default="basic")
        if word:
            p.add_argument("--word", help="letters over {a,b}")
            p.add_argument("--order", choices=["operator", "application"],
                           default=order_default)
        p.add_argument("--output", help="write primary output (and manifest) here")

    dfa = sub.add_parser("dfa").add_subparsers(dest="mode", required=True)
    p = dfa.add_parser("word")
    common(p)
    p.add_argument("--custom-cycle", action="store_true",
                   help="use the pure-rotation DFA (no synchronizing word)")
    p.set_defaults(func=cmd_dfa_word)

    unitary = sub.add_parser("unitary").add_subparsers(dest="mode", required=True)
    p = unitary.add_parser("run")
    common(p, word=True)
    p.add_argument("--init", default="uniform",
                   help="'uniform', 'basis:K', or comma-separated amplitudes")
    p.set_defaults(func=cmd_unitary_run)

    circ = sub.add_parser("circuit").add_subparsers(dest="mode", required=True)
    for mode in ("check", "emit"):
        p = circ.add_parser(mode)
        common(p)
        if mode == "emit":
            p.add_argument("--format", choices=["json", "qasm"], default="qasm")
        p.set_defaults(func=cmd_circuit, mode=mode)

    wk = sub.add_parser("walk").add_subparsers(dest="mode", required=True)
    p = wk.add_parser("sweep")
    common(p, preset=False, word=True)
    p.add_argument("--theta-max", type=float, default=math.pi / 2)
    p.add_argument("--points", type=int, default=64)
    p.add_argument("--word-source", choices=["oracle", "pattern"], default="oracle")
    p.set_defaults(func=cmd_walk, mode="sweep")
    p = wk.add_parser("evolve")
    common(p, preset=False, word=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--word-source", choices=["oracle", "pattern"], default="oracle")
    p.set_defaults(func=cmd_walk, mode="evolve")

    # Channel words read left-to-right as application order (A first) by
    # default; --order operator flips to the B-first composition.
    kr = sub.add_parser("kraus").add_subparsers(dest="mode", required=True)
    p = kr.add_parser("run")
    common(p, preset=False, word=True, order_default="application")
    p.add_argument("--phia", type=float, required=True)
    p.add_argument("--phib", type=float, required=True)
    p.add_argument("--init", choices=["mixed", "uniform"], default="mixed")
    p.set_defaults(func=cmd_kraus, mode="run")
    p = kr.add_parser("sweep")
    common(p, preset=False, word=True, order_default="application")
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--phi-max", type=float, default=math.pi)
    p.add_argument("--init", choices=["mixed", "uniform"], default="mixed")
    p.set_defaults(func=cmd_kraus, mode="sweep")

    return parser


def _load_config_defaults(argv: List[str], parser: argparse.ArgumentParser) -> List[str]:
    """Splice config-file values in as leading flags (CLI flags win)."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    path = argv[idx + 1]
    with open(path) as fh:
        conf = json.load(fh)
    extra: List[str] = []
    for key, value in sorted(conf.items()):
        flag = "--" + key.replace("_", "-")
        if isinstance(value, bool):
            if value:
                extra.append(flag)
        else:
            extra.extend([flag, str(value)])
    head = argv[: idx] + argv[idx + 2:]
    # Subcommand tokens stay first; config flags precede explicit flags.
    n_cmd = 0
    while n_cmd < len(head) and not head[n_cmd].startswith("-"):
        n_cmd += 1
    return head[:n_cmd] + extra + head[n_cmd:]


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    threads = os.environ.get("SYNCRESET_THREADS")
    if threads is not None and (not threads.isdigit() or int(threads) < 1):
        sys.stderr.write("SYNCRESET_THREADS must be a positive integer\n")
        return EXIT_USAGE
    try:
        argv = _load_config_defaults(argv, parser)
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except NegativeResult as exc:
        sys.stderr.write(f"negative result: {exc}\n")
        return EXIT_NEGATIVE
    except (protocol.CapacityError, circuit.CapacityError,
            automata.CapacityError) as exc:
        sys.stderr.write(f"capacity exceeded: {exc}\n")
        return EXIT_CAPACITY
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
