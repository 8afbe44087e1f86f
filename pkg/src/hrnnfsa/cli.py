"""Command-line driver.

Reports go to stdout, diagnostics to stderr.  Exit codes: 0 ok, 1 a check or
equivalence test failed, 2 usage or input error, 3 precondition error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import textformat
from .compress.nets import METHODS, build_net, dewdney_unit_bound, simulate_net
from .errors import (
    BudgetExceededError,
    DegenerateDistributionError,
    HrnnFsaError,
    PreconditionError,
    SimulationCorruptError,
)
from .extract import DEFAULT_MAX_STATES, extract_dpfsa
from .hrnn import HrnnLm, score_string
from .minsky import build_minsky
from .separate import separate
from .verify import brute_equiv, mass_report
from .wfsa import (
    Wfsa,
    gen_a_n,
    gen_random_dpfsa,
    gen_random_fsa,
    is_complete,
    is_deterministic,
    is_log_separable,
    is_probabilistic,
    is_unweighted,
    stringsum,
)

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2, 3


class UsageError(Exception):
    pass


def fmt_prob(p: float) -> str:
    return f"{p:.17g}"


def _load(path: str, kind: type | tuple[type, ...] | None = None):
    try:
        obj = textformat.load(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    if kind is not None and not isinstance(obj, kind):
        raise UsageError(f"{path} does not hold the expected kind of file")
    return obj


def _write(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _emit(obj) -> str:
    if isinstance(obj, Wfsa):
        return textformat.print_fsa(obj)
    if isinstance(obj, HrnnLm):
        return textformat.print_lm(obj)
    return textformat.print_net(obj)


def _report(data) -> None:
    print(json.dumps(data, sort_keys=True))


def cmd_compile(args) -> int:
    a = _load(args.inp, Wfsa)
    _write(_emit(build_minsky(a, args.projection)), args.out)
    return EXIT_OK


def cmd_extract(args) -> int:
    lm = _load(args.inp, HrnnLm)
    _write(_emit(extract_dpfsa(lm, args.max_states)), args.out)
    return EXIT_OK


def cmd_compress(args) -> int:
    a = _load(args.inp, Wfsa)
    if not is_unweighted(a):
        raise PreconditionError("compress takes an unweighted FSA (all weights 0 or 1)")
    net = build_net(a, args.method, args.seed, args.tries)
    _write(_emit(net), args.out)
    report = net.size_report()
    if args.method == "dewdney":
        report["unit_bound"] = dewdney_unit_bound(a.n_states, len(a.alphabet))
    if args.method == "indyk":
        report["permutation"] = list(net.code.permutation)
    _report(report)
    return EXIT_OK


def cmd_separate(args) -> int:
    a = _load(args.inp, Wfsa)
    _write(_emit(separate(a)), args.out)
    return EXIT_OK


def cmd_score(args) -> int:
    obj = _load(args.inp)
    y = args.string.split()
    if isinstance(obj, Wfsa):
        p = float(stringsum(obj, y))
    elif isinstance(obj, HrnnLm):
        p = score_string(obj, y)
    else:
        p = float(simulate_net(obj, y)[-1] in obj.finals)
    print(fmt_prob(p))
    return EXIT_OK


def cmd_equiv(args) -> int:
    a, b = _load(args.a), _load(args.b)
    r = brute_equiv(a, b, args.max_len, args.tol)
    _report({
        "max_abs_diff": r.max_abs_diff,
        "worst_string": " ".join(r.worst_string),
        "n_checked": r.n_checked,
        "pass": r.passed,
    })
    return EXIT_OK if r.passed else EXIT_FAILED


def cmd_mass(args) -> int:
    r = mass_report(_load(args.inp), args.max_len)
    print("length mass cumulative")
    for k, (m, c) in enumerate(zip(r.per_length, r.cumulative)):
        print(k, fmt_prob(m), fmt_prob(c))
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.family == "a_n":
        if args.symbols is None:
            raise UsageError("gen --family a_n needs --symbols")
        a = gen_a_n(args.symbols)
    else:
        if args.states is None or args.symbols is None:
            raise UsageError("gen --family random needs --states and --symbols")
        make = gen_random_fsa if args.unweighted else gen_random_dpfsa
        a = make(args.seed, args.states, args.symbols)
    _write(_emit(a), args.out)
    return EXIT_OK


CHECKS = {
    "deterministic": is_deterministic,
    "probabilistic": lambda a: is_probabilistic(a, 1e-9),
    "log_separable": is_log_separable,
    "complete": is_complete,
    "unweighted": is_unweighted,
}


def cmd_check(args) -> int:
    a = _load(args.inp, Wfsa)
    result = {name: bool(fn(a)) for name, fn in CHECKS.items()}
    _report(result)
    failed = [name for name in args.require if not result[name]]
    return EXIT_FAILED if failed else EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hrnnfsa", description="Heaviside RNN <-> finite-state automaton toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="Minsky-compile a DPFSA into an HRNN LM")
    c.add_argument("--in", dest="inp", required=True)
    c.add_argument("--projection", choices=("softmax", "sparsemax"), default="softmax")
    c.add_argument("--out", required=True)
    c.set_defaults(fn=cmd_compile)

    c = sub.add_parser("extract", help="read a DPFSA back out of an HRNN LM")
    c.add_argument("--in", dest="inp", required=True)
    c.add_argument("--out", required=True)
    c.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    c.set_defaults(fn=cmd_extract)

    c = sub.add_parser("compress", help="encode an unweighted complete DFA as a threshold net")
    c.add_argument("--in", dest="inp", required=True)
    c.add_argument("--method", choices=METHODS, required=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--tries", type=int, default=64)
    c.add_argument("--out", required=True)
    c.set_defaults(fn=cmd_compress)

    c = sub.add_parser("separate", help="make a DFA log|Σ|-separable")
    c.add_argument("--in", dest="inp", required=True)
    c.add_argument("--out", required=True)
    c.set_defaults(fn=cmd_separate)

    c = sub.add_parser("score", help="probability (or acceptance) of one string")
    c.add_argument("--in", dest="inp", required=True)
    c.add_argument("--string", required=True, help="whitespace-separated symbols")
    c.set_defaults(fn=cmd_score)

    c = sub.add_parser("equiv", help="compare two models on all strings up to a length")
    c.add_argument("--a", required=True)
    c.add_argument("--b", required=True)
    c.add_argument("--max-len", type=int, default=8)
    c.add_argument("--tol", type=float, default=1e-9)
    c.set_defaults(fn=cmd_equiv)

    c = sub.add_parser("mass", help="probability mass per string length")
    c.add_argument("--in", dest="inp", required=True)
    c.add_argument("--max-len", type=int, default=12)
    c.set_defaults(fn=cmd_mass)

    c = sub.add_parser("gen", help="write a generated automaton")
    c.add_argument("--family", choices=("a_n", "random"), required=True)
    c.add_argument("--symbols", type=int)
    c.add_argument("--states", type=int)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--unweighted", action="store_true", help="random complete DFA instead of a DPFSA")
    c.add_argument("--out", required=True)
    c.set_defaults(fn=cmd_gen)

    c = sub.add_parser("check", help="structural properties of an automaton")
    c.add_argument("--in", dest="inp", required=True)
    c.add_argument("--require", nargs="*", choices=sorted(CHECKS), default=[])
    c.set_defaults(fn=cmd_check)
    return p


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (PreconditionError, BudgetExceededError, DegenerateDistributionError, SimulationCorruptError) as exc:
        print(f"hrnnfsa: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (UsageError, HrnnFsaError) as exc:
        print(f"hrnnfsa: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
