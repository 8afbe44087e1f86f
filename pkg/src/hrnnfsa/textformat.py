"""Plain-text formats for automata, language models and threshold nets.

The grammars are documented in ``docs/formats.md``.  Every printer writes
floats with ``repr`` (or as a bare integer when that is exact), so parsing a
printed object gives back bit-identical numbers.
"""

from __future__ import annotations

import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .compress.codes import FourHotCode, PairCode, TwoHotCode
from .compress.nets import Sublayer, ThresholdNet
from .errors import ParseError
from .hrnn import HrnnLm
from .wfsa import Transition, Wfsa

LM_HEADER = "hrnn-lm"
NET_HEADER = "threshold-net"


def fmt_float(x: float) -> str:
    x = float(x)
    if x == 0.0 and math.copysign(1.0, x) < 0:
        return "-0.0"
    if math.isfinite(x) and x.is_integer() and abs(x) < 2**53:
        return str(int(x))
    return repr(x)


def fmt_weight(w) -> str:
    if isinstance(w, Fraction):
        return str(w)
    return fmt_float(w)


def _lines(text: str):
    """(line number, tokens) for every line that is not blank or a comment."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split()
        for k, tok in enumerate(tokens):
            if tok.startswith("#"):
                tokens = tokens[:k]
                break
        if tokens:
            yield lineno, tokens


def _int(tok: str, lineno: int | None, what: str = "state") -> int:
    try:
        v = int(tok)
    except ValueError:
        raise ParseError(f"bad {what} {tok!r}", lineno) from None
    if v < 0:
        raise ParseError(f"negative {what} {tok!r}", lineno)
    return v


def _weight(tok: str, lineno: int, exact: bool):
    try:
        w = Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad weight {tok!r}", lineno) from None
    return w if exact else float(w) if "/" in tok else float(tok)


# ---------------------------------------------------------------- automata

def parse_fsa(text: str, exact: bool = False) -> Wfsa:
    """Parse the automaton format; ``exact`` keeps weights as Fractions."""
    alphabet: dict[str, int] = {}
    n_states = 0
    declared = 0
    arcs: list[tuple[int, int, str, object]] = []
    finals: dict[int, object] = {}
    inits: dict[int, object] = {}
    one = Fraction(1) if exact else 1.0

    def intern(sym: str) -> int:
        return alphabet.setdefault(sym, len(alphabet))

    for lineno, tok in _lines(text):
        head = tok[0]
        if head == "@alphabet":
            for sym in tok[1:]:
                intern(sym)
        elif head == "@states":
            if len(tok) != 2:
                raise ParseError("@states takes one count", lineno)
            declared = _int(tok[1], lineno, "count")
        elif head == "@init":
            if len(tok) not in (2, 3):
                raise ParseError("@init takes a state and an optional weight", lineno)
            q = _int(tok[1], lineno)
            if q in inits:
                raise ParseError(f"state {q} is initial twice", lineno)
            inits[q] = _weight(tok[2], lineno, exact) if len(tok) == 3 else one
            n_states = max(n_states, q + 1)
        elif head.startswith("@"):
            raise ParseError(f"unknown directive {head}", lineno)
        elif len(tok) in (1, 2):
            q = _int(tok[0], lineno)
            if q in finals:
                raise ParseError(f"state {q} is final twice", lineno)
            finals[q] = _weight(tok[1], lineno, exact) if len(tok) == 2 else one
            n_states = max(n_states, q + 1)
        elif len(tok) in (3, 4):
            src, dst = _int(tok[0], lineno), _int(tok[1], lineno)
            w = _weight(tok[3], lineno, exact) if len(tok) == 4 else one
            arcs.append((src, intern(tok[2]), w, dst))
            n_states = max(n_states, src + 1, dst + 1)
        else:
            raise ParseError(f"cannot read a line with {len(tok)} fields", lineno)
    if declared and declared < n_states:
        raise ParseError(f"@states {declared} but state {n_states - 1} is used")
    n_states = max(n_states, declared)
    zero = Fraction(0) if exact else 0.0
    if not inits and n_states:
        inits = {0: one}
    lam = [inits.get(q, zero) for q in range(n_states)]
    rho = [finals.get(q, zero) for q in range(n_states)]
    names = tuple(sorted(alphabet, key=alphabet.get))
    return Wfsa(names, n_states, tuple(Transition(*t) for t in arcs), tuple(lam), tuple(rho))


def print_fsa(a: Wfsa) -> str:
    out = [f"@alphabet {' '.join(a.alphabet)}".rstrip(), f"@states {a.n_states}"]
    out += [f"@init {q} {fmt_weight(w)}" for q, w in enumerate(a.lam) if w != 0]
    if a.n_states and not a.initial_states:
        out.append(f"@init 0 {fmt_weight(a.lam[0])}")  # otherwise state 0 becomes initial on reading
    out += [f"{t.src} {t.dst} {a.alphabet[t.sym]} {fmt_weight(t.weight)}" for t in a.transitions]
    out += [f"{q} {fmt_weight(w)}" for q, w in enumerate(a.rho) if w != 0]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- HRNN LMs

def _row(tokens, lineno, allow_neginf=False) -> list[float]:
    out = []
    for tok in tokens:
        try:
            v = float(tok)
        except ValueError:
            raise ParseError(f"bad number {tok!r}", lineno) from None
        if math.isnan(v) or v == math.inf or (v == -math.inf and not allow_neginf):
            raise ParseError(f"{tok!r} is not allowed here", lineno)
        out.append(v)
    return out


def print_lm(lm: HrnnLm) -> str:
    out = [f"{LM_HEADER} 1", f"symbols {' '.join(lm.alphabet)}".rstrip(),
           f"projection {lm.projection}", f"D {lm.D}", f"R {lm.embed.shape[0]}"]

    def matrix(name, M):
        out.append(f"{name} {M.shape[0]} {M.shape[1]}")
        out.extend(" ".join(fmt_float(v) for v in row) for row in M)

    matrix("U", lm.U)
    matrix("V", lm.V)
    out.append("b " + " ".join(fmt_float(v) for v in lm.b))
    out.append("h0 " + " ".join(fmt_float(v) for v in lm.h0))
    matrix("E", lm.E)
    if not np.array_equal(lm.embed, np.eye(len(lm.alphabet))):
        matrix("embed", lm.embed)
    return "\n".join(out) + "\n"


def parse_lm(text: str) -> HrnnLm:
    lines = list(_lines(text))
    if not lines or lines[0][1][0] != LM_HEADER:
        raise ParseError(f"expected a '{LM_HEADER}' header")
    fields: dict[str, object] = {}
    k = 1
    while k < len(lines):
        lineno, tok = lines[k]
        key = tok[0]
        k += 1
        if key in fields:
            raise ParseError(f"{key} given twice", lineno)
        if key == "symbols":
            fields[key] = tuple(tok[1:])
        elif key == "projection":
            fields[key] = tok[1] if len(tok) == 2 else None
        elif key in ("D", "R"):
            fields[key] = _int(tok[1], lineno, key) if len(tok) == 2 else None
        elif key in ("b", "h0"):
            fields[key] = np.array(_row(tok[1:], lineno))
        elif key in ("U", "V", "E", "embed"):
            if len(tok) != 3:
                raise ParseError(f"{key} needs a row and a column count", lineno)
            n_rows, n_cols = _int(tok[1], lineno, "count"), _int(tok[2], lineno, "count")
            rows = []
            for _ in range(n_rows):
                if k >= len(lines):
                    raise ParseError(f"{key} ends early", lineno)
                rlineno, rtok = lines[k]
                k += 1
                row = _row(rtok, rlineno, allow_neginf=key == "E")
                if len(row) != n_cols:
                    raise ParseError(f"{key} row has {len(row)} entries, expected {n_cols}", rlineno)
                rows.append(row)
            fields[key] = np.array(rows).reshape(n_rows, n_cols)
        else:
            raise ParseError(f"unknown field {key!r}", lineno)
    missing = [f for f in ("symbols", "projection", "D", "R", "U", "V", "b", "h0", "E") if fields.get(f) is None]
    if missing:
        raise ParseError(f"missing fields: {', '.join(missing)}")
    if fields["U"].shape[0] != fields["D"] or fields["V"].shape[1] != fields["R"]:
        raise ParseError("declared D or R disagrees with the matrices")
    try:
        return HrnnLm(fields["symbols"], fields["U"], fields["V"], fields["b"], fields["h0"],
                      fields["E"], fields["projection"], fields.get("embed"))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


# ---------------------------------------------------------------- threshold nets

def print_net(net: ThresholdNet) -> str:
    code = net.code
    out = [f"{NET_HEADER} 1", f"method {net.method}", f"symbols {' '.join(net.alphabet)}".rstrip(),
           f"states {code.n_states}", "finals " + " ".join(str(q) for q in sorted(net.finals))]
    if isinstance(code, FourHotCode):
        out.append("permutation " + " ".join(str(v) for v in code.permutation))
    out.append(f"units {net.n_units}")
    out.append("init " + " ".join(str(i) for i in np.flatnonzero(net.x0)))
    for layer in net.sublayers:
        out.append(f"sublayer {len(layer.targets)}")
        for row, t in enumerate(layer.targets):
            w = " ".join(f"{i}={fmt_float(layer.W[row, i])}" for i in np.flatnonzero(layer.W[row]))
            s = " ".join(f"{i}={fmt_float(layer.S[row, i])}" for i in np.flatnonzero(layer.S[row]))
            out.append(f"unit {t} bias {fmt_float(layer.b[row])} in {w} sym {s}".replace("  ", " ").rstrip())
    return "\n".join(out) + "\n"


def _pairs(tokens, lineno) -> dict[int, float]:
    out = {}
    for tok in tokens:
        key, eq, val = tok.partition("=")
        if not eq:
            raise ParseError(f"expected index=weight, got {tok!r}", lineno)
        out[_int(key, lineno, "index")] = _row([val], lineno)[0]
    return out


def parse_net(text: str) -> ThresholdNet:
    lines = list(_lines(text))
    if not lines or lines[0][1][0] != NET_HEADER:
        raise ParseError(f"expected a '{NET_HEADER}' header")
    head: dict[str, list[str]] = {}
    k = 1
    while k < len(lines) and lines[k][1][0] != "sublayer":
        lineno, tok = lines[k]
        head[tok[0]] = tok[1:]
        k += 1
    for key in ("method", "symbols", "states", "finals", "units", "init"):
        if key not in head:
            raise ParseError(f"missing field {key!r}")
    alphabet = tuple(head["symbols"])
    method = head["method"][0] if head["method"] else ""
    n_states = _int(head["states"][0], None, "count")
    n_units = _int(head["units"][0], None, "count")
    if method == "minsky":
        code = PairCode(n_states, len(alphabet))
    elif method == "dewdney":
        code = TwoHotCode(n_states, len(alphabet))
    elif method == "indyk":
        perm = tuple(_int(v, None, "permutation entry") for v in head.get("permutation", []))
        try:
            code = FourHotCode(n_states, len(alphabet), perm)
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    else:
        raise ParseError(f"unknown method {method!r}")
    x0 = np.zeros(n_units)
    for tok in head["init"]:
        x0[_int(tok, None, "unit")] = 1.0
    sublayers = []
    while k < len(lines):
        lineno, tok = lines[k]
        if tok[0] != "sublayer" or len(tok) != 2:
            raise ParseError("expected 'sublayer COUNT'", lineno)
        count = _int(tok[1], lineno, "count")
        k += 1
        targets, W, S, b = [], np.zeros((count, n_units)), np.zeros((count, len(alphabet))), np.zeros(count)
        for row in range(count):
            if k >= len(lines):
                raise ParseError("sublayer ends early", lineno)
            ulineno, utok = lines[k]
            k += 1
            if len(utok) < 6 or utok[0] != "unit" or utok[2] != "bias" or utok[4] != "in" or "sym" not in utok:
                raise ParseError("expected 'unit T bias B in ... sym ...'", ulineno)
            split = utok.index("sym")
            targets.append(_int(utok[1], ulineno, "unit"))
            b[row] = _row([utok[3]], ulineno)[0]
            for i, v in _pairs(utok[5:split], ulineno).items():
                W[row, i] = v
            for i, v in _pairs(utok[split + 1:], ulineno).items():
                S[row, i] = v
        sublayers.append(Sublayer(np.array(targets, dtype=np.int64), W, S, b))
    finals = frozenset(_int(q, None) for q in head["finals"])
    return ThresholdNet(method, alphabet, code, tuple(sublayers), x0, finals)


# ---------------------------------------------------------------- files

def sniff(text: str) -> str:
    """'lm', 'net' or 'fsa' according to the first meaningful token."""
    for _, tok in _lines(text):
        if tok[0] == LM_HEADER:
            return "lm"
        if tok[0] == NET_HEADER:
            return "net"
        return "fsa"
    return "fsa"


def load(path: str | Path, exact: bool = False):
    text = Path(path).read_text()
    kind = sniff(text)
    if kind == "lm":
        return parse_lm(text)
    if kind == "net":
        return parse_net(text)
    return parse_fsa(text, exact)


def dump(obj, path: str | Path) -> None:
    if isinstance(obj, Wfsa):
        text = print_fsa(obj)
    elif isinstance(obj, HrnnLm):
        text = print_lm(obj)
    else:
        text = print_net(obj)
    Path(path).write_text(text)
