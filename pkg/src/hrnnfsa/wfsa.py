"""Weighted finite-state automata over the real (probability) semiring.

States are the integers ``0..n_states-1`` and symbols are dense indices into
``alphabet``.  Weights are plain Python numbers: floats normally, or
:class:`fractions.Fraction` when an exact oracle is wanted (see
:mod:`hrnnfsa.verify`).  Every automaton is immutable once built.

A *string* is any sequence of symbol names.  A plain ``str`` is therefore read
character by character, which is handy for single-letter alphabets.
"""

from __future__ import annotations

import string as _string
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import InvalidArgumentError, InvalidPathError, UnknownSymbolError

Weight = float | Fraction


@dataclass(frozen=True)
class Transition:
    src: int
    sym: int
    weight: Weight
    dst: int


@dataclass(frozen=True)
class Wfsa:
    alphabet: tuple[str, ...]
    n_states: int
    transitions: tuple[Transition, ...]
    lam: tuple[Weight, ...]
    rho: tuple[Weight, ...]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        object.__setattr__(self, "lam", tuple(self.lam))
        object.__setattr__(self, "rho", tuple(self.rho))
        if len(set(self.alphabet)) != len(self.alphabet):
            raise InvalidArgumentError(f"duplicate symbols in {self.alphabet}")
        if self.n_states < 0:
            raise InvalidArgumentError("n_states must be nonnegative")
        if len(self.lam) != self.n_states or len(self.rho) != self.n_states:
            raise InvalidArgumentError("lam and rho need one entry per state")
        for t in self.transitions:
            if not (0 <= t.src < self.n_states and 0 <= t.dst < self.n_states):
                raise InvalidArgumentError(f"state out of range in {t}")
            if not 0 <= t.sym < len(self.alphabet):
                raise InvalidArgumentError(f"symbol out of range in {t}")

    @cached_property
    def symbol_ids(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.alphabet)}

    @cached_property
    def arcs(self) -> dict[tuple[int, int], list[Transition]]:
        """Outgoing transitions grouped by ``(src, sym)``."""
        out: dict[tuple[int, int], list[Transition]] = defaultdict(list)
        for t in self.transitions:
            out[t.src, t.sym].append(t)
        return dict(out)

    @cached_property
    def delta(self) -> dict[tuple[int, int], int]:
        """Transition function of a deterministic automaton (first arc wins otherwise)."""
        return {key: ts[0].dst for key, ts in self.arcs.items()}

    @property
    def initial_states(self) -> list[int]:
        return [q for q, w in enumerate(self.lam) if w != 0]

    @property
    def final_states(self) -> list[int]:
        return [q for q, w in enumerate(self.rho) if w != 0]

    def encode(self, y: Iterable[str]) -> tuple[int, ...]:
        ids = self.symbol_ids
        try:
            return tuple(ids[s] for s in y)
        except KeyError as exc:
            raise UnknownSymbolError(exc.args[0]) from None

    def decode(self, ids: Iterable[int]) -> tuple[str, ...]:
        return tuple(self.alphabet[i] for i in ids)


def default_alphabet(n: int) -> tuple[str, ...]:
    if n <= 26:
        return tuple(_string.ascii_lowercase[:n])
    return tuple(f"s{i}" for i in range(n))


def unweighted(
    alphabet: Sequence[str],
    n_states: int,
    edges: Iterable[tuple[int, str, int]],
    initial: int = 0,
    finals: Iterable[int] = (),
) -> Wfsa:
    """Build a plain FSA: every weight is 1, ``initial`` gets λ = 1, finals get ρ = 1."""
    alphabet = tuple(alphabet)
    ids = {s: i for i, s in enumerate(alphabet)}
    transitions = tuple(Transition(src, ids[sym], 1.0, dst) for src, sym, dst in edges)
    lam = [0.0] * n_states
    lam[initial] = 1.0
    rho = [0.0] * n_states
    for q in finals:
        rho[q] = 1.0
    return Wfsa(alphabet, n_states, transitions, tuple(lam), tuple(rho))


def path_weight(a: Wfsa, path: Sequence[Transition], start: int | None = None) -> Weight:
    """λ(first source) · Π weights · ρ(last target).

    ``start`` names the state of an empty path; for a non-empty path it is
    optional but must agree with the first source when given.
    """
    if not path:
        if start is None:
            raise InvalidPathError("an empty path needs an explicit start state")
        return a.lam[start] * a.rho[start]
    if start is not None and start != path[0].src:
        raise InvalidPathError(f"path starts in {path[0].src}, not {start}")
    known = set(a.transitions)
    for prev, nxt in zip(path, path[1:]):
        if prev.dst != nxt.src:
            raise InvalidPathError(f"{prev} and {nxt} are not consecutive")
    w = a.lam[path[0].src]
    for t in path:
        if t not in known:
            raise InvalidPathError(f"{t} is not a transition of the automaton")
        w = w * t.weight
    return w * a.rho[path[-1].dst]


def forward(a: Wfsa, y: Iterable[str]) -> dict[int, Weight]:
    """Forward weights after scanning ``y``: state -> summed prefix-path weight."""
    alpha = {q: w for q, w in enumerate(a.lam) if w != 0}
    for sym in a.encode(y):
        nxt: dict[int, Weight] = {}
        for q, w in alpha.items():
            for t in a.arcs.get((q, sym), ()):
                nxt[t.dst] = nxt.get(t.dst, 0) + w * t.weight
        alpha = nxt
        if not alpha:
            break
    return alpha


def stringsum(a: Wfsa, y: Iterable[str]) -> Weight:
    ids = a.encode(y)  # surface unknown symbols even when the prefix dies early
    alpha = forward(a, a.decode(ids))
    total: Weight = a.rho[0] * 0 if a.rho else 0.0  # keep float vs Fraction
    for q, w in alpha.items():
        total = total + w * a.rho[q]
    return total


def run(a: Wfsa, y: Iterable[str]) -> list[int] | None:
    """State trajectory of a deterministic automaton, or None once δ is undefined."""
    (q,) = a.initial_states
    traj = [q]
    for sym in a.encode(y):
        q = a.delta.get((q, sym))
        if q is None:
            return None
        traj.append(q)
    return traj


def accepts(a: Wfsa, y: Iterable[str]) -> bool:
    return stringsum(a, y) != 0


def is_deterministic(a: Wfsa) -> bool:
    if len(a.initial_states) != 1:
        return False
    return all(len(ts) == 1 for ts in a.arcs.values())


def is_probabilistic(a: Wfsa, tol: float = 1e-9) -> bool:
    if any(w < 0 for w in a.lam) or any(w < 0 for w in a.rho):
        return False
    if any(t.weight < 0 for t in a.transitions):
        return False
    if abs(sum(a.lam) - 1) > tol:
        return False
    out = list(a.rho)
    for t in a.transitions:
        out[t.src] = out[t.src] + t.weight
    return all(abs(m - 1) <= tol for m in out)


def is_complete(a: Wfsa) -> bool:
    return all((q, y) in a.arcs for q in range(a.n_states) for y in range(len(a.alphabet)))


def is_unweighted(a: Wfsa) -> bool:
    weights = [t.weight for t in a.transitions] + list(a.lam) + list(a.rho)
    return all(w in (0, 1) for w in weights)


def is_log_separable(a: Wfsa) -> bool:
    if not is_deterministic(a):
        return False
    pairs = [(t.src, t.dst) for t in a.transitions]
    return len(pairs) == len(set(pairs))


def gen_a_n(n_symbols: int) -> Wfsa:
    """The family A_N: ``y1`` leads from 0 to 1, every other symbol from 0 to 2.

    Lifted to a DPFSA with weight 1/N on each arc out of state 0 and
    ρ(1) = ρ(2) = 1.
    """
    if n_symbols < 2:
        raise InvalidArgumentError(f"A_N needs at least 2 symbols, got {n_symbols}")
    alphabet = tuple(f"y{i}" for i in range(1, n_symbols + 1))
    w = 1.0 / n_symbols
    transitions = [Transition(0, 0, w, 1)]
    transitions += [Transition(0, k, w, 2) for k in range(1, n_symbols)]
    return Wfsa(alphabet, 3, tuple(transitions), (1.0, 0.0, 0.0), (0.0, 1.0, 1.0))


def stick_breaking(rng: np.random.Generator, k: int) -> list[float]:
    """Split unit mass into ``k`` positive pieces; the last piece takes the remainder."""
    pieces = []
    rest = 1.0
    for v in rng.uniform(0.05, 0.95, size=k - 1):
        piece = rest * float(v)
        pieces.append(piece)
        rest -= piece
    pieces.append(rest)
    return pieces


def gen_random_dpfsa(seed: int, n_states: int, n_symbols: int) -> Wfsa:
    """Random complete DPFSA with start state 0 and stick-broken weight rows."""
    if n_states < 1 or n_symbols < 1:
        raise InvalidArgumentError("need at least one state and one symbol")
    rng = np.random.default_rng(seed)
    transitions = []
    rho = []
    for q in range(n_states):
        targets = rng.integers(0, n_states, size=n_symbols)
        # shuffle so the final weight is not always the smallest stick
        row = rng.permutation(stick_breaking(rng, n_symbols + 1))
        transitions += [Transition(q, y, float(row[y]), int(targets[y])) for y in range(n_symbols)]
        rho.append(float(row[n_symbols]))
    lam = (1.0,) + (0.0,) * (n_states - 1)
    return Wfsa(default_alphabet(n_symbols), n_states, tuple(transitions), lam, tuple(rho))


def gen_random_fsa(seed: int, n_states: int, n_symbols: int, p_final: float = 0.4) -> Wfsa:
    """Random complete deterministic unweighted FSA with start state 0."""
    rng = np.random.default_rng(seed)
    edges = [
        (q, y, int(rng.integers(0, n_states)))
        for q in range(n_states)
        for y in default_alphabet(n_symbols)
    ]
    finals = [q for q in range(n_states) if rng.random() < p_final]
    return unweighted(default_alphabet(n_symbols), n_states, edges, 0, finals)


def _num(text: str, exact: bool) -> Weight:
    return Fraction(text) if exact else float(text)


def _from_table(alphabet, n_states, rows, finals, exact):
    ids = {s: i for i, s in enumerate(alphabet)}
    transitions = tuple(Transition(q, ids[y], _num(w, exact), r) for q, y, w, r in rows)
    lam = [_num("0", exact)] * n_states
    lam[0] = _num("1", exact)
    rho = [_num("0", exact)] * n_states
    for q, w in finals.items():
        rho[q] = _num(w, exact)
    return Wfsa(tuple(alphabet), n_states, transitions, tuple(lam), tuple(rho))


def fixtures(exact: bool = False) -> dict[str, Wfsa]:
    """The three small automata used throughout the tests.

    ``example_fslm`` gives a b^n a b^m probability 0.6·0.1^n·0.9·0.7^m·0.3,
    ``nondet_pfsa`` is a PFSA with no deterministic equivalent, and
    ``minsky_example`` is the 3-state automaton whose compiled matrices are
    written out by hand in ``tests/test_minsky.py``.
    """
    example_fslm = _from_table(
        "ab", 3,
        [(0, "a", "0.6", 1), (0, "b", "0.4", 2), (1, "b", "0.1", 1),
         (1, "a", "0.9", 2), (2, "b", "0.7", 2)],
        {2: "0.3"}, exact,
    )
    nondet_pfsa = _from_table(
        "abc", 4,
        [(0, "a", "0.5", 1), (0, "a", "0.5", 2), (1, "b", "0.9", 1),
         (2, "b", "0.1", 2), (1, "c", "0.1", 3), (2, "c", "0.9", 3)],
        {3: "1"}, exact,
    )
    minsky_example = _from_table(
        "ab", 3,
        [(0, "a", "0.1", 1), (0, "b", "0.9", 2), (1, "a", "0.5", 0),
         (1, "b", "0.5", 2), (2, "b", "0.5", 2)],
        {2: "0.5"}, exact,
    )
    return {
        "example_fslm": example_fslm,
        "nondet_pfsa": nondet_pfsa,
        "minsky_example": minsky_example,
    }
