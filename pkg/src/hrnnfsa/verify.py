"""Brute-force oracles: exhaustive equivalence checks, mass audits, exact stringsums.

A scorer assigns a number to every string.  To enumerate Σ^{≤L} quickly the
scorers here work on whole levels at once: ``start`` returns the state of the
empty prefix as a batch of one, ``advance`` extends every prefix in a batch by
one symbol, and ``end`` gives the score of every prefix in the batch as a
complete string.  States are tuples of arrays whose first axis is the batch.
A scorer may also offer ``live``, a mask of the prefixes that can still lead
to a nonzero score; mass audits use it to skip dead branches.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Protocol

import numpy as np

from .compress.nets import ThresholdNet, net_step
from .errors import AlphabetMismatchError, InvalidArgumentError
from .hrnn import HrnnLm, next_dist, step
from .wfsa import Transition, Wfsa, forward


class Scorer(Protocol):
    alphabet: tuple[str, ...]

    def start(self) -> tuple: ...

    def advance(self, state: tuple, y: int) -> tuple: ...

    def end(self, state: tuple) -> np.ndarray: ...


class WfsaScorer:
    """Forward algorithm with one weight vector per prefix."""

    def __init__(self, a: Wfsa):
        self.alphabet = a.alphabet
        n = a.n_states
        self.mats = np.zeros((len(a.alphabet), n, n))
        for t in a.transitions:
            self.mats[t.sym, t.src, t.dst] += float(t.weight)
        self.lam = np.array([float(w) for w in a.lam]).reshape(1, n)
        self.rho = np.array([float(w) for w in a.rho])

    def start(self):
        return (self.lam,)

    def advance(self, state, y):
        return (state[0] @ self.mats[y],)

    def end(self, state):
        return state[0] @ self.rho

    def live(self, state):
        return (state[0] != 0).any(axis=1)


class LmScorer:
    """Carries (hidden state, prefix probability, next-symbol distribution)."""

    def __init__(self, lm: HrnnLm):
        self.lm = lm
        self.alphabet = lm.alphabet

    def _dist(self, h, p):
        dist = np.zeros((len(h), len(self.alphabet) + 1))
        live = p > 0  # like score_string, never project past a zero factor
        if live.any():
            dist[live] = next_dist(self.lm, h[live])
        return dist

    def start(self):
        h = self.lm.h0.reshape(1, -1)
        p = np.ones(1)
        return h, p, self._dist(h, p)

    def advance(self, state, y):
        h, p, dist = state
        p = p * dist[:, y]
        h = step(self.lm, h, y)
        return h, p, self._dist(h, p)

    def end(self, state):
        h, p, dist = state
        return p * dist[:, self.lm.eos]

    def live(self, state):
        return state[1] > 0


class NetScorer:
    """The acceptor induced by a threshold net: 1 on accepted strings, else 0."""

    def __init__(self, net: ThresholdNet):
        self.net = net
        self.alphabet = net.alphabet

    def start(self):
        return (self.net.x0.reshape(1, -1),)

    def advance(self, state, y):
        return (net_step(self.net, state[0], y),)

    def end(self, state):
        decode = self.net.code.decode_data
        n_data = self.net.n_data
        return np.array([float(decode(x[:n_data]) in self.net.finals) for x in state[0]])


class FunctionScorer:
    """Wraps any ``string -> float`` callable; slow but fully general."""

    def __init__(self, alphabet: Sequence[str], fn: Callable[[tuple[str, ...]], float]):
        self.alphabet = tuple(alphabet)
        self.fn = fn

    def start(self):
        return (np.empty((1, 0), dtype=np.int64),)

    def advance(self, state, y):
        ids = state[0]
        return (np.hstack([ids, np.full((len(ids), 1), y, dtype=np.int64)]),)

    def end(self, state):
        return np.array([self.fn(tuple(self.alphabet[i] for i in row)) for row in state[0]])


def as_scorer(obj: Any) -> Scorer:
    if isinstance(obj, Wfsa):
        return WfsaScorer(obj)
    if isinstance(obj, HrnnLm):
        return LmScorer(obj)
    if isinstance(obj, ThresholdNet):
        return NetScorer(obj)
    if all(hasattr(obj, m) for m in ("alphabet", "start", "advance", "end")):
        return obj
    raise InvalidArgumentError(f"cannot score strings with {type(obj).__name__}")


def _expand(scorer: Scorer, state: tuple, order: Sequence[int]) -> tuple:
    """Children of every prefix, prefix-major, so each level stays lexicographic."""
    kids = [scorer.advance(state, y) for y in order]
    return tuple(
        np.stack([k[c] for k in kids], axis=1).reshape((-1,) + kids[0][c].shape[1:])
        for c in range(len(state))
    )


def _levels(scorer: Scorer, max_len: int, order: Sequence[int] | None = None, prune: bool = False):
    """Yield (length, scores of all strings of that length in lexicographic order).

    With ``prune`` the strings behind dead prefixes are skipped, so the
    scores no longer line up with string ranks; only sums stay meaningful.
    """
    order = range(len(scorer.alphabet)) if order is None else order
    live = getattr(scorer, "live", None) if prune else None
    state = scorer.start()
    for length in range(max_len + 1):
        yield length, np.asarray(scorer.end(state), dtype=np.float64)
        if live is not None:
            mask = np.asarray(live(state), dtype=bool)
            state = tuple(c[mask] for c in state)
        if length < max_len and len(order):
            state = _expand(scorer, state, order)
        elif length < max_len:
            return


def _unrank(index: int, length: int, alphabet: Sequence[str]) -> tuple[str, ...]:
    n = len(alphabet)
    out = []
    for _ in range(length):
        index, d = divmod(index, n)
        out.append(alphabet[d])
    return tuple(reversed(out))


@dataclass(frozen=True)
class EquivReport:
    max_abs_diff: float
    worst_string: tuple[str, ...]
    n_checked: int
    passed: bool

    def __bool__(self) -> bool:
        return self.passed


def brute_equiv(a, b, max_len: int, tol: float = 1e-9) -> EquivReport:
    """Compare two scorers on every string of length at most ``max_len``.

    Strings are visited in length-lexicographic order over the alphabet of
    ``a``; the reported worst string is the first one reaching the maximum
    difference.  NaN differences count as infinitely bad.
    """
    if max_len < 0:
        raise InvalidArgumentError("max_len must be nonnegative")
    sa, sb = as_scorer(a), as_scorer(b)
    if set(sa.alphabet) != set(sb.alphabet) or len(sa.alphabet) != len(sb.alphabet):
        raise AlphabetMismatchError(f"{sa.alphabet} vs {sb.alphabet}")
    ids_b = {s: i for i, s in enumerate(sb.alphabet)}
    order_b = [ids_b[s] for s in sa.alphabet]
    worst = (-1.0, 0, 0)
    n_checked = 0
    for (length, va), (_, vb) in zip(_levels(sa, max_len), _levels(sb, max_len, order_b)):
        diff = np.abs(va - vb)
        diff[np.isnan(diff)] = np.inf
        i = int(np.argmax(diff))
        if diff[i] > worst[0]:
            worst = (float(diff[i]), length, i)
        n_checked += len(diff)
    max_diff, length, i = worst
    return EquivReport(max_diff, _unrank(i, length, sa.alphabet), n_checked, max_diff <= tol)


@dataclass(frozen=True)
class MassReport:
    per_length: list[float]
    cumulative: list[float]


def mass_report(scorer, max_len: int) -> MassReport:
    """Total score of the strings of each length, and running totals.

    Prefixes a scorer reports as dead are not expanded; they can only add zeros.
    """
    per_length = [math.fsum(v) for _, v in _levels(as_scorer(scorer), max_len, prune=True)]
    per_length += [0.0] * (max_len + 1 - len(per_length))
    cumulative = []
    total = 0.0
    for m in per_length:
        total += m
        cumulative.append(total)
    return MassReport(per_length, cumulative)


def to_exact(a: Wfsa) -> Wfsa:
    """Same automaton with every weight as a Fraction (floats convert exactly)."""
    return Wfsa(
        a.alphabet,
        a.n_states,
        tuple(Transition(t.src, t.sym, Fraction(t.weight), t.dst) for t in a.transitions),
        tuple(Fraction(w) for w in a.lam),
        tuple(Fraction(w) for w in a.rho),
    )


def stringsum_exact(a: Wfsa, y: Sequence[str]) -> Fraction:
    exact = to_exact(a)
    alpha = forward(exact, y)
    return sum((w * exact.rho[q] for q, w in alpha.items()), Fraction(0))
