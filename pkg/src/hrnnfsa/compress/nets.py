"""Layered threshold nets that run an unweighted deterministic FSA.

The unit vector is ``[data cells | processing cells]``.  One FSA step runs the
sublayers in order; a sublayer overwrites its target units with
``H(W x + S onehot(y) + b)`` and leaves every other unit alone.  Only the
last sublayer looks at the input symbol.

Three layouts are provided:

* ``minsky``: one-hot (state, symbol) data cells and a single sublayer.
* ``dewdney``: two-hot data cells; line-cover detectors in 4 sublayers.
* ``indyk``: four-hot data cells; non-decreasing-cover detectors in 5 sublayers.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from ..errors import PreconditionError, UnknownSymbolError
from ..hrnn import heaviside
from ..wfsa import Wfsa, is_complete, is_deterministic
from .codes import FourHotCode, PairCode, TwoHotCode
from .detectors import Detector, detect_line, detect_nondecreasing
from .matrices import line_cover, nondecreasing_cover

METHODS = ("minsky", "dewdney", "indyk")
SUBLAYERS = {"minsky": 1, "dewdney": 4, "indyk": 5}


@dataclass(frozen=True, eq=False)
class Sublayer:
    targets: np.ndarray  # unit indices written by this sublayer
    W: np.ndarray  # len(targets) x n_units
    S: np.ndarray  # len(targets) x |Σ|
    b: np.ndarray


@dataclass(frozen=True, eq=False)
class Part:
    """One component-activating matrix with its cover and detectors (diagnostics)."""

    key: tuple[int, int, int]  # (symbol, component, value)
    matrix: np.ndarray
    cover: list[np.ndarray]
    detectors: list[Detector]


@dataclass(frozen=True, eq=False)
class ThresholdNet:
    method: str
    alphabet: tuple[str, ...]
    code: PairCode | TwoHotCode | FourHotCode
    sublayers: tuple[Sublayer, ...]
    x0: np.ndarray
    finals: frozenset[int]
    parts: tuple[Part, ...] = field(default=())

    @property
    def n_units(self) -> int:
        return len(self.x0)

    @property
    def n_data(self) -> int:
        return self.code.data_size()

    @property
    def symbol_layer(self) -> int:
        return len(self.sublayers) - 1

    def size_report(self) -> dict[str, int | str]:
        return {
            "method": self.method,
            "states": self.code.n_states,
            "symbols": len(self.alphabet),
            "data_cells": self.n_data,
            "processing_cells": self.n_units - self.n_data,
            "total_units": self.n_units,
            "sublayers": len(self.sublayers),
        }


class _Builder:
    """Collects sparse unit definitions and turns them into dense sublayers."""

    def __init__(self, n_data: int, n_layers: int, n_symbols: int):
        self.n_units = n_data
        self.n_symbols = n_symbols
        self.layers: list[list] = [[] for _ in range(n_layers)]

    def unit(self, layer: int, inputs: dict[int, float], bias: float,
             symbols: dict[int, float] | None = None, target: int | None = None) -> int:
        if target is None:
            target = self.n_units
            self.n_units += 1
        self.layers[layer].append((target, inputs, symbols or {}, bias))
        return target

    def build(self) -> tuple[Sublayer, ...]:
        out = []
        for rows in self.layers:
            targets = np.array([t for t, *_ in rows], dtype=np.int64)
            W = np.zeros((len(rows), self.n_units))
            S = np.zeros((len(rows), self.n_symbols))
            b = np.zeros(len(rows))
            for row, (_, inputs, symbols, bias) in enumerate(rows):
                for k, v in inputs.items():
                    W[row, k] = v
                for k, v in symbols.items():
                    S[row, k] = v
                b[row] = bias
            out.append(Sublayer(targets, W, S, b))
        return tuple(out)


def _check(a: Wfsa) -> None:
    if not is_deterministic(a):
        raise PreconditionError("compressed encodings need a deterministic FSA")
    if not is_complete(a):
        raise PreconditionError("compressed encodings need a complete FSA (every state reads every symbol)")


def _start(a: Wfsa) -> int:
    (q0,) = a.initial_states
    return q0


def parent_matrix(a: Wfsa, code: TwoHotCode | FourHotCode, j: int, k: int, y: int) -> np.ndarray:
    """OR of the cells of every q whose y-successor has code component j equal to k."""
    M = np.zeros((code.side, code.side), dtype=np.uint8)
    for q in range(a.n_states):
        q2 = a.delta.get((q, y))
        if q2 is not None and code.components(q2)[j] == k:
            M[code.cell(q)] = 1
    return M


def build_minsky_net(a: Wfsa) -> ThresholdNet:
    _check(a)
    n_sym = len(a.alphabet)
    code = PairCode(a.n_states, n_sym)
    builder = _Builder(code.data_size(), SUBLAYERS["minsky"], n_sym)
    parents: dict[int, list[int]] = {}
    for (q, y), q2 in sorted(a.delta.items()):
        parents.setdefault(code.data_index(q2, y), []).extend(
            code.data_index(q, y0) for y0 in range(n_sym)
        )
    for q2 in range(a.n_states):
        for y in range(n_sym):
            idx = code.data_index(q2, y)
            inputs = {i: 1.0 for i in parents.get(idx, ())}
            builder.unit(0, inputs, -1.0, {y: 1.0} if inputs else None, target=idx)
    x0 = code.encode_data(_start(a), 0)
    return ThresholdNet("minsky", a.alphabet, code, builder.build(), x0, frozenset(a.final_states))


def _lift(w: np.ndarray, slots: Sequence[int]) -> dict[int, float]:
    """Map a detector's pair-input weights onto the units that carry the pair input."""
    out: dict[int, float] = {}
    for pos, v in enumerate(w):
        if v != 0:
            out[slots[pos]] = out.get(slots[pos], 0.0) + float(v)
    return out


def build_dewdney(a: Wfsa) -> ThresholdNet:
    _check(a)
    n_sym = len(a.alphabet)
    code = TwoHotCode(a.n_states, n_sym)
    s = code.s
    builder = _Builder(code.data_size(), SUBLAYERS["dewdney"], n_sym)
    parts = []
    for y in range(n_sym):
        for j in range(2):
            for k in range(s):
                M = parent_matrix(a, code, j, k, y)
                cover = line_cover(M)
                dets = [detect_line(L) for L in cover]
                outs = [_add_detector(builder, det, _dewdney_inputs(code, det), 0) for det in dets]
                cand = builder.unit(2, {u: 1.0 for u in outs}, 0.0)
                builder.unit(3, {cand: 1.0}, -1.0, {y: 1.0}, target=code.data_index(y, j, k))
                parts.append(Part((y, j, k), M, cover, dets))
    x0 = code.encode_data(_start(a), 0)
    x0 = np.concatenate([x0, np.zeros(builder.n_units - len(x0))])
    return ThresholdNet("dewdney", a.alphabet, code, builder.build(), x0,
                        frozenset(a.final_states), tuple(parts))


def _dewdney_inputs(code: TwoHotCode, det: Detector) -> list[dict[int, float]]:
    # The pair input (e_i | e_j) is the two-hot block of whichever symbol was
    # read last, so every symbol block gets the same weights.
    s = code.s
    out = []
    for n in det.neurons:
        inputs: dict[int, float] = {}
        for y in range(code.n_symbols):
            slots = [code.data_index(y, c, v) for c in range(2) for v in range(s)]
            inputs.update(_lift(n.w, slots))
        out.append(inputs)
    return out


def _add_detector(builder: _Builder, det: Detector, inputs: list[dict[int, float]], first: int) -> int:
    """Place a detector's neurons; a lone neuron sits one layer later than a pair
    so that every detector output is ready at the same sublayer."""
    if len(det.neurons) == 1:
        return builder.unit(first + 1, inputs[0], det.neurons[0].b)
    units = [builder.unit(first, inp, n.b) for inp, n in zip(inputs, det.neurons)]
    return builder.unit(first + 1, {u: 1.0 for u in units}, -(len(units) - 1.0))


def indyk_cost(a: Wfsa, code: FourHotCode) -> int:
    """Total units of the Indyk net for this permutation, without building it."""
    n_sym = len(a.alphabet)
    total = code.data_size() + 2 * code.side
    for y in range(n_sym):
        for j in range(4):
            for k in range(code.r):
                total += 3 * len(nondecreasing_cover(parent_matrix(a, code, j, k, y))) + 1
    return total


def best_permutation(a: Wfsa, seed: int = 0, max_tries: int = 64) -> tuple[tuple[int, ...], int]:
    """Lowest-cost permutation among ``max_tries`` seeded draws (first one wins ties)."""
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(max(1, max_tries)):
        perm = tuple(int(v) for v in rng.permutation(a.n_states))
        cost = indyk_cost(a, FourHotCode(a.n_states, len(a.alphabet), perm))
        if best is None or cost < best[1]:
            best = (perm, cost)
    return best


def build_indyk(a: Wfsa, seed: int = 0, max_tries: int = 64) -> ThresholdNet:
    _check(a)
    n_sym = len(a.alphabet)
    perm, _ = best_permutation(a, seed, max_tries)
    code = FourHotCode(a.n_states, n_sym, perm)
    r, side = code.r, code.side
    builder = _Builder(code.data_size(), SUBLAYERS["indyk"], n_sym)

    def digit_pair(lo: int, value: int) -> int:
        inputs = {}
        for y in range(n_sym):
            inputs[code.data_index(y, lo, value % r)] = 1.0
            inputs[code.data_index(y, lo + 1, value // r)] = 1.0
        return builder.unit(0, inputs, -1.0)

    # rows of the r² x r² matrices come from digits 3,4 and columns from digits 1,2
    cols = [digit_pair(0, v) for v in range(side)]
    rows = [digit_pair(2, v) for v in range(side)]
    slots = rows + cols
    parts = []
    for y in range(n_sym):
        for j in range(4):
            for k in range(r):
                M = parent_matrix(a, code, j, k, y)
                cover = nondecreasing_cover(M)
                dets = [detect_nondecreasing(L) for L in cover]
                outs = [_add_detector(builder, det, [_lift(n.w, slots) for n in det.neurons], 1)
                        for det in dets]
                cand = builder.unit(3, {u: 1.0 for u in outs}, 0.0)
                builder.unit(4, {cand: 1.0}, -1.0, {y: 1.0}, target=code.data_index(y, j, k))
                parts.append(Part((y, j, k), M, cover, dets))
    x0 = code.encode_data(_start(a), 0)
    x0 = np.concatenate([x0, np.zeros(builder.n_units - len(x0))])
    return ThresholdNet("indyk", a.alphabet, code, builder.build(), x0,
                        frozenset(a.final_states), tuple(parts))


def build_net(a: Wfsa, method: str, seed: int = 0, max_tries: int = 64) -> ThresholdNet:
    if method == "minsky":
        return build_minsky_net(a)
    if method == "dewdney":
        return build_dewdney(a)
    if method == "indyk":
        return build_indyk(a, seed, max_tries)
    raise ValueError(f"unknown method {method!r}")


def dewdney_unit_bound(n_states: int, n_symbols: int) -> float:
    """8|Σ|s√(2s) + 2|Σ|s, the processing bound plus the data cells."""
    s = TwoHotCode(n_states, n_symbols).s
    return 8 * n_symbols * s * math.sqrt(2 * s) + 2 * n_symbols * s


def net_step(net: ThresholdNet, x: np.ndarray, y: int) -> np.ndarray:
    """One FSA step on a unit vector (or a batch of them, one per row)."""
    x = np.array(x, dtype=np.float64)
    for layer in net.sublayers:
        x[..., layer.targets] = heaviside(x @ layer.W.T + layer.S[:, y] + layer.b)
    return x


def simulate_net(net: ThresholdNet, y: Sequence[str]) -> list[int]:
    """Decoded state after each prefix of ``y``, starting with the initial state."""
    ids = {s: i for i, s in enumerate(net.alphabet)}
    try:
        syms = [ids[s] for s in y]
    except KeyError as exc:
        raise UnknownSymbolError(exc.args[0]) from None
    x = net.x0
    traj = [net.code.decode_data(x[: net.n_data])]
    for sym in syms:
        x = net_step(net, x, sym)
        traj.append(net.code.decode_data(x[: net.n_data]))
    return traj
