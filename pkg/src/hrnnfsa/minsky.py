"""Compile a deterministic PFSA into a weakly equivalent Heaviside RNN LM.

The hidden state is a one-hot code of the pair (current state, last symbol),
laid out as ``n(q, y) = q·|Σ| + y``.  ``U`` marks which pairs can follow
which, ``V`` marks which pairs a symbol can produce, and the bias of -1 turns
each unit into the AND of the two.
"""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from .errors import InvalidArgumentError, PreconditionError
from .hrnn import HrnnLm
from .wfsa import Wfsa, is_deterministic, is_probabilistic


def pair_index(q: int, y: int, n_symbols: int) -> int:
    return q * n_symbols + y


def pair_of(index: int, n_symbols: int) -> tuple[int, int]:
    return divmod(index, n_symbols)


def and_neuron(indices: Iterable[int], width: int) -> tuple[np.ndarray, float]:
    """Weights and bias of a unit computing the AND of the chosen input bits."""
    idx = sorted(set(indices))
    if not idx:
        raise InvalidArgumentError("an AND neuron needs at least one input")
    if idx[0] < 0 or idx[-1] >= width:
        raise InvalidArgumentError(f"indices {idx} do not fit width {width}")
    v = np.zeros(width)
    v[idx] = 1.0
    return v, -(len(idx) - 1.0)


def build_minsky(a: Wfsa, projection: str = "softmax") -> HrnnLm:
    if not is_deterministic(a):
        raise PreconditionError("the Minsky construction needs a deterministic automaton")
    if not is_probabilistic(a, 1e-9):
        raise PreconditionError("the Minsky construction needs a probabilistic automaton")
    n_sym = len(a.alphabet)
    if n_sym == 0:
        raise PreconditionError("the Minsky construction needs a nonempty alphabet")
    D = n_sym * a.n_states
    U = np.zeros((D, D))
    V = np.zeros((D, n_sym))
    W = np.zeros((n_sym + 1, D))  # transition weights, column per pair
    for t in a.transitions:
        child = pair_index(t.dst, t.sym, n_sym)
        for y in range(n_sym):
            src = pair_index(t.src, y, n_sym)
            U[child, src] = 1.0
            W[t.sym, src] = t.weight
        V[child, t.sym] = 1.0
    for q in range(a.n_states):
        W[n_sym, q * n_sym:(q + 1) * n_sym] = a.rho[q]
    if projection == "softmax":
        with np.errstate(divide="ignore"):
            E = np.log(W)
    else:
        E = W
    (q0,) = a.initial_states
    h0 = np.zeros(D)
    h0[pair_index(q0, 0, n_sym)] = 1.0
    return HrnnLm(a.alphabet, U, V, -np.ones(D), h0, E, projection)


def decode_state(h: np.ndarray, n_symbols: int) -> tuple[int, int] | None:
    """The (state, symbol) pair of a one-hot hidden vector, None for anything else."""
    on = np.flatnonzero(h)
    if len(on) != 1:
        return None
    return pair_of(int(on[0]), n_symbols)
