"""Heaviside Elman RNN language models.

The recurrence is ``h' = H(U h + V r(y) + b)`` with the strict step function
``H(x) = 1{x > 0}``; hidden states therefore live in {0,1}^D.  The next-symbol
distribution is a projection of ``E h`` onto the simplex over Σ ∪ {EOS}, where
EOS is the last row of ``E``.

All vector functions accept either one vector or a batch stacked along the
first axis.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (
    DegenerateDistributionError,
    InvalidArgumentError,
    ShapeError,
    UnknownSymbolError,
)

PROJECTIONS = ("softmax", "sparsemax")

# Pre-activations this close to zero count as zero before thresholding.
DRIFT = 1e-9


def heaviside(x: np.ndarray) -> np.ndarray:
    return (np.asarray(x) > DRIFT).astype(np.float64)


@dataclass(frozen=True, eq=False)
class HrnnLm:
    alphabet: tuple[str, ...]
    U: np.ndarray
    V: np.ndarray
    b: np.ndarray
    h0: np.ndarray
    E: np.ndarray
    projection: str = "softmax"
    # R x |Σ| matrix whose columns are the symbol embeddings; one-hot when None
    embed: np.ndarray | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        for name in ("U", "V", "b", "h0", "E"):
            object.__setattr__(self, name, np.array(getattr(self, name), dtype=np.float64))
        if self.embed is None:
            object.__setattr__(self, "embed", np.eye(len(self.alphabet)))
        else:
            object.__setattr__(self, "embed", np.array(self.embed, dtype=np.float64))
        D, n = self.D, len(self.alphabet)
        R = self.embed.shape[0]
        expect = {"U": (D, D), "V": (D, R), "b": (D,), "h0": (D,), "E": (n + 1, D), "embed": (R, n)}
        for name, shape in expect.items():
            if getattr(self, name).shape != shape:
                raise ShapeError(f"{name} has shape {getattr(self, name).shape}, expected {shape}")
        if self.projection not in PROJECTIONS:
            raise InvalidArgumentError(f"unknown projection {self.projection!r}")
        if not np.isin(self.h0, (0.0, 1.0)).all():
            raise InvalidArgumentError("h0 must be a 0/1 vector")
        for name in ("U", "V", "b", "embed"):
            if not np.isfinite(getattr(self, name)).all():
                raise InvalidArgumentError(f"{name} must be finite")
        if np.isnan(self.E).any() or np.isposinf(self.E).any():
            raise InvalidArgumentError("E may hold finite values and -inf only")
        if self.projection == "sparsemax" and not np.isfinite(self.E).all():
            raise InvalidArgumentError("sparsemax needs a finite E")

    @property
    def D(self) -> int:
        return self.U.shape[0]

    @property
    def eos(self) -> int:
        return len(self.alphabet)

    @cached_property
    def symbol_ids(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.alphabet)}

    def encode(self, y: Iterable[str]) -> tuple[int, ...]:
        try:
            return tuple(self.symbol_ids[s] for s in y)
        except KeyError as exc:
            raise UnknownSymbolError(exc.args[0]) from None

    @cached_property
    def _E_parts(self) -> tuple[np.ndarray, np.ndarray]:
        neg = np.isneginf(self.E)
        return np.where(neg, 0.0, self.E), neg.astype(np.float64)


def step(lm: HrnnLm, h: np.ndarray, y: int) -> np.ndarray:
    h = np.asarray(h, dtype=np.float64)
    if h.shape[-1] != lm.D:
        raise ShapeError(f"hidden state has width {h.shape[-1]}, network has D={lm.D}")
    return heaviside(h @ lm.U.T + lm.V @ lm.embed[:, y] + lm.b)


def softmax_ext(x: np.ndarray) -> np.ndarray:
    """Softmax over the extended reals: -inf scores get probability exactly 0."""
    x = np.asarray(x, dtype=np.float64)
    if np.isnan(x).any() or np.isposinf(x).any():
        raise InvalidArgumentError("softmax_ext accepts finite values and -inf only")
    top = x.max(axis=-1, keepdims=True)
    if np.isneginf(top).any():
        raise DegenerateDistributionError("every score is -inf")
    z = np.exp(x - top)
    return z / z.sum(axis=-1, keepdims=True)


def sparsemax(x: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex by sort-and-threshold.

    Sorting is stable and descending, so tied values keep ascending index order.
    """
    x = np.asarray(x, dtype=np.float64)
    if not np.isfinite(x).all():
        raise InvalidArgumentError("sparsemax needs finite scores")
    flat = x.reshape(-1, x.shape[-1])
    order = np.argsort(-flat, axis=-1, kind="stable")
    u = np.take_along_axis(flat, order, axis=-1)
    k = np.arange(1, flat.shape[-1] + 1)
    css = np.cumsum(u, axis=-1) - 1.0
    support = (u - css / k) > 0
    n_sup = support.sum(axis=-1)
    theta = css[np.arange(len(flat)), n_sup - 1] / n_sup
    return np.maximum(flat - theta[:, None], 0.0).reshape(x.shape)


def project(lm: HrnnLm, scores: np.ndarray) -> np.ndarray:
    return softmax_ext(scores) if lm.projection == "softmax" else sparsemax(scores)


def output_scores(lm: HrnnLm, h: np.ndarray) -> np.ndarray:
    """``E h`` with -inf · 0 taken as 0, which is what a 0/1 mask means."""
    h = np.asarray(h, dtype=np.float64)
    if h.shape[-1] != lm.D:
        raise ShapeError(f"hidden state has width {h.shape[-1]}, network has D={lm.D}")
    finite, neg = lm._E_parts
    scores = h @ finite.T
    return np.where(h @ neg.T > 0, -np.inf, scores)


def next_dist(lm: HrnnLm, h: np.ndarray) -> np.ndarray:
    return project(lm, output_scores(lm, h))


def score_string(lm: HrnnLm, y: Sequence[str]) -> float:
    """Π_t p(y_t | h_{t-1}) · p(EOS | h_T); stops at the first zero factor."""
    h = lm.h0
    p = 1.0
    for sym in lm.encode(y):
        factor = float(next_dist(lm, h)[sym])
        if factor == 0.0:
            return 0.0
        p *= factor
        h = step(lm, h, sym)
    return p * float(next_dist(lm, h)[lm.eos])
