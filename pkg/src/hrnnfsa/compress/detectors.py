"""Threshold detectors for binary matrices.

A detector reads a *pair input* ``(e_i | e_j)`` of length 2D, the two-hot
vector of a cell (i, j), and should fire exactly on the 1-cells of its
matrix.  Every detector here is a conjunction of one or two neurons.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgumentError
from .matrices import as_bin, column_function, is_nondecreasing, line_kind


@dataclass(frozen=True, eq=False)
class Neuron:
    w: np.ndarray
    b: float

    def fires(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x) @ self.w + self.b > 0


@dataclass(frozen=True, eq=False)
class Detector:
    kind: str
    neurons: tuple[Neuron, ...]

    def fires(self, x: np.ndarray) -> np.ndarray:
        out = self.neurons[0].fires(x)
        for n in self.neurons[1:]:
            out = out & n.fires(x)
        return out


def pair_input(i: int, j: int, D: int) -> np.ndarray:
    x = np.zeros(2 * D)
    x[i] = 1.0
    x[D + j] = 1.0
    return x


def all_pair_inputs(D: int) -> np.ndarray:
    """Every pair input, row-major in (i, j)."""
    eye = np.eye(D)
    return np.hstack([np.repeat(eye, D, axis=0), np.tile(eye, (D, 1))])


def response(det: Detector | Neuron, D: int) -> np.ndarray:
    """The D x D 0/1 matrix of cells on which ``det`` fires."""
    return det.fires(all_pair_inputs(D)).reshape(D, D).astype(np.uint8)


def northwestern(alpha) -> Neuron:
    """Neuron for the matrix whose row i holds ones in its first alpha[i] columns.

    ``alpha`` must be non-increasing.  Weights are (alpha | D, D-1, ..., 1)
    with bias -D, so cell (i, j) scores alpha[i] - j.
    """
    alpha = np.asarray(alpha, dtype=np.float64)
    D = len(alpha)
    if (np.diff(alpha) > 0).any() or alpha.min(initial=0) < 0 or alpha.max(initial=0) > D:
        raise InvalidArgumentError(f"{alpha} is not a northwestern staircase")
    return Neuron(np.concatenate([alpha, np.arange(D, 0, -1.0)]), -float(D))


def permuted_northwestern(alpha: dict[int, int], col_order: list[int], D: int) -> Neuron:
    """A northwestern neuron after permuting rows and columns.

    Row ``r`` gets staircase height ``alpha[r]`` (0 when absent); the columns in
    ``col_order`` take the leading positions in that order and the remaining
    columns follow.  Cell (r, c) fires iff position(c) < alpha[r].
    """
    leading = set(col_order)
    rest = [c for c in range(D) if c not in leading]
    position = {c: p for p, c in enumerate(list(col_order) + rest)}
    w = np.zeros(2 * D)
    for r, h in alpha.items():
        w[r] = h
    for c, p in position.items():
        w[D + c] = D - p
    return Neuron(w, -float(D))


def detect_line(M: np.ndarray) -> Detector:
    """One neuron for a row or column matrix, two neurons ANDed for a transversal."""
    M = as_bin(M)
    D = M.shape[0]
    try:
        kind = line_kind(M)
    except ValueError:
        raise InvalidArgumentError("detect_line needs a row, column or transversal matrix") from None
    if kind == "row":
        (r,) = np.flatnonzero(M.any(axis=1))
        cols = np.flatnonzero(M[r]).tolist()
        return Detector(kind, (permuted_northwestern({int(r): len(cols)}, cols, D),))
    if kind == "column":
        (c,) = np.flatnonzero(M.any(axis=0))
        return Detector(kind, (permuted_northwestern({int(r): 1 for r in np.flatnonzero(M[:, c])}, [int(c)], D),))
    rows, cols = np.nonzero(M)
    if len(rows) == 0:
        return Detector(kind, (Neuron(np.zeros(2 * D), 0.0),))
    m = len(rows)
    rows, cols = rows.tolist(), cols.tolist()
    # Lower triangle (l <= k) and upper triangle (l >= k) in transversal order;
    # their Hadamard product is the diagonal, i.e. the transversal itself.
    lower = permuted_northwestern({r: k + 1 for k, r in enumerate(rows)}, cols, D)
    upper = permuted_northwestern({r: m - k for k, r in enumerate(rows)}, cols[::-1], D)
    return Detector(kind, (lower, upper))


def equality_pair(w: np.ndarray, b: float) -> tuple[Neuron, Neuron]:
    """Two neurons that both fire iff the integer w·x + b equals 0.

    One tests w·x + b - 1 < 0, the other w·x + b + 1 > 0.
    """
    w = np.asarray(w, dtype=np.float64)
    return Neuron(-w, -b + 1.0), Neuron(w, b + 1.0)


def detect_nondecreasing(M: np.ndarray) -> Detector:
    """Equality detector for a non-decreasing matrix.

    With I(j) the index (from 1) of the constant run of f containing column
    j, row f(j) gets weight D - I(j), column j gets I(j), and the bias is -D.
    The sum hits exactly 0 on the 1-cells.
    """
    M = as_bin(M)
    if not is_nondecreasing(M):
        raise InvalidArgumentError("matrix is not non-decreasing")
    D = M.shape[0]
    f = column_function(M)
    runs = {row: k + 1 for k, row in enumerate(sorted(set(f.values())))}
    w = np.zeros(2 * D)
    for j, row in f.items():
        w[row] = D - runs[row]
        w[D + j] = runs[row]
    if not f:
        return Detector("nondecreasing", (Neuron(np.zeros(2 * D), 0.0),))
    return Detector("nondecreasing", equality_pair(w, -float(D)))
