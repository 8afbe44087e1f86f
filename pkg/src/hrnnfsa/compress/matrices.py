"""Binary matrix decompositions behind the compressed encodings.

Matrices are square 0/1 numpy arrays (``uint8``).  A *line matrix* is a row
matrix, a column matrix, or a transversal (at most one 1 per row and column).
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np


def as_bin(B) -> np.ndarray:
    return (np.asarray(B) != 0).astype(np.uint8)


def or_all(mats, shape) -> np.ndarray:
    out = np.zeros(shape, dtype=np.uint8)
    for M in mats:
        out |= as_bin(M)
    return out


def max_matching(B: np.ndarray) -> list[int]:
    """Maximum bipartite matching of rows to columns by augmenting paths.

    Rows are processed in ascending order and each row tries its columns in
    ascending order.  Returns ``match_row`` with ``-1`` for unmatched rows.
    """
    B = as_bin(B)
    n_rows, n_cols = B.shape
    adj = [np.flatnonzero(B[i]).tolist() for i in range(n_rows)]
    match_col = [-1] * n_cols

    def augment(i: int, seen: list[bool]) -> bool:
        for j in adj[i]:
            if seen[j]:
                continue
            seen[j] = True
            if match_col[j] == -1 or augment(match_col[j], seen):
                match_col[j] = i
                return True
        return False

    for i in range(n_rows):
        augment(i, [False] * n_cols)
    match_row = [-1] * n_rows
    for j, i in enumerate(match_col):
        if i != -1:
            match_row[i] = j
    return match_row


def max_transversal(B: np.ndarray) -> np.ndarray:
    B = as_bin(B)
    T = np.zeros_like(B)
    for i, j in enumerate(max_matching(B)):
        if j != -1:
            T[i, j] = 1
    return T


def koenig_cover(B: np.ndarray, match_row: list[int]) -> tuple[list[int], list[int]]:
    """Minimum set of rows and columns touching every 1 of ``B``.

    ``match_row`` must be a maximum matching.  Vertices reachable from the
    unmatched rows along alternating paths form Z; the cover is the rows
    outside Z plus the columns inside Z.
    """
    B = as_bin(B)
    n_rows, n_cols = B.shape
    match_col = [-1] * n_cols
    for i, j in enumerate(match_row):
        if j != -1:
            match_col[j] = i
    row_seen = [False] * n_rows
    col_seen = [False] * n_cols
    queue = deque()
    for i in range(n_rows):
        if match_row[i] == -1:
            row_seen[i] = True
            queue.append(i)
    while queue:
        i = queue.popleft()
        for j in np.flatnonzero(B[i]):
            if col_seen[j] or match_row[i] == j:
                continue
            col_seen[j] = True
            k = match_col[j]
            if k != -1 and not row_seen[k]:
                row_seen[k] = True
                queue.append(k)
    rows = [i for i in range(n_rows) if not row_seen[i] and B[i].any()]
    cols = [j for j in range(n_cols) if col_seen[j]]
    return rows, cols


def cover_bound(B: np.ndarray) -> int:
    """2⌈√(number of ones)⌉, the guaranteed size limit of :func:`line_cover`."""
    ones = int(as_bin(B).sum())
    return 2 * (math.isqrt(ones - 1) + 1) if ones else 0


def line_cover(B: np.ndarray) -> list[np.ndarray]:
    """Cover ``B`` by at most 2⌈√ones⌉ line matrices whose OR is ``B``.

    Maximum transversals are peeled off while they are large.  Once the i-th
    one has at most 2N - i ones, the residue is covered by the rows and
    columns of a König vertex cover instead, which costs exactly that many
    lines.
    """
    B = as_bin(B)
    ones = int(B.sum())
    if ones == 0:
        return []
    N = math.isqrt(ones - 1) + 1
    lines: list[np.ndarray] = []
    residue = B.copy()
    i = 1
    while residue.any():
        match = max_matching(residue)
        size = sum(j != -1 for j in match)
        if size <= 2 * N - i:
            rows, cols = koenig_cover(residue, match)
            for r in rows:
                M = np.zeros_like(B)
                M[r] = residue[r]
                lines.append(M)
            for c in cols:
                M = np.zeros_like(B)
                M[:, c] = residue[:, c]
                M[rows, c] = 0
                if M.any():
                    lines.append(M)
            break
        T = np.zeros_like(B)
        for r, c in enumerate(match):
            if c != -1:
                T[r, c] = 1
        lines.append(T)
        residue &= 1 - T
        i += 1
    return lines


def line_kind(M: np.ndarray) -> str:
    """'row', 'column' or 'transversal'; raises ValueError for anything else.

    A matrix with a single 1 counts as a row matrix and the zero matrix as an
    (empty) transversal.
    """
    M = as_bin(M)
    rows = np.flatnonzero(M.any(axis=1))
    cols = np.flatnonzero(M.any(axis=0))
    if len(rows) == 1:
        return "row"
    if len(cols) == 1:
        return "column"
    if (M.sum(axis=0) <= 1).all() and (M.sum(axis=1) <= 1).all():
        return "transversal"
    raise ValueError("not a line matrix")


def column_function(M: np.ndarray) -> dict[int, int]:
    """The partial map column -> row of a matrix with at most one 1 per column."""
    M = as_bin(M)
    if (M.sum(axis=0) > 1).any():
        raise ValueError("a column holds more than one 1")
    return {int(j): int(np.flatnonzero(M[:, j])[0]) for j in np.flatnonzero(M.any(axis=0))}


def is_nondecreasing(M: np.ndarray) -> bool:
    """At most one 1 per column and the row index never drops left to right."""
    try:
        f = column_function(M)
    except ValueError:
        return False
    rows = [f[j] for j in sorted(f)]
    return all(a <= b for a, b in zip(rows, rows[1:]))


def nondecreasing_cover(B: np.ndarray) -> list[np.ndarray]:
    """Greedy cover of ``B`` by non-decreasing matrices.

    Columns are scanned left to right and each 1 (top to bottom) joins the
    first layer it keeps non-decreasing; otherwise it opens a new layer.
    """
    B = as_bin(B)
    layers: list[dict[int, int]] = []
    for j in range(B.shape[1]):
        for i in np.flatnonzero(B[:, j]):
            for f in layers:
                if j not in f and (not f or f[max(f)] <= i):
                    f[j] = int(i)
                    break
            else:
                layers.append({j: int(i)})
    out = []
    for f in layers:
        M = np.zeros_like(B)
        for j, i in f.items():
            M[i, j] = 1
        out.append(M)
    return out
