"""State codes used by the threshold nets.

Each code lays its data cells out per symbol: the cells after reading ``y``
hold the code of the new state in block ``y`` and zeros everywhere else.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import InvalidArgumentError, SimulationCorruptError


def ceil_root(n: int, k: int) -> int:
    """Smallest integer r >= 1 with r**k >= n."""
    r = max(1, round(n ** (1.0 / k)))
    while r**k < n:
        r += 1
    while r > 1 and (r - 1) ** k >= n:
        r -= 1
    return r


@dataclass(frozen=True)
class PairCode:
    """One-hot code of (state, last symbol) at index q·|Σ| + y."""

    n_states: int
    n_symbols: int

    def data_size(self) -> int:
        return self.n_states * self.n_symbols

    def data_index(self, q: int, y: int) -> int:
        return q * self.n_symbols + y

    def encode_data(self, q: int, y: int) -> np.ndarray:
        x = np.zeros(self.data_size())
        x[self.data_index(q, y)] = 1.0
        return x

    def decode_data(self, x: np.ndarray) -> int:
        on = np.flatnonzero(x)
        if len(on) != 1:
            raise SimulationCorruptError(f"expected one active data cell, found {len(on)}")
        return int(on[0]) // self.n_symbols


@dataclass(frozen=True)
class _MultiHot:
    """Shared layout: cell (y, component, value) sits at y·c·base + component·base + value."""

    n_states: int
    n_symbols: int

    n_components = 0

    @property
    def base(self) -> int:
        raise NotImplementedError

    def data_size(self) -> int:
        return self.n_symbols * self.n_components * self.base

    def data_index(self, y: int, component: int, value: int) -> int:
        return (y * self.n_components + component) * self.base + value

    def encode_data(self, q: int, y: int) -> np.ndarray:
        x = np.zeros(self.data_size())
        for c, v in enumerate(self.components(q)):
            x[self.data_index(y, c, v)] = 1.0
        return x

    def decode_data(self, x: np.ndarray) -> int:
        blocks = np.asarray(x).reshape(self.n_symbols, self.n_components, self.base)
        active = np.flatnonzero(blocks.any(axis=(1, 2)))
        if len(active) != 1:
            raise SimulationCorruptError(f"expected one active symbol block, found {len(active)}")
        block = blocks[active[0]]
        if not (block.sum(axis=1) == 1).all():
            raise SimulationCorruptError(f"block is not {self.n_components}-hot: {block.tolist()}")
        q = self.decode_components(tuple(int(np.flatnonzero(row)[0]) for row in block))
        if q is None:
            raise SimulationCorruptError(f"code {block.tolist()} names no state")
        return q

    def components(self, q: int) -> tuple[int, ...]:
        raise NotImplementedError

    def decode_components(self, comps: tuple[int, ...]) -> int | None:
        raise NotImplementedError


@dataclass(frozen=True)
class TwoHotCode(_MultiHot):
    """q -> (⌊q/s⌋, q mod s) with s = ⌈√|Q|⌉; the pair is also q's matrix cell."""

    n_components = 2

    @property
    def s(self) -> int:
        return ceil_root(self.n_states, 2)

    @property
    def base(self) -> int:
        return self.s

    @property
    def side(self) -> int:
        return self.s

    def components(self, q: int) -> tuple[int, int]:
        return divmod(q, self.s)

    def cell(self, q: int) -> tuple[int, int]:
        return divmod(q, self.s)

    def decode_components(self, comps):
        q = comps[0] * self.s + comps[1]
        return q if q < self.n_states else None


@dataclass(frozen=True)
class FourHotCode(_MultiHot):
    """Digits of ρ(q) in base r = ⌈|Q|^(1/4)⌉, least significant first.

    The matrix cell of q is (ρ(q) div r², ρ(q) mod r²), i.e. the two-hot code
    obtained by pairing digits 3,4 and digits 1,2.
    """

    permutation: tuple[int, ...] = ()
    n_components = 4

    def __post_init__(self):
        perm = tuple(int(v) for v in (self.permutation or range(self.n_states)))
        if sorted(perm) != list(range(self.n_states)):
            raise InvalidArgumentError("permutation must be a bijection on the states")
        object.__setattr__(self, "permutation", perm)

    @property
    def r(self) -> int:
        return ceil_root(self.n_states, 4)

    @property
    def base(self) -> int:
        return self.r

    @property
    def side(self) -> int:
        return self.r * self.r

    @cached_property
    def inverse(self) -> dict[int, int]:
        return {v: q for q, v in enumerate(self.permutation)}

    def components(self, q: int) -> tuple[int, int, int, int]:
        v, r = self.permutation[q], self.r
        return tuple((v // r**j) % r for j in range(4))

    def cell(self, q: int) -> tuple[int, int]:
        return divmod(self.permutation[q], self.side)

    def decode_components(self, comps):
        v = sum(c * self.r**j for j, c in enumerate(comps))
        return self.inverse.get(v)
