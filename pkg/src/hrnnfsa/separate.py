"""Make a deterministic FSA log|Σ|-separable.

The new states remember the symbol that led into them, so two transitions
between the same ordered pair of states can never carry different symbols.
"""

from __future__ import annotations

from collections import deque

from .errors import PreconditionError
from .wfsa import Wfsa, is_deterministic, is_unweighted, unweighted


def separate(a: Wfsa) -> Wfsa:
    """Equivalent FSA over states (q, y) plus a fresh start state.

    State 0 of the result is the fresh start; product states are numbered in
    breadth-first order of discovery, and unreachable ones are dropped.
    """
    if not is_deterministic(a):
        raise PreconditionError("separate needs a deterministic FSA")
    if not is_unweighted(a):
        raise PreconditionError("separate works on unweighted FSAs only")
    (q0,) = a.initial_states
    finals = set(a.final_states)
    index: dict[tuple[int, int], int] = {}
    edges: list[tuple[int, str, int]] = []
    queue: deque[tuple[int, int]] = deque()

    def visit(pair: tuple[int, int]) -> int:
        if pair not in index:
            index[pair] = len(index) + 1
            queue.append(pair)
        return index[pair]

    # a product state (q, y) moves exactly like q, so the fresh start moves like q0
    for y in range(len(a.alphabet)):
        if (q0, y) in a.delta:
            edges.append((0, a.alphabet[y], visit((a.delta[q0, y], y))))
    while queue:
        q, y_in = queue.popleft()
        src = index[q, y_in]
        for y in range(len(a.alphabet)):
            if (q, y) in a.delta:
                edges.append((src, a.alphabet[y], visit((a.delta[q, y], y))))
    new_finals = [i for (q, _), i in index.items() if q in finals]
    if q0 in finals:
        new_finals.append(0)
    return unweighted(a.alphabet, len(index) + 1, edges, 0, sorted(new_finals))
