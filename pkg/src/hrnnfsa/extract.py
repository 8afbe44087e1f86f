"""Read a deterministic PFSA back out of a Heaviside RNN LM.

Every hidden vector reachable from ``h0`` becomes one state.  States are
numbered in breadth-first discovery order with symbols tried in alphabet
order, so the output is a deterministic function of the network.
"""

from __future__ import annotations

from collections import deque

from .errors import BudgetExceededError, InvalidArgumentError
from .hrnn import HrnnLm, next_dist, step
from .wfsa import Transition, Wfsa

DEFAULT_MAX_STATES = 2**20


def extract_dpfsa(lm: HrnnLm, max_states: int = DEFAULT_MAX_STATES) -> Wfsa:
    if max_states < 1:
        raise InvalidArgumentError("max_states must be at least 1")
    index = {lm.h0.tobytes(): 0}
    hidden = [lm.h0]
    rho: list[float] = []
    transitions: list[Transition] = []
    queue = deque([0])
    while queue:
        q = queue.popleft()
        h = hidden[q]
        dist = next_dist(lm, h)
        rho.append(float(dist[lm.eos]))
        for y in range(len(lm.alphabet)):
            w = float(dist[y])
            if w == 0.0:
                continue
            h2 = step(lm, h, y)
            key = h2.tobytes()
            if key not in index:
                if len(hidden) >= max_states:
                    raise BudgetExceededError(
                        f"more than {max_states} reachable hidden states"
                    )
                index[key] = len(hidden)
                hidden.append(h2)
                queue.append(index[key])
            transitions.append(Transition(q, y, w, index[key]))
    n = len(hidden)
    lam = (1.0,) + (0.0,) * (n - 1)
    return Wfsa(lm.alphabet, n, tuple(transitions), lam, tuple(rho))

