import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import all_strings

from hrnnfsa.errors import PreconditionError
from hrnnfsa.separate import separate
from hrnnfsa.wfsa import accepts, gen_random_fsa, is_deterministic, is_log_separable, unweighted


def test_single_final_state_without_transitions():
    a = unweighted("ab", 1, [], 0, [0])
    b = separate(a)
    assert b.n_states == 1
    assert accepts(b, "")
    assert not any(accepts(b, y) for y in all_strings("ab", 3) if y)


def test_parallel_arcs_get_split():
    a = unweighted("ab", 2, [(0, "a", 1), (0, "b", 1)], 0, [1])
    assert not is_log_separable(a)
    b = separate(a)
    assert is_log_separable(b)
    assert b.n_states == 3
    assert accepts(b, "a") and accepts(b, "b") and not accepts(b, "")


def test_transition_correspondence():
    a = gen_random_fsa(12, 5, 3)
    b = separate(a)
    # recover the (q, y) label of every new state from the arcs entering it
    label = {0: (0, None)}
    frontier = [0]
    while frontier:
        src = frontier.pop()
        q = label[src][0]
        for t in b.transitions:
            if t.src == src and t.dst not in label:
                label[t.dst] = (a.delta[q, t.sym], t.sym)
                frontier.append(t.dst)
    assert len(label) == b.n_states
    assert len(set(label.values())) == b.n_states
    for t in b.transitions:
        q, _ = label[t.src]
        assert label[t.dst] == (a.delta[q, t.sym], t.sym)
    for src, (q, _) in label.items():
        assert sorted(t.sym for t in b.transitions if t.src == src) == [
            y for y in range(3) if (q, y) in a.delta
        ]


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(1, 10), k=st.integers(1, 3))
def test_separation_preserves_the_language(seed, n, k):
    a = gen_random_fsa(seed, n, k)
    b = separate(a)
    assert is_log_separable(b)
    assert b.n_states <= n * k + 1
    for y in all_strings(a.alphabet, 6):
        assert accepts(a, y) == accepts(b, y)


def test_incomplete_input():
    a = unweighted("abc", 3, [(0, "a", 1), (1, "c", 2), (2, "c", 2)], 0, [2])
    b = separate(a)
    assert is_deterministic(b) and is_log_separable(b)
    for y in itertools.chain.from_iterable(itertools.product("abc", repeat=n) for n in range(6)):
        assert accepts(a, y) == accepts(b, y)


def test_preconditions(fx):
    with pytest.raises(PreconditionError):
        separate(fx["example_fslm"])
    nondet = unweighted("a", 2, [(0, "a", 0), (0, "a", 1)], 0, [1])
    with pytest.raises(PreconditionError):
        separate(nondet)
