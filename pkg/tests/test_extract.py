import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import all_strings

from hrnnfsa.errors import BudgetExceededError, InvalidArgumentError
from hrnnfsa.extract import extract_dpfsa
from hrnnfsa.hrnn import HrnnLm, score_string
from hrnnfsa.minsky import build_minsky
from hrnnfsa.verify import brute_equiv
from hrnnfsa.wfsa import gen_random_dpfsa, is_deterministic, is_probabilistic, stringsum


def test_round_trip_of_example_fslm(fx):
    a = fx["example_fslm"]
    b = extract_dpfsa(build_minsky(a))
    assert brute_equiv(a, b, 8, 1e-9)
    assert b.n_states <= len(a.alphabet) * a.n_states


def test_constant_recurrence_has_one_state():
    # h stays at h0 = 0, so E h = 0 and every step sees the uniform distribution
    E = np.array([[1.0], [0.0], [2.0]])
    lm = HrnnLm("ab", np.zeros((1, 1)), np.zeros((1, 2)), np.zeros(1), np.zeros(1), E)
    a = extract_dpfsa(lm)
    assert a.n_states == 1
    assert sorted((t.src, t.sym, t.dst) for t in a.transitions) == [(0, 0, 0), (0, 1, 0)]
    assert [t.weight for t in a.transitions] == pytest.approx([1 / 3, 1 / 3], abs=1e-15)
    assert a.rho[0] == pytest.approx(1 / 3, abs=1e-15)


def test_zero_probability_arcs_are_pruned(fx):
    a = extract_dpfsa(build_minsky(fx["example_fslm"]))
    assert all(t.weight > 0 for t in a.transitions)
    # reachable pairs: (0,a) (1,a) (2,b) (2,a) (1,b), with 2+2+1+1+2 live arcs
    assert a.n_states == 5
    assert len(a.transitions) == 8


def test_budget():
    # a 3-bit counter: every step shifts a fresh 1 in, so 4 hidden vectors are reachable
    U = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0]], dtype=float)
    V = np.array([[1.0], [0.0], [0.0]])
    lm = HrnnLm("a", U, V, np.zeros(3) - 0.5, np.zeros(3), np.zeros((2, 3)))
    assert extract_dpfsa(lm).n_states == 4
    with pytest.raises(BudgetExceededError):
        extract_dpfsa(lm, max_states=3)
    with pytest.raises(InvalidArgumentError):
        extract_dpfsa(lm, max_states=0)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(1, 5), k=st.integers(1, 3),
       projection=st.sampled_from(["softmax", "sparsemax"]))
def test_extracted_automaton_scores_like_the_network(seed, n, k, projection):
    lm = build_minsky(gen_random_dpfsa(seed, n, k), projection)
    a = extract_dpfsa(lm)
    assert is_deterministic(a) and is_probabilistic(a)
    assert a.n_states <= n * k
    for y in all_strings(lm.alphabet, 4):
        assert stringsum(a, y) == pytest.approx(score_string(lm, y), abs=1e-9)


def test_arbitrary_network_round_trip():
    rng = np.random.default_rng(5)
    D = 4
    lm = HrnnLm(
        "ab",
        rng.integers(-1, 2, (D, D)).astype(float),
        rng.integers(-1, 2, (D, 2)).astype(float),
        rng.integers(-1, 1, D).astype(float),
        np.array([1.0, 0.0, 1.0, 0.0]),
        rng.normal(size=(3, D)),
    )
    a = extract_dpfsa(lm)
    assert a.n_states <= 2**D
    assert brute_equiv(lm, a, 8, 1e-9)
