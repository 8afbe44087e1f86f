from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import all_strings

from hrnnfsa.compress import build_dewdney
from hrnnfsa.errors import AlphabetMismatchError, InvalidArgumentError
from hrnnfsa.minsky import build_minsky
from hrnnfsa.verify import (
    FunctionScorer,
    as_scorer,
    brute_equiv,
    mass_report,
    stringsum_exact,
    to_exact,
)
from hrnnfsa.wfsa import Transition, Wfsa, gen_a_n, gen_random_dpfsa, gen_random_fsa, stringsum


def perturbed(a, eps):
    ts = list(a.transitions)
    t = ts[0]
    ts[0] = Transition(t.src, t.sym, t.weight + eps, t.dst)
    return Wfsa(a.alphabet, a.n_states, tuple(ts), a.lam, a.rho)


def test_self_equivalence_counts_every_string(fx):
    a = fx["example_fslm"]
    r = brute_equiv(a, a, 8)
    assert r.passed and bool(r)
    assert r.max_abs_diff == 0.0
    assert r.n_checked == 2**9 - 1


def test_perturbation_is_caught_and_located(fx):
    a = fx["example_fslm"]
    r = brute_equiv(a, perturbed(a, 1e-3), 8)
    assert not r.passed
    # only strings through the first arc (0 -a-> 1) change; "aa" is the earliest with the largest change
    assert r.worst_string == ("a", "a")
    assert r.max_abs_diff == pytest.approx(1e-3 * 0.9 * 0.3, rel=1e-9)


@settings(max_examples=20, deadline=None)
@given(s1=st.integers(0, 1000), s2=st.integers(0, 1000))
def test_equivalence_is_symmetric(s1, s2):
    a, b = gen_random_dpfsa(s1, 3, 2), gen_random_dpfsa(s2, 3, 2)
    ab, ba = brute_equiv(a, b, 5), brute_equiv(b, a, 5)
    assert ab.max_abs_diff == ba.max_abs_diff
    assert ab.worst_string == ba.worst_string


def test_level_scores_agree_with_single_string_scores(fx):
    a = fx["minsky_example"]
    lm = build_minsky(a)
    fn = FunctionScorer(a.alphabet, lambda y: stringsum(a, y))
    assert brute_equiv(lm, fn, 6, 1e-12)
    assert brute_equiv(a, fn, 6, 0.0)


def test_alphabet_order_is_irrelevant(fx):
    a = fx["example_fslm"]
    swapped = FunctionScorer(("b", "a"), lambda y: stringsum(a, y))
    assert brute_equiv(a, swapped, 6, 0.0)


def test_alphabet_mismatch(fx):
    with pytest.raises(AlphabetMismatchError):
        brute_equiv(fx["example_fslm"], fx["nondet_pfsa"], 3)


def test_argument_checks(fx):
    with pytest.raises(InvalidArgumentError):
        brute_equiv(fx["example_fslm"], fx["example_fslm"], -1)
    with pytest.raises(InvalidArgumentError):
        as_scorer(42)


def test_nan_counts_as_a_failure(fx):
    a = fx["example_fslm"]
    r = brute_equiv(a, FunctionScorer(a.alphabet, lambda y: float("nan")), 2)
    assert not r.passed and r.max_abs_diff == np.inf and r.worst_string == ()


def test_net_scorer_is_the_acceptor():
    a = gen_random_fsa(5, 7, 2)
    assert brute_equiv(a, build_dewdney(a), 8, 0.0)


def test_mass_of_the_nondeterministic_fixture(fx):
    r = mass_report(fx["nondet_pfsa"], 8)
    # a b^n c: 0.5·0.9^n·0.1 + 0.5·0.1^n·0.9, at length n + 2
    expect = [0.0, 0.0] + [0.5 * 0.9**n * 0.1 + 0.5 * 0.1**n * 0.9 for n in range(7)]
    assert r.per_length == pytest.approx(expect, abs=1e-15)
    assert r.cumulative[-1] == pytest.approx(sum(expect), abs=1e-15)


def test_mass_of_an_empty_alphabet():
    a = Wfsa((), 1, (), (1.0,), (1.0,))
    r = mass_report(a, 3)
    assert r.per_length == [1.0, 0.0, 0.0, 0.0]
    assert r.cumulative == [1.0, 1.0, 1.0, 1.0]


def test_exact_and_float_stringsums_agree(fx, fx_exact):
    for name, a in fx.items():
        for y in all_strings(a.alphabet, 5):
            exact = stringsum(fx_exact[name], y)
            assert isinstance(exact, Fraction)
            assert abs(float(stringsum(a, y)) - exact) <= 1e-12


def test_to_exact_is_exact_for_floats(fx):
    # 0.6 as a float is not 3/5; to_exact keeps the binary value
    e = to_exact(fx["example_fslm"])
    assert e.transitions[0].weight == Fraction(0.6) != Fraction(3, 5)
    assert stringsum_exact(fx["example_fslm"], "aa") == Fraction(0.6) * Fraction(0.9) * Fraction(0.3)


def test_mass_skips_dead_prefixes_without_changing_sums():
    # 7^12 strings would not fit in memory, but every branch dies after one symbol
    r = mass_report(gen_a_n(7), 12)
    assert r.per_length == pytest.approx([0.0, 1.0] + [0.0] * 11, abs=1e-15)


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 1000))
def test_pruned_mass_equals_full_enumeration(seed):
    a = gen_random_dpfsa(seed, 4, 2)
    full = FunctionScorer(a.alphabet, lambda y: stringsum(a, y))  # no live mask, nothing skipped
    for m in (a, build_minsky(a)):
        assert mass_report(m, 6).per_length == pytest.approx(mass_report(full, 6).per_length, abs=1e-12)
