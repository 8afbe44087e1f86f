"""The eleven acceptance criteria, one test each.

Every test records a PASS/FAIL line (shown in the terminal summary of any
pytest run, and printed directly with ``-s``) before asserting, so a failing
criterion still reports its measured numbers.
"""

import itertools
import time
from contextlib import contextmanager
from functools import cache

import numpy as np
import pytest
from conftest import VERDICTS
from corpus import random_dfas, random_dpfsas
from oracles import dfa_run, grid_qp, polish

from hrnnfsa.compress import build_dewdney, build_indyk, cover_bound, or_all, response, simulate_net
from hrnnfsa.extract import extract_dpfsa
from hrnnfsa.hrnn import score_string, sparsemax
from hrnnfsa.minsky import build_minsky
from hrnnfsa.separate import separate
from hrnnfsa.verify import brute_equiv, mass_report
from hrnnfsa.wfsa import fixtures, gen_a_n, is_deterministic, is_log_separable, is_probabilistic, stringsum

PROJECTIONS = ("softmax", "sparsemax")


@contextmanager
def stopwatch():
    t = {"start": time.perf_counter()}
    yield t
    t["elapsed"] = time.perf_counter() - t["start"]


def verdict(n, ok, detail, elapsed=None, limit=None):
    timing = "" if elapsed is None else f" [{elapsed:.2f}s, limit {limit:g}s]"
    in_time = limit is None or elapsed < limit
    line = f"criterion {n}: {'PASS' if ok and in_time else 'FAIL'} - {detail}{timing}"
    VERDICTS.append(line)
    print(line)
    assert ok, line
    assert in_time, line


def test_criterion_1_worked_example():
    a = fixtures()["minsky_example"]
    with stopwatch() as t:
        got = {p: score_string(build_minsky(a, p), ["b"]) for p in PROJECTIONS}
    err = max(abs(v - 0.45) for v in got.values())
    verdict(1, err <= 1e-12, f"p(b) = {got['softmax']!r} (softmax), {got['sparsemax']!r} (sparsemax)",
            t["elapsed"], 1)


def test_criterion_2_closed_form_family():
    a = fixtures()["example_fslm"]
    with stopwatch() as t:
        lm = build_minsky(a)
        worst = 0.0
        for n, m in itertools.product(range(6), repeat=2):
            y = ["a"] + ["b"] * n + ["a"] + ["b"] * m
            want = 0.6 * 0.1**n * 0.9 * 0.7**m * 0.3
            worst = max(worst, abs(stringsum(a, y) - want), abs(score_string(lm, y) - want))
    verdict(2, worst <= 1e-12, f"36 strings, max error {worst:.3g}", t["elapsed"], 1)


def test_criterion_3_weak_equivalence_at_scale():
    with stopwatch() as t:
        reports = [brute_equiv(a, build_minsky(a, p), 8, 1e-9)
                   for a in random_dpfsas() for p in PROJECTIONS]
    failed = sum(not r for r in reports)
    worst = max(r.max_abs_diff for r in reports)
    verdict(3, failed == 0, f"{len(reports)} comparisons, {failed} failed, max diff {worst:.3g}",
            t["elapsed"], 120)


def test_criterion_4_round_trip():
    with stopwatch() as t:
        reports = [brute_equiv(a, extract_dpfsa(build_minsky(a, p)), 8, 1e-9)
                   for a in random_dpfsas() for p in PROJECTIONS]
    failed = sum(not r for r in reports)
    worst = max(r.max_abs_diff for r in reports)
    verdict(4, failed == 0, f"{len(reports)} round trips, {failed} failed, max diff {worst:.3g}",
            t["elapsed"], 120)


def test_criterion_5_non_determinizable_fixture():
    a = fixtures()["nondet_pfsa"]
    worst = max(
        abs(stringsum(a, ["a"] + ["b"] * n + ["c"]) - (0.5 * 0.9**n * 0.1 + 0.5 * 0.1**n * 0.9))
        for n in range(11)
    )
    det = is_deterministic(a)
    verdict(5, worst <= 1e-12 and not det, f"max error {worst:.3g}, is_deterministic = {det}")


@cache
def compressed():
    """Dewdney and Indyk nets for every automaton of the DFA corpus."""
    return tuple((a, build_dewdney(a), build_indyk(a)) for a in random_dfas())


def test_criterion_6_compressed_constructions():
    with stopwatch() as t:
        checked = mismatched = 0
        for a, *nets in compressed():
            for n in range(7):
                for y in itertools.product(a.alphabet, repeat=n):
                    want = dfa_run(a, y)
                    for net in nets:
                        checked += 1
                        mismatched += simulate_net(net, y) != want
    verdict(6, mismatched == 0, f"{checked} trajectories over 20 automata, {mismatched} mismatches",
            t["elapsed"], 180)


def test_criterion_7_cover_size():
    too_big = not_exact = total = 0
    for _, dewdney, indyk in compressed():
        for part in dewdney.parts:
            total += 1
            too_big += len(part.cover) > cover_bound(part.matrix)
            not_exact += not np.array_equal(or_all(part.cover, part.matrix.shape), part.matrix)
        for part in indyk.parts:
            total += 1
            not_exact += not np.array_equal(or_all(part.cover, part.matrix.shape), part.matrix)
    verdict(7, too_big == 0 and not_exact == 0,
            f"{total} covers, {too_big} over the bound, {not_exact} not reconstructing")


def test_criterion_8_detector_exactness():
    detectors = mismatches = 0
    for _, *nets in compressed():
        for net in nets:
            for part in net.parts:
                for M, det in zip(part.cover, part.detectors):
                    detectors += 1
                    mismatches += int((response(det, len(M)) != M).sum())
    verdict(8, detectors > 0 and mismatches == 0,
            f"{detectors} detectors checked on all pair inputs, {mismatches} mismatched cells")


def test_criterion_9_separation():
    problems = []
    for k, a in enumerate(random_dfas()):
        b = separate(a)
        if not is_log_separable(b):
            problems.append(f"#{k} not separable")
        if b.n_states > a.n_states * len(a.alphabet) + 1:
            problems.append(f"#{k} has {b.n_states} states")
        r = brute_equiv(a, b, 8, 0.0)
        if not r:
            problems.append(f"#{k} differs on {' '.join(r.worst_string)!r}")
    verdict(9, not problems, "; ".join(problems) or "20 automata separable, small and equivalent up to length 8")


def test_criterion_10_sparsemax():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for k in range(200):
        z = rng.uniform(-2, 2, size=2 + k % 2)
        worst = max(worst, float(np.abs(sparsemax(z) - polish(z, grid_qp(z, 1e-4), 1e-4)).max()))
    worst_id = 0.0
    for k in range(100):
        p = rng.dirichlet(np.ones(2 + k % 4))
        worst_id = max(worst_id, float(np.abs(sparsemax(p) - p).max()))
    verdict(10, worst <= 1e-6 and worst_id <= 1e-15,
            f"grid-QP max error {worst:.3g}, simplex identity max error {worst_id:.3g}")


def test_criterion_11_normalization():
    models = dict(fixtures())
    models.update({f"A_{n}": gen_a_n(n) for n in (2, 3, 5)})
    models.update({f"{name}/compiled": build_minsky(a) for name, a in fixtures().items()
                   if is_deterministic(a)})
    assert all(is_probabilistic(a) for a in models.values() if not hasattr(a, "U"))
    worst = max(max(mass_report(m, 12).cumulative) for m in models.values())
    verdict(11, worst <= 1 + 1e-9, f"{len(models)} models, largest cumulative mass {worst!r}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
