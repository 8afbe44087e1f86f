"""Heaviside RNN language models and the finite-state automata they encode."""

from .extract import extract_dpfsa
from .hrnn import HrnnLm, next_dist, score_string, softmax_ext, sparsemax, step
from .minsky import and_neuron, build_minsky
from .separate import separate
from .verify import brute_equiv, mass_report, stringsum_exact
from .wfsa import (
    Transition,
    Wfsa,
    fixtures,
    gen_a_n,
    gen_random_dpfsa,
    is_deterministic,
    is_log_separable,
    is_probabilistic,
    path_weight,
    stringsum,
)

__version__ = "0.1.0"
