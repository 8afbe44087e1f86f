"""Space-compressed Heaviside encodings of unweighted deterministic FSAs."""

from .codes import FourHotCode, PairCode, TwoHotCode
from .detectors import (
    Detector,
    Neuron,
    all_pair_inputs,
    detect_line,
    detect_nondecreasing,
    equality_pair,
    northwestern,
    pair_input,
    response,
)
from .matrices import (
    cover_bound,
    is_nondecreasing,
    koenig_cover,
    line_cover,
    line_kind,
    max_matching,
    max_transversal,
    nondecreasing_cover,
    or_all,
)
from .nets import (
    METHODS,
    ThresholdNet,
    best_permutation,
    build_dewdney,
    build_indyk,
    build_minsky_net,
    build_net,
    dewdney_unit_bound,
    net_step,
    parent_matrix,
    simulate_net,
)
