"""Exact-arithmetic toolkit for parametric shortest paths.

Builds recursive lower-bound instances whose shortest-path envelopes
have provably many pieces, and verifies every construction claim with
rational arithmetic: gadget faithfulness, interval optimality, word
alternation freedom, grid piece counts, hull covers, and the reduction
of fixed-parameter shortest paths to perfect matching.
"""

from .exact import (
    AffineForm,
    PwlFunction,
    affine_pwl,
    constant_pwl,
    format_rational,
    is_concave,
    lower_envelope_lines,
    parse_rational,
    piece_count,
    pwl_add,
    pwl_min,
    pwl_restrict,
)
from .gadget import (
    GadgetSpec,
    main_link_spec,
    planarize,
    verify_faithful,
    zero_base,
)
from .graph import (
    Edge,
    Envelope,
    ParametricGraph,
    check_alternation_free_paths,
    envelope_bruteforce,
    envelope_dp,
    enumerate_paths,
    fixed_lambda_shortest,
)
from .grids import gen_grid, grid_piece_experiment
from .lowerbound import (
    LowerBoundInstance,
    build_instance,
    count_final_pieces,
    final_envelope,
    verify_instance,
)
from .matching import min_weight_perfect_matching, recover_path, split_transform
from .polytope import (
    TriEdge,
    TriGraph,
    cover_check,
    decompose_vertex,
    face_counts,
    hull3_vertices,
    minkowski_vertices,
    path_vectors,
    two_param_pieces,
)
from .words import (
    binary_expanded_words,
    doubling_words,
    find_alternation,
    is_davenport_schinzel,
    word_to_path,
)

__version__ = "0.1.0"
