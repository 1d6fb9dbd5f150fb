"""crystalft: fault-tolerant cluster states from 3D crystal nets.

Subpackages cover GF(2) chain-complex homology, Delaney-Dress tiling symbols,
compilation of crystal unit cells into decoder graphs, Monte Carlo matching
decoding, and finite-size threshold estimation.
"""

__version__ = "0.1.0"

from .complexes import (
    ChainComplex,
    ComplexReport,
    CSSCode,
    complex_from_json,
    complex_to_json,
    complex_validate,
    dualize,
    euler_characteristic,
    foliate,
    graph_state_edges,
    homology_dim,
    random_css,
    repetition_complex,
    steane_422_complex,
    toric_complex,
)
from .decoder import (
    REGIMES,
    EdgeProbabilities,
    NoiseParams,
    TrialStats,
    compile_edge_probs,
    defect_distances,
    edge_prob_total,
    edge_prob_z,
    mwpm,
    recovery,
    run_trial,
    run_trials,
    sample_errors,
    syndrome,
    wilson_interval,
)
from .delaney import (
    DelaneySymbol,
    SymbolReport,
    count_candidates,
    dual_symbol,
    enumerate_candidates,
    euler_flat_2d,
    find_isomorphism,
    is_self_dual,
    m12_orbit_vector,
    parse_symbol,
    serialize_symbol,
    validate_symbol,
)
from .gf2 import BinaryMatrix, kernel_basis, mat_mul, mat_rank, mat_transpose
from .lattice import (
    DecoderGraph,
    UnitCell,
    build_lattice,
    build_torus,
    bundled_cell_names,
    cycle_class,
    degree_stats,
    load_bundled_cell,
    load_unit_cell,
    loads_unit_cell,
    wrapping_cycle,
)
from .threshold import (
    CurvePoint,
    ThresholdEstimate,
    estimate_threshold,
    point_seed,
    sweep_curves,
)

__all__ = [
    "__version__",
    "BinaryMatrix",
    "ChainComplex",
    "ComplexReport",
    "CSSCode",
    "CurvePoint",
    "DecoderGraph",
    "DelaneySymbol",
    "EdgeProbabilities",
    "NoiseParams",
    "REGIMES",
    "SymbolReport",
    "ThresholdEstimate",
    "TrialStats",
    "UnitCell",
    "build_lattice",
    "build_torus",
    "bundled_cell_names",
    "compile_edge_probs",
    "complex_from_json",
    "complex_to_json",
    "complex_validate",
    "count_candidates",
    "cycle_class",
    "defect_distances",
    "degree_stats",
    "dual_symbol",
    "dualize",
    "edge_prob_total",
    "edge_prob_z",
    "enumerate_candidates",
    "estimate_threshold",
    "euler_characteristic",
    "euler_flat_2d",
    "find_isomorphism",
    "foliate",
    "graph_state_edges",
    "homology_dim",
    "is_self_dual",
    "kernel_basis",
    "load_bundled_cell",
    "load_unit_cell",
    "loads_unit_cell",
    "m12_orbit_vector",
    "mat_mul",
    "mat_rank",
    "mat_transpose",
    "mwpm",
    "parse_symbol",
    "point_seed",
    "random_css",
    "recovery",
    "repetition_complex",
    "run_trial",
    "run_trials",
    "sample_errors",
    "serialize_symbol",
    "steane_422_complex",
    "sweep_curves",
    "syndrome",
    "toric_complex",
    "validate_symbol",
    "wilson_interval",
    "wrapping_cycle",
]
