"""Quantum Tanner codes on dihedral left-right Cayley complexes.

Construction, validation, distance estimation, BP+OSD decoding, and
noisy memory experiments for CSS codes built from a group, a pair of
symmetric generator sets, and a pair of classical seed codes.
"""

from .gf2 import BinaryMatrix, rank, rref, kernel_basis, solve_submatrix, kron
from .groups import (
    DihedralGroup,
    GeneratorSet,
    check_tnc,
    sample_symmetric_generators,
    sample_tnc_pair,
)
from .complexes import LeftRightCayleyComplex, SpectralReport, build_complex
from .codes import (
    ClassicalCode,
    CodePair,
    build_pair,
    dual,
    min_distance_exhaustive,
    random_systematic,
)
from .qcode import (
    CssCode,
    FIXTURES,
    build_tanner_code,
    fixture_names,
    load_bundle,
    load_fixture,
    parameters,
    save_bundle,
)
from .distance import DistanceEstimate, estimate_distance, exhaustive_logical_search
from .decoder import (
    BpResult,
    DecoderConfig,
    SyndromeDecoder,
    bp_decode,
    decode_to_logical,
    osd_postprocess,
)
from .noise import (
    Circuit,
    CircuitFaultModel,
    NoiseModel,
    SpaceTimeCheckMatrix,
    build_circuit,
    build_code_capacity,
    build_phenomenological,
    build_problem,
    circuit_to_checkmatrix,
)

__version__ = "0.1.0"
