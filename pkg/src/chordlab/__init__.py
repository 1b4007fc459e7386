"""Desk-scale laboratory for three intertwined combinatorial constructions:

- a staged "dump" construction of traceable graphs with no chordless 4-paths,
  whose coding-vertex embeddings decode which values its driving sequence took;
- the finite dichotomy that large traceable graphs contain a K22 copy or a
  chordless n-path, with its coloring-based proof pipeline;
- fence extraction from finitely generated length-3 lattices.
"""

from .construction import (
    DecodeContext,
    HistoryLemmaReport,
    LemmaReport,
    StagedHistory,
    StageState,
    build_decode_context,
    check_history_lemmas,
    check_no_chordless4,
    check_stage_lemmas,
    coding_change_law,
    decode_range,
    embed_via_coding,
    history_has_no_chordless4,
    init,
    run,
    seeded_injective,
    stable_coding,
    stable_coding_prefix,
    step,
)
from .errors import (
    CapacityError,
    ChordlabError,
    ContradictionError,
    CoverageError,
    ExtractionError,
    InvalidContextError,
    InvalidInputError,
    ResourceLimitError,
    StructuralError,
)
from .graphs import (
    K22,
    Embedding,
    Graph,
    Pattern,
    check_traceable,
    embedding_is_valid,
    find_chordless_path,
    find_embedding,
    is_chordless,
    pattern_A,
    pattern_Kkk,
    pattern_graph,
)
from .lattices import (
    BoundedPoset,
    Fence,
    FiniteLattice,
    GenTree,
    RankTable,
    build_tree,
    check_length3,
    check_no_double_cover,
    closure_and_rank,
    comparability_graph,
    fence_elements,
    fence_lattice,
    find_fences,
    pipeline_capacity,
    spurred_fence_lattice,
    validate_fence,
    validate_lattice,
)
from .ramsey import (
    DichotomyWitness,
    FourColoring,
    HomogeneousCertificate,
    IncreasingPathTable,
    build_coloring,
    build_increasing_paths,
    color_4subset,
    dichotomy,
    estimate_min_m,
    extract_chordless,
    extract_k22,
    find_homogeneous,
    proof_pipeline,
    tower,
    tower_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
