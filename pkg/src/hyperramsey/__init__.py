"""Constructive machinery for linear Ramsey bounds of bounded-degree
hypergraphs: condensation chains, partite pattern embedding, clique
reductions with explicit bound calculators, and the stepping-up
lower-bound colouring with a monochromatic-copy verifier."""

from .drc import (
    DangerousCensus,
    DrcChain,
    DrcParams,
    DrcSample,
    chain_density_closed_form,
    dangerous_census,
    drc_chain,
    drc_step,
    edge_degree,
    edge_density,
    exact_expected_survivors,
)
from .embed import (
    Embedding,
    EmbeddingOrder,
    EmbedResult,
    TraceNeighbourhood,
    candidate_set,
    check_embedding,
    embed_pattern,
    embedding_order,
    goodness_audit,
    trace_neighbourhoods,
)
from .errors import (
    BudgetExceededError,
    HyperRamseyError,
    RetriesExhaustedError,
    SizeLimitError,
)
from .hypercore import (
    EdgeSet,
    Hypergraph,
    PartiteHypergraph,
    complete_hypergraph,
    complete_partite,
    cycle_spoke,
    gen_pattern,
    max_degree,
    random_hypergraph,
    random_partite,
    random_partite_pattern,
    shadow_graph,
    strong_chromatic_number,
    weight,
)
from .oracle import (
    ArrowingVerdict,
    CopySearchResult,
    MonteCarloResult,
    SearchBudget,
    exhaustive_ramsey_check,
    montecarlo,
    naive_count_mono_cliques,
    naive_find_copy,
)
from .reduction import (
    BoundParams,
    BoundResult,
    PipelineConfig,
    PipelineReport,
    QColouring,
    bound_calculator,
    clique_hypergraph,
    count_mono_cliques,
    extend_to_partite,
    pentagon_colouring,
    project_embedding,
    ramsey_pipeline,
    random_equitable_partition,
    tower,
    transversal_probability,
)
from .steppingup import (
    BaseColouring,
    BinaryString,
    StepUpColouring,
    VerifyVerdict,
    base_colouring,
    delta,
    delta_max_property,
    order_by_highest_difference,
    pentagon_base,
    random_base,
    stepup_colour,
    string_order,
    verify_no_mono_copy,
)

__version__ = "0.1.0"
