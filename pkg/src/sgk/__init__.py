"""Symmetric graphs from permutation group data.

The kit builds arc-transitive graphs out of groups (coset graphs,
orbital graphs, Cayley graphs), takes quotients along invariant vertex
partitions, extends graphs back up (three-arc graphs, covers over a
semidirect product, subgraph graphs, arc partition extensions), and
moves between symmetric graphs and flag-transitive point-block
incidence structures.  Every construction re-checks the algebraic
identities it advertises and raises rather than returning an object
that fails its own certificate.

Vertices, points, and group domains are 0-based everywhere in the
library; the text formats and the command line are 1-based.
"""

from .constructions import (
    ArcExtension,
    BiggsCover,
    ChainReport,
    FibreExtraction,
    FlagReconstruction,
    NChain,
    SemidirectGroup,
    SubgraphGraph,
    ThreeArcGraph,
    ThreeArcOrbit,
    arc_partition_extension,
    biggs_cover,
    chain_from_seeds,
    check_condition_pe,
    check_three_arc_necessity,
    constant_chain,
    extract_fibre_data,
    flag_orbital_reconstruction,
    semidirect_product,
    subgraph_graph,
    three_arc_graph,
    three_arc_orbits,
    trivial_twist,
    validate_nchain,
)
from .coset_graphs import (
    CosetGraphResult,
    CosetGraphSpec,
    Orbital,
    RecognitionResult,
    cayley_graph,
    orbital_double_coset_map,
    orbital_graph,
    orbitals,
    recognize_as_coset_graph,
    sabidussi_graph,
    symmetric_coset_graph,
)
from .designs import (
    DesignParams,
    IncidenceStructure,
    Polarity,
    block_rows,
    check_polarity,
    design_from_graph,
    dual,
    find_polarities,
    graph_from_design,
    is_flag_transitive,
    reduce_repeated_blocks,
    validate_design,
)
from .errors import KitError, certify
from .graphs import (
    DirectedSubgraph,
    Graph,
    TransitivityReport,
    are_isomorphic,
    complete_graph,
    connected_components,
    cycle_graph,
    edgeless_graph,
    enumerate_s_arcs,
    is_connected,
    verify_action,
)
from .perm import (
    Action,
    GroupSpec,
    GroupTable,
    Perm,
    coerce_action,
    enumerate_group,
    group_from_generators,
    is_transitive,
    orbit,
    parse_cycles,
    small_generating_set,
)
from .quotients import (
    CrossSection,
    QuotientCertificate,
    QuotientCosetForm,
    certify_quotient,
    cover_class,
    cross_section_design,
    induced_bipartite,
    quotient_action,
    quotient_as_coset_graph,
    quotient_graph,
    quotient_is_nontrivial,
)
from .subgroups import (
    BlockSystem,
    CosetSpace,
    DoubleCoset,
    DoubleCosetDecomposition,
    LatticePair,
    Subgroup,
    all_block_systems,
    conjugate_subgroup,
    core,
    double_cosets,
    full_subgroup,
    intermediate_subgroups,
    lattice_is_order_isomorphic,
    make_subgroup,
    minimal_block,
    right_cosets,
    setwise_stabilizer,
    stabilizer_subgroup,
    subgroup_block_lattice,
    subgroup_from_generators,
    system_from_block,
    trivial_subgroup,
)

__version__ = "0.1.0"

__all__ = [
    "Action",
    "ArcExtension",
    "BiggsCover",
    "BlockSystem",
    "ChainReport",
    "CosetGraphResult",
    "CosetGraphSpec",
    "CosetSpace",
    "CrossSection",
    "DesignParams",
    "DirectedSubgraph",
    "DoubleCoset",
    "DoubleCosetDecomposition",
    "FibreExtraction",
    "FlagReconstruction",
    "Graph",
    "GroupSpec",
    "GroupTable",
    "IncidenceStructure",
    "KitError",
    "LatticePair",
    "NChain",
    "Orbital",
    "Perm",
    "Polarity",
    "QuotientCertificate",
    "QuotientCosetForm",
    "RecognitionResult",
    "SemidirectGroup",
    "SubgraphGraph",
    "Subgroup",
    "ThreeArcGraph",
    "ThreeArcOrbit",
    "TransitivityReport",
    "all_block_systems",
    "arc_partition_extension",
    "are_isomorphic",
    "biggs_cover",
    "block_rows",
    "cayley_graph",
    "certify",
    "certify_quotient",
    "chain_from_seeds",
    "check_condition_pe",
    "check_polarity",
    "check_three_arc_necessity",
    "coerce_action",
    "complete_graph",
    "conjugate_subgroup",
    "connected_components",
    "constant_chain",
    "core",
    "cover_class",
    "cross_section_design",
    "cycle_graph",
    "design_from_graph",
    "double_cosets",
    "dual",
    "edgeless_graph",
    "enumerate_group",
    "enumerate_s_arcs",
    "extract_fibre_data",
    "find_polarities",
    "flag_orbital_reconstruction",
    "full_subgroup",
    "graph_from_design",
    "group_from_generators",
    "induced_bipartite",
    "intermediate_subgroups",
    "is_connected",
    "is_flag_transitive",
    "is_transitive",
    "lattice_is_order_isomorphic",
    "make_subgroup",
    "minimal_block",
    "orbit",
    "orbital_double_coset_map",
    "orbital_graph",
    "orbitals",
    "parse_cycles",
    "quotient_action",
    "quotient_as_coset_graph",
    "quotient_graph",
    "quotient_is_nontrivial",
    "recognize_as_coset_graph",
    "reduce_repeated_blocks",
    "right_cosets",
    "sabidussi_graph",
    "semidirect_product",
    "setwise_stabilizer",
    "small_generating_set",
    "stabilizer_subgroup",
    "subgraph_graph",
    "subgroup_block_lattice",
    "subgroup_from_generators",
    "symmetric_coset_graph",
    "system_from_block",
    "three_arc_graph",
    "three_arc_orbits",
    "trivial_subgroup",
    "trivial_twist",
    "validate_design",
    "validate_nchain",
    "verify_action",
]
