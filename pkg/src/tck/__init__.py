"""Tree-child networks: displayed trees, octopuses and the lower bound t(n, k)."""

from .canon import canonical_order, isomorphic_bruteforce, network_canonical_code
from .display import (
    DisplayResult,
    Embedding,
    count_displayed,
    displayed_trees,
    embedding_to_tree,
    embeddings_of,
    enumerate_embeddings,
    is_non_essential,
    non_essential_arcs,
)
from .edit import delete_arcs, delete_reticulation_arc
from .formats import (
    load_network,
    parse_edgelist,
    parse_enewick,
    serialize_edgelist,
    serialize_enewick,
)
from .network import (
    Network,
    biconnected_components,
    has_3cycle,
    is_normal,
    is_normal_reticulation,
    is_shortcut,
    is_tree_child,
    shortcuts,
    tree_path,
    underlying_3cycles,
    validate,
)
from .octopus import (
    build_octopus,
    build_tight_ladder,
    find_ladders,
    is_octopus,
    ladder_core_match,
    parse_octopus_spec,
    t_bound,
    tnk_identity_suite,
)
from .trees import PhyloTree, caterpillar, double_caterpillar, restrict_tree

__version__ = "0.1.0"

__all__ = [
    "DisplayResult",
    "Embedding",
    "Network",
    "PhyloTree",
    "biconnected_components",
    "build_octopus",
    "build_tight_ladder",
    "canonical_order",
    "caterpillar",
    "count_displayed",
    "delete_arcs",
    "delete_reticulation_arc",
    "displayed_trees",
    "double_caterpillar",
    "embedding_to_tree",
    "embeddings_of",
    "enumerate_embeddings",
    "find_ladders",
    "has_3cycle",
    "is_non_essential",
    "is_normal",
    "is_normal_reticulation",
    "is_octopus",
    "is_shortcut",
    "is_tree_child",
    "isomorphic_bruteforce",
    "ladder_core_match",
    "load_network",
    "network_canonical_code",
    "non_essential_arcs",
    "parse_edgelist",
    "parse_enewick",
    "parse_octopus_spec",
    "restrict_tree",
    "serialize_edgelist",
    "serialize_enewick",
    "shortcuts",
    "t_bound",
    "tnk_identity_suite",
    "tree_path",
    "underlying_3cycles",
    "validate",
]
