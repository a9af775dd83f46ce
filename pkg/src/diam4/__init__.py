"""Spectral extremal toolkit for trees of diameter at most four."""

from .embedding import Embedding, contains_all, contains_tree, embed_diam4_at_root
from .errors import ConvergenceFailure, CorpusIncomplete, Graph6Error, InvalidParameters, UnsupportedSize
from .graph import (
    CanonicalForm,
    Graph,
    LinkGraph,
    NeighborhoodShells,
    canonical_form,
    components,
    diameter,
    enumerate_graphs,
    induced,
    link_graph,
    make_snk,
    make_snk_plus,
    max_matching_size,
    shells,
)
from .spectral import (
    BColumnSums,
    CharPolyParams,
    SpectralResult,
    b_column_sums,
    eq1_identity_check,
    exact_radius_snk,
    exact_radius_snk_plus,
    lemma21_check,
    spectral_radius,
)
from .trees import Diam4Tree, StarForestDecomposition, decompose, enumerate_diam4_trees, family_T_star, spider_1_2s, spider_2s

__version__ = "0.1.0"

__all__ = [
    "BColumnSums",
    "CanonicalForm",
    "CharPolyParams",
    "ConvergenceFailure",
    "CorpusIncomplete",
    "Diam4Tree",
    "Embedding",
    "Graph",
    "Graph6Error",
    "InvalidParameters",
    "LinkGraph",
    "NeighborhoodShells",
    "SpectralResult",
    "StarForestDecomposition",
    "UnsupportedSize",
    "b_column_sums",
    "canonical_form",
    "components",
    "contains_all",
    "contains_tree",
    "decompose",
    "diameter",
    "embed_diam4_at_root",
    "enumerate_diam4_trees",
    "enumerate_graphs",
    "eq1_identity_check",
    "exact_radius_snk",
    "exact_radius_snk_plus",
    "family_T_star",
    "induced",
    "lemma21_check",
    "link_graph",
    "make_snk",
    "make_snk_plus",
    "max_matching_size",
    "shells",
    "spectral_radius",
    "spider_1_2s",
    "spider_2s",
    "__version__",
]
