"""Dependency-tree polynomials and polynomial-distance syntax analytics."""

__version__ = "0.1.0"

from .deptree import DepTree, canonical_encoding, from_sentence, relation_to_index
from .distance import format_distance, manhattan, polynomial_distance, tree_distance
from .ingest import Dataset, SentenceRecord, TokenRow, build_dataset, parse_conllu
from .polynomial import (
    Polynomial,
    collapse_labels,
    compute_labeled,
    compute_unlabeled,
    to_term_vectors,
)

__all__ = [
    "DepTree",
    "Dataset",
    "Polynomial",
    "SentenceRecord",
    "TokenRow",
    "build_dataset",
    "canonical_encoding",
    "collapse_labels",
    "compute_labeled",
    "compute_unlabeled",
    "format_distance",
    "from_sentence",
    "manhattan",
    "parse_conllu",
    "polynomial_distance",
    "relation_to_index",
    "to_term_vectors",
    "tree_distance",
]
