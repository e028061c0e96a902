"""Ordinal and serial-order codes for sequences.

Rank codes, stack-order trees and Dyck words, ordinal Huffman codes, an
ordinal-STDP associative network, a rank-code autoencoder and executable
structure-learning tasks.
"""
from .core import (
    RankCode,
    Sequence,
    WeightVector,
    rank_code,
    rank_order_weights,
    response,
    stdp_weights,
)
from .errors import OrdinalCodeError
from .trees import (
    dyck_validate,
    is_stack_sortable,
    stack_order_tree,
    tree_order_weights,
    tree_to_dyck,
)

__version__ = "0.1.0"

__all__ = [
    "OrdinalCodeError",
    "RankCode",
    "Sequence",
    "WeightVector",
    "dyck_validate",
    "is_stack_sortable",
    "rank_code",
    "rank_order_weights",
    "response",
    "stack_order_tree",
    "stdp_weights",
    "tree_order_weights",
    "tree_to_dyck",
]
