"""Integer completely positive factorizations of 2x2 matrices.

Every 2x2 doubly nonnegative integer matrix A is written as B B^T with B a
nonnegative integer matrix of at most 10 columns (at most 9 when the smaller
diagonal entry of the reduced matrix is at most 64).  An exhaustive search
gives the exact integer CP rank for small matrices.
"""

from .decomp import Decomposition, Route, SymMat2, check_dnn, decompose, lift, reduce, verify
from .oracle import SearchBudget, exact_icpr_2x2, exists_decomposition_nxn
from .spanning import conjecture3_witness, find_spanning_vector, is_spanning, span_witness
from .squares import classify_triplet, find_repair, is_good, min_squares_count, squares_rep

__all__ = [
    "Decomposition", "Route", "SearchBudget", "SymMat2", "check_dnn", "classify_triplet",
    "conjecture3_witness", "decompose", "exact_icpr_2x2", "exists_decomposition_nxn",
    "find_repair", "find_spanning_vector", "is_good", "is_spanning", "lift",
    "min_squares_count", "reduce", "span_witness", "squares_rep", "verify",
]
