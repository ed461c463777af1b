"""Polynomial distance between term-vector sets.

The distance between two polynomials P and Q is the sum, over both
directions, of each term vector's Manhattan distance to its nearest
term vector on the other side, divided by the total number of term
vectors. All inputs are integer vectors, so the numerator is an exact
integer and the result an exact Fraction; decimal rounding happens only
at the output boundary.
"""

from fractions import Fraction

import numpy as np
from scipy.spatial.distance import cdist

from .errors import EmptySet
from .polynomial import TERM_VECTOR_LEN

# int64 is ample for sentence-scale trees; absurd coefficients fall back
# to exact object arithmetic
_INT64_SAFE = 2 ** 62


def manhattan(s, t):
    """Manhattan distance between two dense 75-entry term vectors."""
    return sum(abs(a - b) for a, b in zip(s, t))


def term_matrix(vectors):
    """Stack term vectors into an integer matrix for the distance kernel."""
    vectors = list(vectors)
    if not vectors:
        raise EmptySet("a tree polynomial has at least one term")
    largest = max(abs(v) for vec in vectors for v in vec)
    return np.array(vectors, dtype=np.int64 if largest < _INT64_SAFE else object)


def _float_kernel_safe(p_arr, q_arr):
    """True when every L1 min-sum stays an exact float64 integer.

    Row sums are bounded by 75 * vmax and the accumulated totals by
    rows * 75 * vmax; keeping that under 2**52 guarantees every
    intermediate is exactly representable.
    """
    if p_arr.dtype == object or q_arr.dtype == object:
        return False
    vmax = max(int(np.abs(p_arr).max()), int(np.abs(q_arr).max()), 1)
    rows = max(p_arr.shape[0], q_arr.shape[0])
    return rows * TERM_VECTOR_LEN * vmax < 2 ** 52


def _min_sum_exact(p_arr, q_arr):
    """Integer-arithmetic fallback: sum of row minima of L1 into q_arr."""
    total = 0
    # row chunks bound the broadcast buffer to ~chunk * |Q| * 75 entries
    chunk = max(1, 4_000_000 // (q_arr.shape[0] * TERM_VECTOR_LEN + 1))
    for start in range(0, p_arr.shape[0], chunk):
        block = p_arr[start:start + chunk]
        diffs = np.abs(block[:, None, :] - q_arr[None, :, :]).sum(axis=2)
        total += int(diffs.min(axis=1).sum())
    return total


def polynomial_distance(p_vectors, q_vectors):
    """Exact distance between two term-vector sets as a Fraction."""
    p_arr = p_vectors if isinstance(p_vectors, np.ndarray) else term_matrix(p_vectors)
    q_arr = q_vectors if isinstance(q_vectors, np.ndarray) else term_matrix(q_vectors)
    if p_arr.shape[0] == 0 or q_arr.shape[0] == 0:
        raise EmptySet("a tree polynomial has at least one term")
    if _float_kernel_safe(p_arr, q_arr):
        grid = cdist(
            p_arr.astype(np.float64), q_arr.astype(np.float64), "cityblock"
        )
        numerator = int(grid.min(axis=1).sum()) + int(grid.min(axis=0).sum())
    else:
        p_arr = p_arr.astype(object)
        q_arr = q_arr.astype(object)
        numerator = _min_sum_exact(p_arr, q_arr) + _min_sum_exact(q_arr, p_arr)
    return Fraction(numerator, p_arr.shape[0] + q_arr.shape[0])


def tree_distance(t1, t2):
    """Polynomial distance between two dependency trees."""
    from .polynomial import compute_labeled, to_term_vectors

    return polynomial_distance(
        to_term_vectors(compute_labeled(t1)),
        to_term_vectors(compute_labeled(t2)),
    )


def format_distance(value, places=2):
    """Render a non-negative exact distance as a decimal string.

    Rounds half-up in exact integer arithmetic; applied only at the
    emission boundary.
    """
    frac = Fraction(value)
    if frac < 0:
        raise ValueError("distances are non-negative")
    scale = 10 ** places
    units = (2 * frac.numerator * scale + frac.denominator) // (2 * frac.denominator)
    whole, part = divmod(units, scale)
    if places == 0:
        return str(whole)
    return f"{whole}.{part:0{places}d}"
