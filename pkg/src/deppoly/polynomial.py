"""Sparse multivariate polynomials and the tree-distinguishing recursion.

Two modes exist and never mix. Unlabeled polynomials live in two
variables (slot 0 = x, slot 1 = y). Labeled polynomials live in 74
variables: slot i-1 holds the exponent of x_i and slot 36+i the exponent
of y_i, for labels i in 1..37. A term is a sorted tuple of
(slot, exponent) pairs with positive exponents, mapped to a positive
integer coefficient; coefficients are Python ints, so collisions can
accumulate without overflow.
"""

from .deptree import N_RELATIONS
from .errors import ModeMismatch

UNLABELED = "unlabeled"
LABELED = "labeled"

TERM_VECTOR_LEN = 2 * N_RELATIONS + 1  # 74 exponents + coefficient


class Polynomial:
    __slots__ = ("mode", "terms")

    def __init__(self, mode, terms):
        self.mode = mode
        self.terms = terms

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.mode == other.mode
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.mode, frozenset(self.terms.items())))

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"Polynomial({self.mode}, {len(self.terms)} terms)"

    def canonical_terms(self):
        """Terms as a sorted tuple of (exponents, coefficient) pairs."""
        return tuple(sorted(self.terms.items()))


def zero(mode):
    return Polynomial(mode, {})


def one(mode):
    return Polynomial(mode, {(): 1})


def monomial(mode, slot, coefficient=1):
    return Polynomial(mode, {((slot, 1),): coefficient})


def x_var(label=None):
    """x (unlabeled) or x_label (labeled)."""
    if label is None:
        return monomial(UNLABELED, 0)
    return monomial(LABELED, label - 1)


def y_var(label=None):
    """y (unlabeled) or y_label (labeled)."""
    if label is None:
        return monomial(UNLABELED, 1)
    return monomial(LABELED, N_RELATIONS + label - 1)


def _check_mode(p, q):
    if p.mode != q.mode:
        raise ModeMismatch(f"cannot combine {p.mode} and {q.mode} polynomials")


def add(p, q):
    """Coefficient-wise sum of two polynomials in the same mode."""
    _check_mode(p, q)
    terms = dict(p.terms)
    for expo, coeff in q.terms.items():
        total = terms.get(expo, 0) + coeff
        if total:
            terms[expo] = total
        else:
            del terms[expo]
    return Polynomial(p.mode, terms)


def _merge_exponents(e1, e2):
    # both inputs are sorted by slot; classic two-pointer merge
    out = []
    i = j = 0
    n1, n2 = len(e1), len(e2)
    while i < n1 and j < n2:
        s1, v1 = e1[i]
        s2, v2 = e2[j]
        if s1 == s2:
            out.append((s1, v1 + v2))
            i += 1
            j += 1
        elif s1 < s2:
            out.append(e1[i])
            i += 1
        else:
            out.append(e2[j])
            j += 1
    out.extend(e1[i:])
    out.extend(e2[j:])
    return tuple(out)


def multiply(p, q):
    """Distributive product; colliding exponent vectors merge by addition."""
    _check_mode(p, q)
    terms = {}
    for e1, c1 in p.terms.items():
        for e2, c2 in q.terms.items():
            expo = _merge_exponents(e1, e2)
            terms[expo] = terms.get(expo, 0) + c1 * c2
    return Polynomial(p.mode, terms)


def _compute(tree, leaf_poly, node_poly):
    # post-order without recursion: children strictly before parents
    order = []
    stack = [tree.root]
    while stack:
        node = stack.pop()
        order.append(node)
        stack.extend(tree.children[node])
    poly = [None] * len(tree)
    for node in reversed(order):
        kids = tree.children[node]
        if not kids:
            poly[node] = leaf_poly(tree.labels[node])
        else:
            prod = poly[kids[0]]
            for k in kids[1:]:
                prod = multiply(prod, poly[k])
            poly[node] = node_poly(tree.labels[node], prod)
    return poly[tree.root]


def compute_unlabeled(tree):
    """Tree-distinguishing polynomial of the tree's topology.

    Leaves map to x; an internal node maps to y plus the product of its
    children's polynomials. Labels are ignored.
    """
    return _compute(
        tree,
        lambda _label: x_var(),
        lambda _label, prod: add(y_var(), prod),
    )


def compute_labeled(tree):
    """Label-aware tree polynomial over 74 variables.

    A leaf with label l maps to x_l; an internal node with label l maps
    to y_l plus the product over its children.
    """
    return _compute(
        tree,
        lambda label: x_var(label),
        lambda label, prod: add(y_var(label), prod),
    )


def to_term_vectors(p):
    """Dense 75-entry vectors of a labeled polynomial, in canonical order.

    Entry layout: exponents of x_1..x_37, then y_1..y_37, then the
    coefficient. Ordering is lexicographic over the full dense vector.
    """
    if p.mode != LABELED:
        raise ModeMismatch("term vectors are defined for labeled polynomials only")
    vectors = []
    for expo, coeff in p.terms.items():
        dense = [0] * TERM_VECTOR_LEN
        for slot, value in expo:
            dense[slot] = value
        dense[-1] = coeff
        vectors.append(tuple(dense))
    vectors.sort()
    return vectors


def from_term_vectors(vectors):
    """Inverse of to_term_vectors."""
    terms = {}
    for vec in vectors:
        expo = tuple((slot, value) for slot, value in enumerate(vec[:-1]) if value)
        terms[expo] = terms.get(expo, 0) + vec[-1]
    return Polynomial(LABELED, terms)


def collapse_labels(p):
    """Forget labels: substitute every x_i by x and every y_i by y."""
    if p.mode != LABELED:
        raise ModeMismatch("collapse_labels expects a labeled polynomial")
    terms = {}
    for expo, coeff in p.terms.items():
        x_total = 0
        y_total = 0
        for slot, value in expo:
            if slot < N_RELATIONS:
                x_total += value
            else:
                y_total += value
        collapsed = []
        if x_total:
            collapsed.append((0, x_total))
        if y_total:
            collapsed.append((1, y_total))
        key = tuple(collapsed)
        terms[key] = terms.get(key, 0) + coeff
    return Polynomial(UNLABELED, terms)


def evaluate(p, x_value, y_value):
    """Evaluate with every x-variable at x_value and every y at y_value."""
    total = 0
    for expo, coeff in p.terms.items():
        value = coeff
        for slot, exponent in expo:
            if p.mode == UNLABELED:
                base = x_value if slot == 0 else y_value
            else:
                base = x_value if slot < N_RELATIONS else y_value
            value *= base ** exponent
        total += value
    return total


def serialize_term_vectors(vectors):
    """One line of 75 space-separated integers per vector."""
    return "\n".join(" ".join(str(v) for v in vec) for vec in vectors)


def parse_term_vectors(text):
    vectors = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != TERM_VECTOR_LEN:
            raise ValueError(f"expected {TERM_VECTOR_LEN} integers, got {len(parts)}")
        vectors.append(tuple(int(p) for p in parts))
    return vectors
