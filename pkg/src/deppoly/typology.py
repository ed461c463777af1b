"""UPGMA dendrograms and classical MDS embeddings of distance matrices.

Both analyses are fully deterministic: UPGMA breaks merge ties by the
smallest (row, col) index pair in the current cluster ordering, and MDS
uses a cyclic Jacobi eigensolver with a fixed sweep order and sign
convention.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateMatrix


@dataclass(frozen=True)
class Dendrogram:
    """A cluster: a leaf (label set, children empty) or a merge node.

    `height` is half the merge distance; leaves sit at height 0. UPGMA
    heights never decrease from leaves to the root.
    """

    height: object
    children: tuple
    label: str = None
    size: int = 1

    @property
    def is_leaf(self):
        return not self.children

    def leaves(self):
        if self.is_leaf:
            return [self.label]
        out = []
        for child in self.children:
            out.extend(child.leaves())
        return out


def upgma(matrix):
    """Average-linkage agglomeration of a symmetric zero-diagonal matrix.

    The closest pair of clusters merges at half its distance; the merged
    cluster's distance to every other cluster is the size-weighted mean
    of its members' distances. The merged cluster takes the row slot of
    its left member, which fixes the tie order.
    """
    n = matrix.size
    if n < 2:
        raise DegenerateMatrix("clustering needs at least 2 labels")
    clusters = [Dendrogram(height=Fraction(0), children=(), label=lab) for lab in matrix.labels]
    dist = {}
    for i in range(n):
        for j in range(i + 1, n):
            dist[(i, j)] = matrix.values[i][j]
    active = list(range(n))
    nodes = {i: clusters[i] for i in range(n)}
    next_id = n

    def d(a, b):
        return dist[(a, b) if a < b else (b, a)]

    while len(active) > 1:
        best = None
        best_pos = None
        for pi in range(len(active)):
            for pj in range(pi + 1, len(active)):
                value = d(active[pi], active[pj])
                if best is None or value < best:
                    best = value
                    best_pos = (pi, pj)
        pi, pj = best_pos
        a, b = active[pi], active[pj]
        node_a, node_b = nodes[a], nodes[b]
        merged = Dendrogram(
            height=best / 2,
            children=(node_a, node_b),
            size=node_a.size + node_b.size,
        )
        for other in active:
            if other in (a, b):
                continue
            weighted = (node_a.size * d(a, other) + node_b.size * d(b, other)) / merged.size
            dist[(min(next_id, other), max(next_id, other))] = weighted
        nodes[next_id] = merged
        active[pi] = next_id
        del active[pj]
        next_id += 1
    return nodes[active[0]]


def _format_length(value):
    if value == int(value):
        return str(int(value))
    return repr(float(value))


def to_newick(dendrogram):
    """Newick text with branch lengths parent height minus child height.

    Children are ordered by their lexicographically smallest leaf so the
    output is reproducible.
    """

    def render(node, parent_height):
        length = _format_length(parent_height - node.height)
        if node.is_leaf:
            return f"{node.label}:{length}"
        inner = ",".join(render(c, node.height) for c in _ordered(node.children))
        return f"({inner}):{length}"

    root = dendrogram
    if root.is_leaf:
        return f"{root.label};"
    inner = ",".join(render(c, root.height) for c in _ordered(root.children))
    return f"({inner});"


def _ordered(children):
    return sorted(children, key=lambda c: min(c.leaves()))


def parse_newick(text):
    """Parse ultrametric Newick text back into a Dendrogram.

    Heights come back as floats: every leaf sits at height 0 and a node's
    height is the root-to-leaf depth minus its own depth. Inputs are
    expected to be ultrametric, which is what to_newick emits.
    """
    s = text.strip()
    if not s.endswith(";"):
        raise ValueError("Newick text must end with ';'")
    s = s[:-1]
    pos = 0

    def parse_node():
        nonlocal pos
        children = []
        if pos < len(s) and s[pos] == "(":
            pos += 1
            children.append(parse_node())
            while pos < len(s) and s[pos] == ",":
                pos += 1
                children.append(parse_node())
            if pos >= len(s) or s[pos] != ")":
                raise ValueError(f"unbalanced parentheses at {pos}")
            pos += 1
        start = pos
        while pos < len(s) and s[pos] not in ",():":
            pos += 1
        label = s[start:pos] or None
        branch = 0.0
        if pos < len(s) and s[pos] == ":":
            pos += 1
            start = pos
            while pos < len(s) and s[pos] not in ",()":
                pos += 1
            branch = float(s[start:pos])
        return label, branch, children

    root_raw = parse_node()
    if pos != len(s):
        raise ValueError(f"trailing characters at position {pos}")

    def first_leaf_depth(raw, depth):
        label, branch, children = raw
        if not children:
            return depth + branch
        return first_leaf_depth(children[0], depth + branch)

    root_height = first_leaf_depth(root_raw, 0.0)

    def build(raw, depth):
        label, branch, children = raw
        here = depth + branch
        if not children:
            return Dendrogram(height=0.0, children=(), label=label)
        kids = tuple(build(c, here) for c in children)
        return Dendrogram(
            height=root_height - here,
            children=kids,
            size=sum(k.size for k in kids),
        )

    return build(root_raw, 0.0)


@dataclass
class Embedding:
    labels: tuple
    coords: np.ndarray  # (n, dims)
    eigenvalues: np.ndarray  # all n, descending
    negative_clamped: bool


def jacobi_eigh(matrix, threshold=1e-12, max_sweeps=100):
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps the strict upper triangle in row order, rotating away any
    off-diagonal entry above the threshold; stops when a full sweep
    changes nothing. Returns eigenvalues (descending) and the matching
    eigenvector columns.
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= threshold:
                    continue
                rotated = True
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                rot_p = c * v[:, p] - s * v[:, q]
                rot_q = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = rot_p, rot_q
        if not rotated:
            break
    eigenvalues = np.diag(a).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]


def classical_mds(matrix, dims=2):
    """Torgerson MDS: eigendecompose the doubly-centered squared matrix.

    Coordinates are eigenvectors scaled by the square roots of their
    eigenvalues; negative eigenvalues (non-Euclidean input) clamp to zero
    and are flagged. Each coordinate column is signed so its first
    nonzero entry is non-negative.
    """
    n = matrix.size
    if n < 2:
        raise DegenerateMatrix("an embedding needs at least 2 labels")
    d = np.array([[float(v) for v in row] for row in matrix.values])
    j = np.eye(n) - np.ones((n, n)) / n
    b = -0.5 * j @ (d ** 2) @ j
    eigenvalues, eigenvectors = jacobi_eigh(b)
    clamped = bool(eigenvalues[:dims].min() < 0)
    coords = np.zeros((n, dims))
    for k in range(min(dims, n)):
        scale = math.sqrt(max(eigenvalues[k], 0.0))
        column = eigenvectors[:, k] * scale
        for value in column:
            if abs(value) > 1e-12:
                if value < 0:
                    column = -column
                break
        coords[:, k] = column
    return Embedding(
        labels=matrix.labels,
        coords=coords,
        eigenvalues=eigenvalues,
        negative_clamped=clamped,
    )


def embedding_to_csv(embedding):
    """label, x, y, share of total positive eigenvalue mass per axis."""
    positive = embedding.eigenvalues.clip(min=0.0)
    total = positive.sum()
    shares = [
        (positive[k] / total if total > 0 else 0.0)
        for k in range(embedding.coords.shape[1])
    ]
    lines = ["label," + ",".join(
        f"dim{k + 1},share{k + 1}" for k in range(embedding.coords.shape[1])
    )]
    for i, label in enumerate(embedding.labels):
        cells = []
        for k in range(embedding.coords.shape[1]):
            cells.append(f"{embedding.coords[i, k]:.6f}")
            cells.append(f"{shares[k]:.6f}")
        lines.append(label + "," + ",".join(cells))
    return "\n".join(lines) + "\n"
