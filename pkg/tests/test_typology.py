import math
import random
from fractions import Fraction

import numpy as np
import pytest

from deppoly.errors import DegenerateMatrix
from deppoly.matrices import DistanceMatrix
from deppoly.typology import (
    classical_mds,
    embedding_to_csv,
    jacobi_eigh,
    parse_newick,
    to_newick,
    upgma,
)

from oracles import cophenetic, random_ultrametric


def _matrix(labels, rows):
    return DistanceMatrix(tuple(labels), [[Fraction(v) for v in row] for row in rows])


def test_upgma_two_points():
    dendrogram = upgma(_matrix("AB", [[0, 6], [6, 0]]))
    assert dendrogram.height == 3
    assert sorted(dendrogram.leaves()) == ["A", "B"]


def test_upgma_three_points_hand():
    dendrogram = upgma(_matrix("ABC", [[0, 2, 8], [2, 0, 8], [8, 8, 0]]))
    assert dendrogram.height == 4
    inner = [c for c in dendrogram.children if not c.is_leaf]
    assert len(inner) == 1
    assert inner[0].height == 1
    assert sorted(inner[0].leaves()) == ["A", "B"]
    assert to_newick(dendrogram) == "((A:1,B:1):3,C:4);"


def test_upgma_rejects_tiny():
    with pytest.raises(DegenerateMatrix):
        upgma(_matrix("A", [[0]]))


def test_upgma_reconstructs_ultrametrics_exactly():
    rng = random.Random(90)
    for trial in range(30):
        n = rng.randint(2, 8)
        labels = tuple(f"L{k}" for k in range(n))
        values = random_ultrametric(rng, labels)
        dendrogram = upgma(DistanceMatrix(labels, values))
        implied = cophenetic(dendrogram)
        for i in range(n):
            for j in range(i + 1, n):
                a, b = labels[i], labels[j]
                key = (a, b) if a < b else (b, a)
                assert implied[key] == values[i][j], f"trial {trial} pair {a},{b}"


def test_upgma_heights_monotone():
    rng = random.Random(91)
    for _ in range(20):
        n = rng.randint(2, 9)
        labels = tuple(f"L{k}" for k in range(n))
        values = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                values[i][j] = values[j][i] = Fraction(rng.randint(1, 60), rng.randint(1, 5))
        dendrogram = upgma(DistanceMatrix(labels, values))

        def check(node):
            for child in node.children:
                assert child.height <= node.height
                check(child)

        check(dendrogram)


def test_upgma_size_weighted_average():
    # after merging (A,B), distance to C must be (d(A,C)+d(B,C))/2 even
    # when a fourth point is around
    rows = [
        [0, 2, 10, 30],
        [2, 0, 14, 30],
        [10, 14, 0, 30],
        [30, 30, 30, 0],
    ]
    dendrogram = upgma(_matrix("ABCD", rows))
    abc = [c for c in dendrogram.children if not c.is_leaf][0]
    assert abc.height == 6  # merge distance (10+14)/2, halved
    assert to_newick(dendrogram) == "(((A:1,B:1):5,C:6):9,D:15);"


def test_newick_round_trip_exact_for_float_representable_heights():
    rng = random.Random(92)
    for _ in range(20):
        n = rng.randint(2, 8)
        labels = tuple(f"L{k}" for k in range(n))
        # heights built from eighths are exact in binary floating point
        base = random_ultrametric(rng, labels)
        values = [[Fraction(round(v * 8), 8) for v in row] for row in base]
        dendrogram = upgma(DistanceMatrix(labels, values))
        back = parse_newick(to_newick(dendrogram))
        original = {k: float(v) for k, v in cophenetic(dendrogram).items()}
        reparsed = cophenetic(back)
        assert set(original) == set(reparsed)
        for key in original:
            assert original[key] == reparsed[key]


def test_newick_round_trip_general_rationals_near_exact():
    # branch lengths are emitted as shortest round-trip decimals, so
    # heights with non-terminating expansions survive to float precision
    rng = random.Random(95)
    for _ in range(20):
        n = rng.randint(2, 8)
        labels = tuple(f"L{k}" for k in range(n))
        dendrogram = upgma(DistanceMatrix(labels, random_ultrametric(rng, labels)))
        back = parse_newick(to_newick(dendrogram))
        original = cophenetic(dendrogram)
        reparsed = cophenetic(back)
        for key, value in original.items():
            assert abs(reparsed[key] - float(value)) <= 1e-9 * max(1.0, float(value))


def test_newick_deterministic_child_order():
    dendrogram = upgma(_matrix("BA", [[0, 6], [6, 0]]))
    assert to_newick(dendrogram) == "(A:3,B:3);"


def test_jacobi_matches_numpy():
    rng = np.random.default_rng(11)
    for n in (2, 5, 12, 20):
        sym = rng.normal(size=(n, n))
        sym = (sym + sym.T) / 2
        values, vectors = jacobi_eigh(sym)
        assert np.allclose(np.sort(values), np.linalg.eigvalsh(sym), atol=1e-10)
        for k in range(n):
            residual = np.linalg.norm(sym @ vectors[:, k] - values[k] * vectors[:, k])
            assert residual < 1e-8


def test_mds_two_points():
    embedding = classical_mds(_matrix("AB", [[0, 4], [4, 0]]))
    assert np.allclose(sorted(embedding.coords[:, 0]), [-2.0, 2.0])
    assert abs(embedding.coords[:, 1]).max() < 1e-9


def test_mds_collinear_points():
    # points at 0, 1, 3 on a line: distances 1, 3, 2
    embedding = classical_mds(_matrix("ABC", [[0, 1, 3], [1, 0, 2], [3, 2, 0]]))
    assert abs(embedding.eigenvalues[1]) < 1e-9
    xs = np.sort(embedding.coords[:, 0])
    gaps = np.diff(xs)
    assert np.allclose(np.sort(gaps), [1.0, 2.0], atol=1e-9)


def test_mds_reproduces_planar_configurations():
    rng = random.Random(93)
    for _ in range(15):
        n = rng.randint(2, 6)
        points = [(rng.uniform(-5, 5), rng.uniform(-5, 5)) for _ in range(n)]
        labels = tuple(f"P{k}" for k in range(n))
        values = [
            [
                Fraction(0) if i == j else math.dist(points[i], points[j])
                for j in range(n)
            ]
            for i in range(n)
        ]
        embedding = classical_mds(DistanceMatrix(labels, values))
        for i in range(n):
            for j in range(i + 1, n):
                rebuilt = math.dist(embedding.coords[i], embedding.coords[j])
                assert abs(rebuilt - float(values[i][j])) < 1e-6


def test_mds_centroid_at_origin():
    rng = random.Random(94)
    n = 7
    labels = tuple(f"P{k}" for k in range(n))
    values = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            values[i][j] = values[j][i] = Fraction(rng.randint(1, 40), rng.randint(1, 3))
    embedding = classical_mds(DistanceMatrix(labels, values))
    assert np.abs(embedding.coords.mean(axis=0)).max() < 1e-9


def test_mds_sign_convention_deterministic():
    matrix = _matrix("ABCD", [[0, 3, 5, 7], [3, 0, 4, 6], [5, 4, 0, 2], [7, 6, 2, 0]])
    first = classical_mds(matrix)
    second = classical_mds(matrix)
    assert np.array_equal(first.coords, second.coords)
    for k in range(first.coords.shape[1]):
        column = first.coords[:, k]
        nonzero = column[np.abs(column) > 1e-12]
        if nonzero.size:
            assert nonzero[0] > 0


def test_mds_rejects_tiny():
    with pytest.raises(DegenerateMatrix):
        classical_mds(_matrix("A", [[0]]))


def test_embedding_csv_shape():
    embedding = classical_mds(_matrix("AB", [[0, 4], [4, 0]]))
    lines = embedding_to_csv(embedding).strip().split("\n")
    assert lines[0].startswith("label,dim1,share1,dim2")
    assert len(lines) == 3
