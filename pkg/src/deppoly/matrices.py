"""Translation and language distance matrices and their summaries.

All matrix entries are exact Fractions; means and medians are computed
in rational arithmetic and rounded only when emitted.
"""

import json
from dataclasses import dataclass
from fractions import Fraction

from .distance import format_distance, polynomial_distance, term_matrix
from .errors import DegenerateMatrix, MissingTranslation
from .polynomial import compute_labeled, to_term_vectors


@dataclass
class DistanceMatrix:
    labels: tuple
    values: list  # square, symmetric, zero diagonal, Fractions

    @property
    def size(self):
        return len(self.labels)

    def entry(self, a, b):
        return self.values[self.labels.index(a)][self.labels.index(b)]

    def upper_triangle(self):
        """(i, j, value) for every strictly-upper-triangle entry."""
        for i in range(self.size):
            for j in range(i + 1, self.size):
                yield i, j, self.values[i][j]


@dataclass
class LanguageSummary:
    mean: Fraction
    median: Fraction
    smallest: list  # [(value, (label_a, label_b))], ascending
    largest: list  # descending
    per_language: dict  # label -> mean of its off-diagonal row
    smallest_average: list  # [(value, label)], ascending
    largest_average: list  # descending


def dataset_term_vectors(dataset, workers=1):
    """Term-vector matrices for every (sent_id, language) tree in a dataset."""
    from .parallel import run_ordered

    keys = sorted(dataset.grid.keys())
    arrays = run_ordered(_term_vector_job, keys, shared=dataset, workers=workers)
    return dict(zip(keys, arrays))


def _term_vector_job(dataset, key):
    return term_matrix(to_term_vectors(compute_labeled(dataset.grid[key])))


def translation_matrix(dataset, sent_id, vectors=None):
    """Pairwise distances between the translations of one sentence."""
    if sent_id not in dataset.sent_ids:
        raise MissingTranslation(f"sentence {sent_id!r} not in dataset {dataset.name}")
    langs = dataset.languages
    if vectors is None:
        vectors = {
            (sent_id, lang): term_matrix(
                to_term_vectors(compute_labeled(dataset.tree(sent_id, lang)))
            )
            for lang in langs
        }
    n = len(langs)
    values = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = polynomial_distance(vectors[(sent_id, langs[i])], vectors[(sent_id, langs[j])])
            values[i][j] = d
            values[j][i] = d
    return DistanceMatrix(labels=langs, values=values)


def mean_matrix(matrices, labels):
    """Entry-wise exact mean of equally-labeled distance matrices."""
    if not matrices:
        raise DegenerateMatrix("cannot average zero matrices")
    n = len(labels)
    acc = [[Fraction(0)] * n for _ in range(n)]
    for m in matrices:
        for i in range(n):
            row = m.values[i]
            for j in range(n):
                acc[i][j] += row[j]
    count = len(matrices)
    values = [[acc[i][j] / count for j in range(n)] for i in range(n)]
    return DistanceMatrix(labels=labels, values=values)


def language_matrix(dataset, vectors=None, workers=1):
    """Entry-wise mean of the dataset's per-sentence translation matrices."""
    if vectors is None:
        vectors = dataset_term_vectors(dataset, workers=workers)
    per_sentence = _translation_matrices(dataset, vectors, workers)
    return mean_matrix(per_sentence, dataset.languages)


def _translation_matrices(dataset, vectors, workers):
    from .parallel import run_ordered

    return run_ordered(
        _one_translation_matrix, dataset.sent_ids, shared=(dataset, vectors), workers=workers
    )


def _one_translation_matrix(shared, sent_id):
    dataset, vectors = shared
    return translation_matrix(dataset, sent_id, vectors)


def summarize(matrix, k=3):
    """Mean/median, k extreme pairs, and per-language average distances.

    Mean and median run over the strictly-upper triangle; the median of
    an even count is the average of the two central order statistics.
    """
    entries = sorted(
        (value, (matrix.labels[i], matrix.labels[j]))
        for i, j, value in matrix.upper_triangle()
    )
    if not entries:
        raise DegenerateMatrix("summary needs at least 2 labels")
    values = [v for v, _ in entries]
    count = len(values)
    mean = sum(values, Fraction(0)) / count
    mid = count // 2
    median = values[mid] if count % 2 else (values[mid - 1] + values[mid]) / 2

    per_language = {}
    n = matrix.size
    for i, label in enumerate(matrix.labels):
        off_diag = [matrix.values[i][j] for j in range(n) if j != i]
        per_language[label] = sum(off_diag, Fraction(0)) / (n - 1)
    averages = sorted((value, label) for label, value in per_language.items())

    return LanguageSummary(
        mean=mean,
        median=median,
        smallest=entries[:k],
        largest=entries[::-1][:k],
        per_language=per_language,
        smallest_average=averages[:k],
        largest_average=averages[::-1][:k],
    )


@dataclass
class ExtremesReport:
    lang_a: str
    lang_b: str
    min_sent_id: str
    min_distance: Fraction
    min_ties: list
    max_sent_id: str
    max_distance: Fraction
    max_ties: list


def extreme_sentences(dataset, lang_a, lang_b, vectors=None):
    """Sentences with the smallest and largest distance between two languages.

    Ties are broken toward the lexicographically smallest sent_id and the
    full tie lists are reported.
    """
    for lang in (lang_a, lang_b):
        if lang not in dataset.languages:
            raise MissingTranslation(f"language {lang!r} not in dataset {dataset.name}")
    if vectors is None:
        vectors = {
            (sid, lang): term_matrix(
                to_term_vectors(compute_labeled(dataset.tree(sid, lang)))
            )
            for sid in dataset.sent_ids
            for lang in (lang_a, lang_b)
        }
    distances = {}
    for sid in dataset.sent_ids:
        distances[sid] = polynomial_distance(
            vectors[(sid, lang_a)], vectors[(sid, lang_b)]
        )
    d_min = min(distances.values())
    d_max = max(distances.values())
    min_ties = sorted(sid for sid, d in distances.items() if d == d_min)
    max_ties = sorted(sid for sid, d in distances.items() if d == d_max)
    return ExtremesReport(
        lang_a=lang_a,
        lang_b=lang_b,
        min_sent_id=min_ties[0],
        min_distance=d_min,
        min_ties=min_ties,
        max_sent_id=max_ties[0],
        max_distance=d_max,
        max_ties=max_ties,
    )


def matrix_to_csv(matrix, places=2):
    """Header row of labels, then one row per label, values rounded."""
    lines = ["," + ",".join(matrix.labels)]
    for label, row in zip(matrix.labels, matrix.values):
        lines.append(label + "," + ",".join(format_distance(v, places) for v in row))
    return "\n".join(lines) + "\n"


def _number(value, exact):
    if exact:
        frac = Fraction(value)
        return {"num": frac.numerator, "den": frac.denominator}
    return format_distance(value)


def matrix_to_json(matrix, exact=False):
    payload = {
        "labels": list(matrix.labels),
        "values": [[_number(v, exact) for v in row] for row in matrix.values],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def summary_to_json(summary, dataset_name, n_sentences, exact=False):
    def pair_entries(pairs):
        return [
            {"value": _number(v, exact), "pair": list(pair)} for v, pair in pairs
        ]

    def avg_entries(avgs):
        return [
            {"value": _number(v, exact), "language": label} for v, label in avgs
        ]

    payload = {
        "dataset": dataset_name,
        "n_sentences": n_sentences,
        "pairwise_language_distance": {
            "mean": _number(summary.mean, exact),
            "median": _number(summary.median, exact),
            "smallest": pair_entries(summary.smallest),
            "largest": pair_entries(summary.largest),
        },
        "average_language_distance": {
            "per_language": {
                label: _number(v, exact) for label, v in sorted(summary.per_language.items())
            },
            "smallest": avg_entries(summary.smallest_average),
            "largest": avg_entries(summary.largest_average),
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
