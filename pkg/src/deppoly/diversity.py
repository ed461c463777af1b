"""Corpus-level syntax diversity from all pairwise sentence distances.

For one language's corpus inside a dataset, every unordered sentence
pair gets a polynomial distance; the diameter (maximum), exact mean,
and a fixed-width histogram summarize the distribution. Pairs are
streamed, never materialized.
"""

import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .distance import format_distance, polynomial_distance, term_matrix
from .errors import MissingTranslation
from .polynomial import compute_labeled, to_term_vectors


@dataclass
class CorpusStats:
    language: str
    n_sentences: int
    n_pairs: int
    diameter: Fraction
    mean: Fraction
    bin_width: Fraction
    bins: list  # [(lo, hi, count)] contiguous from zero
    # non-headline extras: minimum pair distance and population variance
    minimum: Fraction
    variance: Fraction


def corpus_stats(dataset, language, bin_width=Fraction(1, 2), vectors=None, workers=1):
    """All-pairs distance statistics for one language's corpus."""
    if language not in dataset.languages:
        raise MissingTranslation(f"language {language!r} not in dataset {dataset.name}")
    bin_width = Fraction(bin_width)
    if bin_width <= 0:
        raise ValueError("bin width must be positive")
    sent_ids = dataset.sent_ids
    if vectors is None:
        arrays = [
            term_matrix(to_term_vectors(compute_labeled(dataset.tree(sid, language))))
            for sid in sent_ids
        ]
    else:
        arrays = [vectors[(sid, language)] for sid in sent_ids]

    from .parallel import run_ordered

    partials = run_ordered(
        _row_job, range(len(arrays)), shared=(arrays, bin_width), workers=workers
    )

    n = len(arrays)
    n_pairs = n * (n - 1) // 2
    total = Fraction(0)
    total_sq = Fraction(0)
    counts = Counter()
    diameter = Fraction(0)
    minimum = Fraction(0) if n_pairs == 0 else None
    for part_total, part_sq, part_max, part_min, part_counts in partials:
        total += part_total
        total_sq += part_sq
        counts.update(part_counts)
        if part_max is not None and part_max > diameter:
            diameter = part_max
        if part_min is not None and (minimum is None or part_min < minimum):
            minimum = part_min

    mean = total / n_pairs if n_pairs else Fraction(0)
    variance = total_sq / n_pairs - mean * mean if n_pairs else Fraction(0)
    top = max(counts) if counts else -1
    bins = [
        (k * bin_width, (k + 1) * bin_width, counts.get(k, 0)) for k in range(top + 1)
    ]
    return CorpusStats(
        language=language,
        n_sentences=n,
        n_pairs=n_pairs,
        diameter=diameter,
        mean=mean,
        bin_width=bin_width,
        bins=bins,
        minimum=minimum if minimum is not None else Fraction(0),
        variance=variance,
    )


def _row_job(shared, i):
    arrays, bin_width = shared
    total = Fraction(0)
    total_sq = Fraction(0)
    best_max = None
    best_min = None
    counts = Counter()
    left = arrays[i]
    for j in range(i + 1, len(arrays)):
        d = polynomial_distance(left, arrays[j])
        total += d
        total_sq += d * d
        if best_max is None or d > best_max:
            best_max = d
        if best_min is None or d < best_min:
            best_min = d
        counts[int(d / bin_width)] += 1
    return total, total_sq, best_max, best_min, counts


def stats_to_json(stats, exact=False):
    def number(value):
        if exact:
            frac = Fraction(value)
            return {"num": frac.numerator, "den": frac.denominator}
        return format_distance(value)

    payload = {
        "language": stats.language,
        "n_sentences": stats.n_sentences,
        "n_pairs": stats.n_pairs,
        "diameter": number(stats.diameter),
        "mean": number(stats.mean),
        "bin_width": number(stats.bin_width),
        "bins": [
            {"lo": number(lo), "hi": number(hi), "count": count}
            for lo, hi, count in stats.bins
        ],
        "extras": {
            "minimum": number(stats.minimum),
            "variance": number(stats.variance),
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def stats_to_csv(stats):
    """Tidy rows: scalar summary columns repeated for every histogram bin."""
    header = "language,n_sentences,n_pairs,diameter,mean,bin_lo,bin_hi,count"
    prefix = ",".join(
        [
            stats.language,
            str(stats.n_sentences),
            str(stats.n_pairs),
            format_distance(stats.diameter),
            format_distance(stats.mean),
        ]
    )
    lines = [header]
    if not stats.bins:
        lines.append(prefix + ",,,")
    for lo, hi, count in stats.bins:
        lines.append(f"{prefix},{format_distance(lo)},{format_distance(hi)},{count}")
    return "\n".join(lines) + "\n"
