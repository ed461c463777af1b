"""Command-line interface.

Commands: poly, dist, matrix, summary, cluster, mds, diversity,
extremes, pipeline. All dataset commands share --dataset-dir, --split,
--split-file, --langs, --workers, --cache-dir; emission is rounded to 2
decimals (half-up) unless --exact asks for rationals. Exit codes:
0 success, 1 input error, 2 internal invariant violation.
"""

import argparse
import datetime
import json
import os
import sys
from fractions import Fraction

from . import __version__, cache, ingest, matrices
from .distance import format_distance, polynomial_distance, term_matrix
from .diversity import corpus_stats, stats_to_csv, stats_to_json
from .errors import DeppolyError, MissingTranslation
from .polynomial import compute_labeled, to_term_vectors
from .typology import classical_mds, embedding_to_csv, to_newick, upgma

CACHE_ENV = "DEPPOLY_CACHE_DIR"


class _Parser(argparse.ArgumentParser):
    # usage problems are input errors: exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        raise DeppolyError(message)


def build_parser():
    parser = _Parser(prog="deppoly", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    poly = sub.add_parser("poly", help="term vectors of every sentence in a treebank")
    poly.add_argument("input", help="CoNLL-U file")
    poly.add_argument("-o", "--output", help="output path (default stdout)")
    poly.add_argument("--lang", default=None, help="language code (default: from filename)")

    dist = sub.add_parser("dist", help="distance between two dependency trees")
    dist.add_argument("file_a")
    dist.add_argument("file_b")
    dist.add_argument("--sent-id-a", help="sentence to pick from file_a")
    dist.add_argument("--sent-id-b", help="sentence to pick from file_b")
    dist.add_argument("--exact", action="store_true", help="print an exact rational")

    for name, description in [
        ("matrix", "language distance matrix (or one sentence's translation matrix)"),
        ("summary", "summary of the language distance matrix"),
        ("cluster", "UPGMA dendrogram as Newick"),
        ("mds", "classical MDS embedding as CSV"),
        ("diversity", "per-language corpus diversity"),
        ("extremes", "sentences with minimal/maximal distance between two languages"),
        ("pipeline", "all artifacts for one dataset split"),
    ]:
        cmd = sub.add_parser(name, help=description)
        cmd.add_argument("--dataset-dir", required=True, help="directory of .conllu treebanks")
        cmd.add_argument("--split", required=True, choices=ingest.SPLIT_NAMES)
        cmd.add_argument("--split-file", default=None,
                         help="sent_id<TAB>SPLIT mapping (default: <dataset-dir>/pud_split.tsv)")
        cmd.add_argument("--langs", default=None,
                         help="comma-separated language codes to restrict to")
        cmd.add_argument("--workers", type=int, default=1)
        cmd.add_argument("--cache-dir", default=None,
                         help=f"polynomial cache directory (default: ${CACHE_ENV})")
        if name in ("matrix", "summary", "diversity", "extremes"):
            cmd.add_argument("--exact", action="store_true",
                             help="emit exact numerator/denominator values (JSON)")
        if name in ("matrix", "diversity"):
            cmd.add_argument("--format", choices=("csv", "json"), default="csv")
        if name == "matrix":
            cmd.add_argument("--sent-id", default=None,
                             help="emit this sentence's translation matrix instead")
        if name == "diversity":
            cmd.add_argument("--bin-width", default="0.5", help="histogram bin width")
        if name == "extremes":
            cmd.add_argument("--lang-a", required=True)
            cmd.add_argument("--lang-b", required=True)
        if name == "pipeline":
            cmd.add_argument("--bin-width", default="0.5", help="histogram bin width")
            cmd.add_argument("--out-dir", required=True)
            cmd.add_argument("--no-figures", action="store_true",
                             help="skip SVG figure rendering")
        elif name in ("cluster", "mds"):
            cmd.add_argument("-o", "--output", help="output path (default stdout)")
            cmd.add_argument("--figure", default=None, help="also render an SVG here")
        else:
            cmd.add_argument("-o", "--output", help="output path (default stdout)")
    return parser


def _emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _load_treebanks(args):
    files = ingest.discover_treebanks(args.dataset_dir)
    if args.langs:
        wanted = [code.strip() for code in args.langs.split(",") if code.strip()]
        missing = [code for code in wanted if code not in files]
        if missing:
            raise MissingTranslation(
                f"no treebank for requested language(s): {', '.join(missing)}"
            )
        files = {code: files[code] for code in wanted}
    if not files:
        raise MissingTranslation(f"no .conllu files in {args.dataset_dir}")
    return files


def _load_dataset(args):
    files = _load_treebanks(args)
    split_path = args.split_file or os.path.join(args.dataset_dir, "pud_split.tsv")
    split_map = ingest.load_split_mapping(split_path)
    dataset = ingest.build_dataset(files, split_map, args.split)
    return files, dataset


def _dataset_vectors(args, files, dataset):
    """Term-vector matrices per (sent_id, language), cache-aware."""
    cache_dir = args.cache_dir or os.environ.get(CACHE_ENV)
    if not cache_dir:
        return matrices.dataset_term_vectors(dataset, workers=args.workers)
    from .parallel import run_ordered

    vectors = {}
    for lang in dataset.languages:
        digest = cache.file_digest(files[lang])
        pairs = cache.load(cache_dir, digest)
        if pairs is None:
            records = ingest.parse_conllu_file(files[lang], lang)
            vector_lists = run_ordered(
                _record_vectors, records, workers=args.workers
            )
            pairs = list(zip((rec.sent_id for rec in records), vector_lists))
            cache.store(cache_dir, digest, pairs)
        by_id = dict(pairs)
        for sid in dataset.sent_ids:
            vectors[(sid, lang)] = term_matrix(by_id[sid])
    return vectors


def _record_vectors(_shared, rec):
    from .deptree import from_sentence

    return to_term_vectors(compute_labeled(from_sentence(rec)))


def cmd_poly(args):
    language = args.lang or ingest.language_from_filename(args.input)
    records = ingest.parse_conllu_file(args.input, language)
    from .deptree import from_sentence

    pairs = [
        (rec.sent_id, to_term_vectors(compute_labeled(from_sentence(rec))))
        for rec in records
    ]
    _emit(cache.write_blocks(pairs), args.output)


def _pick_sentence(path, sent_id):
    records = ingest.parse_conllu_file(path, ingest.language_from_filename(path))
    if sent_id is None:
        if len(records) != 1:
            raise DeppolyError(
                f"{path} has {len(records)} sentences; pick one with --sent-id-a/--sent-id-b"
            )
        return records[0]
    for rec in records:
        if rec.sent_id == sent_id:
            return rec
    raise MissingTranslation(f"{path}: no sentence {sent_id!r}")


def cmd_dist(args):
    from .deptree import from_sentence

    rec_a = _pick_sentence(args.file_a, args.sent_id_a)
    rec_b = _pick_sentence(args.file_b, args.sent_id_b)
    d = polynomial_distance(
        to_term_vectors(compute_labeled(from_sentence(rec_a))),
        to_term_vectors(compute_labeled(from_sentence(rec_b))),
    )
    if args.exact:
        print(f"{d.numerator}/{d.denominator}")
    else:
        print(format_distance(d))


def cmd_matrix(args):
    files, dataset = _load_dataset(args)
    vectors = _dataset_vectors(args, files, dataset)
    if args.sent_id:
        matrix = matrices.translation_matrix(dataset, args.sent_id, vectors)
    else:
        matrix = matrices.language_matrix(dataset, vectors, workers=args.workers)
    if args.format == "json":
        _emit(matrices.matrix_to_json(matrix, exact=args.exact), args.output)
    else:
        _emit(matrices.matrix_to_csv(matrix), args.output)


def cmd_summary(args):
    files, dataset = _load_dataset(args)
    vectors = _dataset_vectors(args, files, dataset)
    matrix = matrices.language_matrix(dataset, vectors, workers=args.workers)
    summary = matrices.summarize(matrix)
    _emit(
        matrices.summary_to_json(summary, dataset.name, dataset.n_sentences, exact=args.exact),
        args.output,
    )


def cmd_cluster(args):
    files, dataset = _load_dataset(args)
    vectors = _dataset_vectors(args, files, dataset)
    matrix = matrices.language_matrix(dataset, vectors, workers=args.workers)
    dendrogram = upgma(matrix)
    _emit(to_newick(dendrogram) + "\n", args.output)
    if args.figure:
        from . import figures

        figures.save_dendrogram(dendrogram, args.figure)


def cmd_mds(args):
    files, dataset = _load_dataset(args)
    vectors = _dataset_vectors(args, files, dataset)
    matrix = matrices.language_matrix(dataset, vectors, workers=args.workers)
    embedding = classical_mds(matrix)
    _emit(embedding_to_csv(embedding), args.output)
    if args.figure:
        from . import figures

        figures.save_mds(embedding, args.figure)


def cmd_diversity(args):
    files, dataset = _load_dataset(args)
    vectors = _dataset_vectors(args, files, dataset)
    width = Fraction(args.bin_width)
    chunks = []
    for lang in dataset.languages:
        stats = corpus_stats(dataset, lang, bin_width=width, vectors=vectors,
                             workers=args.workers)
        if args.format == "json":
            chunks.append(stats_to_json(stats, exact=args.exact))
        else:
            chunks.append(stats_to_csv(stats))
    _emit("".join(chunks), args.output)


def cmd_extremes(args):
    files, dataset = _load_dataset(args)
    vectors = _dataset_vectors(args, files, dataset)
    report = matrices.extreme_sentences(dataset, args.lang_a, args.lang_b, vectors)

    def value(v):
        return f"{v.numerator}/{v.denominator}" if args.exact else format_distance(v)

    lines = [
        f"dataset {dataset.name}: {report.lang_a} vs {report.lang_b}",
        f"min {value(report.min_distance)} at {report.min_sent_id}"
        + (f" (ties: {', '.join(report.min_ties)})" if len(report.min_ties) > 1 else ""),
        f"max {value(report.max_distance)} at {report.max_sent_id}"
        + (f" (ties: {', '.join(report.max_ties)})" if len(report.max_ties) > 1 else ""),
    ]
    _emit("\n".join(lines) + "\n", args.output)


def cmd_pipeline(args):
    files, dataset = _load_dataset(args)
    vectors = _dataset_vectors(args, files, dataset)
    out_dir = args.out_dir
    os.makedirs(out_dir, exist_ok=True)

    matrix = matrices.language_matrix(dataset, vectors, workers=args.workers)
    _write(out_dir, "language_matrix.csv", matrices.matrix_to_csv(matrix))

    summary = matrices.summarize(matrix)
    _write(out_dir, "summary.json",
           matrices.summary_to_json(summary, dataset.name, dataset.n_sentences))

    dendrogram = upgma(matrix)
    _write(out_dir, "dendrogram.nwk", to_newick(dendrogram) + "\n")

    embedding = classical_mds(matrix)
    _write(out_dir, "mds.csv", embedding_to_csv(embedding))

    width = Fraction(args.bin_width)
    all_stats = []
    for lang in dataset.languages:
        stats = corpus_stats(dataset, lang, bin_width=width, vectors=vectors,
                             workers=args.workers)
        all_stats.append(stats)
        _write(out_dir, f"diversity_{lang}.json", stats_to_json(stats))

    if not args.no_figures:
        from . import figures

        fig_dir = os.path.join(out_dir, "figures")
        os.makedirs(fig_dir, exist_ok=True)
        figures.save_heatmap(matrix, os.path.join(fig_dir, "language_matrix.svg"))
        figures.save_dendrogram(dendrogram, os.path.join(fig_dir, "dendrogram.svg"))
        figures.save_mds(embedding, os.path.join(fig_dir, "mds.svg"))
        for stats in all_stats:
            figures.save_histogram(
                stats, os.path.join(fig_dir, f"diversity_{stats.language}.svg")
            )

    metadata = {
        "tool": {"name": "deppoly", "version": __version__},
        "dataset": dataset.name,
        "languages": list(dataset.languages),
        "n_sentences": dataset.n_sentences,
        "treebanks": {
            lang: {
                "path": os.path.basename(files[lang]),
                "sha256": cache.file_digest(files[lang]),
                "ud_version": ingest.read_version_comment(files[lang]),
            }
            for lang in dataset.languages
        },
        "policies": {
            "relation_subtypes": "stripped before indexing",
            "rounding": "half-up to 2 decimals at emission",
            "negative_mds_eigenvalues_clamped": embedding.negative_clamped,
        },
        "bin_width": str(width),
        "max_term_count": max(arr.shape[0] for arr in vectors.values()),
        "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    _write(out_dir, "metadata.json", json.dumps(metadata, indent=2, sort_keys=True) + "\n")


def _write(out_dir, name, text):
    with open(os.path.join(out_dir, name), "w", encoding="utf-8") as handle:
        handle.write(text)


_COMMANDS = {
    "poly": cmd_poly,
    "dist": cmd_dist,
    "matrix": cmd_matrix,
    "summary": cmd_summary,
    "cluster": cmd_cluster,
    "mds": cmd_mds,
    "diversity": cmd_diversity,
    "extremes": cmd_extremes,
    "pipeline": cmd_pipeline,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _COMMANDS[args.command](args)
    except DeppolyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # anything else is an internal invariant violation
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
