import itertools
import os
import random

import pytest

from deppoly.deptree import DepTree

HERE = os.path.dirname(__file__)
ROOT = os.path.dirname(HERE)

# Reference-value tests need the 20 PUD treebanks plus an original-language
# split mapping on disk; they skip cleanly when the corpus is absent.
PUD_DIR = os.environ.get("DEPPOLY_PUD_DIR", os.path.join(ROOT, "data", "pud"))
PUD_SPLIT = os.environ.get("DEPPOLY_PUD_SPLIT", os.path.join(PUD_DIR, "pud_split.tsv"))


def pud_present():
    if not os.path.isdir(PUD_DIR) or not os.path.exists(PUD_SPLIT):
        return False
    return sum(name.endswith(".conllu") for name in os.listdir(PUD_DIR)) == 20


requires_pud = pytest.mark.skipif(
    not pud_present(),
    reason="PUD treebanks not on disk (set DEPPOLY_PUD_DIR / DEPPOLY_PUD_SPLIT)",
)


def random_tree(rng, n, label_pool, root_label=None):
    """Uniform random parent array; every node i>0 attaches below node <i."""
    parents = [None] + [rng.randrange(i) for i in range(1, n)]
    labels = [rng.choice(label_pool) for _ in range(n)]
    if root_label is not None:
        labels[0] = root_label
    return DepTree.from_parents(labels, parents)


def sentence_like_tree(rng, n):
    """Random tree labeled the way from_sentence labels trees: 35 root-only."""
    pool = [lab for lab in range(1, 38) if lab != 35]
    return random_tree(rng, n, pool, root_label=35)


def all_parent_arrays(n):
    """Every rooted tree on n nodes occurs among these arrays."""
    if n == 1:
        yield (None,)
        return
    for rest in itertools.product(*(range(i) for i in range(1, n))):
        yield (None,) + rest


def shuffled_children(tree, rng):
    """Same tree with every node's child list randomly permuted."""
    children = []
    for kids in tree.children:
        kids = list(kids)
        rng.shuffle(kids)
        children.append(kids)
    return DepTree(tree.labels, children, tree.root)


def conllu_sentence(sent_id, rows, text=None):
    """CoNLL-U block from (id, form, head, deprel) tuples."""
    lines = [f"# sent_id = {sent_id}"]
    if text is not None:
        lines.append(f"# text = {text}")
    for tok_id, form, head, deprel in rows:
        lines.append(
            "\t".join([str(tok_id), form, "_", "_", "_", "_", str(head), deprel, "_", "_"])
        )
    return "\n".join(lines) + "\n"


def write_treebank(path, sentences):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(sentences))


# Five sentences in three synthetic languages with varied structure; the
# same shapes back the matrix, diversity, CLI, and determinism tests.
SYNTH_SHAPES = {
    "aaa": [
        [(1, "w1", 0, "root")],
        [(1, "w1", 2, "nsubj"), (2, "w2", 0, "root"), (3, "w3", 2, "obj")],
        [(1, "w1", 2, "det"), (2, "w2", 3, "nsubj"), (3, "w3", 0, "root")],
        [(1, "w1", 0, "root"), (2, "w2", 1, "punct")],
        [(1, "w1", 2, "amod"), (2, "w2", 0, "root"), (3, "w3", 2, "conj"),
         (4, "w4", 3, "cc")],
    ],
    "bbb": [
        [(1, "w1", 0, "root"), (2, "w2", 1, "nsubj")],
        [(1, "w1", 2, "nsubj"), (2, "w2", 0, "root"), (3, "w3", 2, "iobj")],
        [(1, "w1", 3, "det"), (2, "w2", 3, "nsubj"), (3, "w3", 0, "root")],
        [(1, "w1", 0, "root"), (2, "w2", 1, "punct")],
        [(1, "w1", 0, "root"), (2, "w2", 1, "conj"), (3, "w3", 2, "cc"),
         (4, "w4", 1, "punct")],
    ],
    "ccc": [
        [(1, "w1", 0, "root"), (2, "w2", 1, "obj"), (3, "w3", 2, "amod")],
        [(1, "w1", 2, "advmod"), (2, "w2", 0, "root"), (3, "w3", 2, "obj")],
        [(1, "w1", 2, "case"), (2, "w2", 3, "nmod"), (3, "w3", 0, "root")],
        [(1, "w1", 0, "root")],
        [(1, "w1", 2, "nsubj"), (2, "w2", 0, "root"), (3, "w3", 4, "det"),
         (4, "w4", 2, "obj")],
    ],
}


def build_synth_dataset_dir(base_dir):
    """Write the 3-language, 5-sentence dataset plus its split mapping."""
    sent_ids = [f"s{k:03d}" for k in range(1, 6)]
    for lang, shapes in SYNTH_SHAPES.items():
        sentences = [
            conllu_sentence(sid, rows) for sid, rows in zip(sent_ids, shapes)
        ]
        write_treebank(os.path.join(base_dir, f"{lang}.conllu"), sentences)
    with open(os.path.join(base_dir, "pud_split.tsv"), "w", encoding="utf-8") as handle:
        for sid in sent_ids:
            handle.write(f"{sid}\tENG\n")
    return sent_ids


@pytest.fixture
def synth_dataset_dir(tmp_path):
    build_synth_dataset_dir(tmp_path)
    return tmp_path


class PudSession:
    """Lazily built PUD datasets with memoized term vectors and matrices."""

    def __init__(self):
        from deppoly import ingest

        discovered = ingest.discover_treebanks(PUD_DIR)
        self.files = {
            lang: path
            for lang, path in discovered.items()
            if lang in ingest.LANGUAGE_ORDER
        }
        split = ingest.load_split_mapping(PUD_SPLIT)
        self.datasets = ingest.build_datasets(self.files, split)
        self._vectors = {}
        self._matrices = {}
        self.workers = min(8, os.cpu_count() or 1)

    def vectors(self, name):
        if name not in self._vectors:
            from deppoly import matrices

            self._vectors[name] = matrices.dataset_term_vectors(
                self.datasets[name], workers=self.workers
            )
        return self._vectors[name]

    def language_matrix(self, name):
        if name not in self._matrices:
            from deppoly import matrices

            self._matrices[name] = matrices.language_matrix(
                self.datasets[name], self.vectors(name), workers=self.workers
            )
        return self._matrices[name]


@pytest.fixture(scope="session")
def pud():
    if not pud_present():
        pytest.skip("PUD treebanks not on disk")
    return PudSession()
