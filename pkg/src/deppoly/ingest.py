"""CoNLL-U parsing and multi-language parallel dataset assembly.

Only the fields the tree representation needs are kept per token: id,
head, deprel, and the surface form (for diagnostics). Multiword-token
lines (`a-b` ids) and empty-node lines (`a.b` ids) belong to layers the
tree model does not use and are skipped.
"""

import io
import os
import re
from dataclasses import dataclass, field

from . import deptree
from .errors import (
    MalformedLine,
    MissingSentId,
    MissingTranslation,
    NonTreeStructure,
    SplitMismatch,
    UnknownRelation,
)

# Matrix row order used for all language-level outputs: Indo-European
# languages grouped by subclass (Germanic, Italic, Balto-Slavic,
# Indo-Iranian), then the remaining languages alphabetically.
LANGUAGE_ORDER = (
    "eng", "ger", "swe", "ice", "fre", "ita", "por", "spa", "cze", "pol",
    "rus", "hin", "ara", "chi", "fin", "ind", "jpn", "kor", "tha", "tur",
)

SPLIT_NAMES = ("ENG", "GER", "FRE", "ITA", "SPA")

# ISO 639-1 codes used in UD treebank file names -> ISO 639-2/B codes
# used throughout the outputs.
ISO1_TO_ISO2B = {
    "ar": "ara", "cs": "cze", "de": "ger", "en": "eng", "es": "spa",
    "fi": "fin", "fr": "fre", "hi": "hin", "id": "ind", "is": "ice",
    "it": "ita", "ja": "jpn", "ko": "kor", "pl": "pol", "pt": "por",
    "ru": "rus", "sv": "swe", "th": "tha", "tr": "tur", "zh": "chi",
}

_MWT_ID = re.compile(r"^\d+-\d+$")
_EMPTY_ID = re.compile(r"^\d+\.\d+$")
_VERSION_COMMENT = re.compile(r"(?:ud[ _-]?(?:release|version)|release)\s*[=:]\s*(\S+)", re.I)

N_COLUMNS = 10


@dataclass(frozen=True)
class TokenRow:
    """One word line: 1-based id, head id (0 = root), raw deprel, form."""

    id: int
    head: int
    deprel: str
    form: str = "_"


@dataclass(frozen=True)
class SentenceRecord:
    sent_id: str
    language: str
    tokens: tuple

    def __len__(self):
        return len(self.tokens)


@dataclass
class Dataset:
    """Grid of dependency trees indexed by (sentence id, language code)."""

    name: str
    languages: tuple
    sent_ids: tuple
    grid: dict = field(repr=False)

    def tree(self, sent_id, language):
        return self.grid[(sent_id, language)]

    @property
    def n_sentences(self):
        return len(self.sent_ids)


def parse_conllu(source, language, path=None):
    """Parse CoNLL-U text into a list of SentenceRecord.

    `source` may be a str, bytes, or a text/binary file object. Token
    lines must have 10 tab-separated columns; comment lines other than
    `# sent_id` are ignored. Each sentence is validated to be a single
    rooted tree with known relations.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data

    records = []
    sent_id = None
    rows = []

    def flush(line_no):
        nonlocal sent_id, rows
        if not rows and sent_id is None:
            return
        if sent_id is None:
            raise MissingSentId(
                f"{path or '<input>'}: sentence ending at line {line_no} has no sent_id"
            )
        if not rows:
            raise MalformedLine("sentence block has no token lines", path, line_no)
        records.append(_validate_sentence(sent_id, language, rows, path))
        sent_id = None
        rows = []

    line_no = 0
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\n")
        if not line.strip():
            flush(line_no)
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("sent_id"):
                _, _, value = body.partition("=")
                sent_id = value.strip()
            continue
        cols = line.split("\t")
        if len(cols) != N_COLUMNS:
            raise MalformedLine(
                f"expected {N_COLUMNS} tab-separated columns, got {len(cols)}",
                path, line_no,
            )
        raw_id = cols[0]
        if _MWT_ID.match(raw_id) or _EMPTY_ID.match(raw_id):
            continue
        if not raw_id.isdigit() or int(raw_id) < 1:
            raise MalformedLine(f"bad token id {raw_id!r}", path, line_no)
        if not cols[6].isdigit():
            raise MalformedLine(f"bad head {cols[6]!r}", path, line_no)
        deprel = cols[7]
        if not deprel or deprel == "_":
            raise MalformedLine("empty deprel", path, line_no)
        rows.append(TokenRow(id=int(raw_id), head=int(cols[6]), deprel=deprel, form=cols[1]))
    flush(line_no + 1)
    return records


def _validate_sentence(sent_id, language, rows, path):
    ids = [r.id for r in rows]
    id_set = set(ids)
    if len(id_set) != len(ids):
        raise NonTreeStructure(f"{sent_id}: duplicate token ids")
    roots = [r for r in rows if r.head == 0]
    if len(roots) != 1:
        raise NonTreeStructure(
            f"{sent_id}: expected exactly one root token, found {len(roots)}"
        )
    for r in rows:
        if r.head == r.id:
            raise NonTreeStructure(f"{sent_id}: token {r.id} is its own head")
        if r.head != 0 and r.head not in id_set:
            raise NonTreeStructure(f"{sent_id}: token {r.id} has unknown head {r.head}")
        base = deptree.strip_subtype(r.deprel)
        if base not in deptree.RELATION_INDEX:
            raise UnknownRelation(
                f"{path or '<input>'}: {sent_id}: token {r.id} has unknown relation {r.deprel!r}"
            )
    rec = SentenceRecord(sent_id=sent_id, language=language, tokens=tuple(rows))
    # cycle/connectivity detection happens on tree construction
    deptree.from_sentence(rec)
    return rec


def to_conllu_lines(rec):
    """Serialize a record back to minimal CoNLL-U token lines.

    Only the columns the parser consumes (id, form, head, deprel) carry
    data; the rest are `_`. Re-parsing the output yields an identical
    record.
    """
    lines = [f"# sent_id = {rec.sent_id}"]
    for tok in rec.tokens:
        cols = [str(tok.id), tok.form, "_", "_", "_", "_", str(tok.head), tok.deprel, "_", "_"]
        lines.append("\t".join(cols))
    return lines


def parse_conllu_file(path, language):
    with open(path, "rb") as handle:
        return parse_conllu(handle, language, path=str(path))


def read_version_comment(path):
    """Best-effort UD release string from leading comments, else 'unknown'."""
    with io.open(path, encoding="utf-8") as handle:
        for line in handle:
            if not line.startswith("#"):
                break
            match = _VERSION_COMMENT.search(line)
            if match:
                return match.group(1)
    return "unknown"


def language_from_filename(filename):
    """Infer the language code from a treebank file name.

    Accepts `en_pud-ud-test.conllu` style (ISO 639-1 prefix) as well as
    `eng.conllu`; unknown prefixes are kept as-is, lowercased.
    """
    stem = os.path.basename(filename)
    stem = stem[:-len(".conllu")] if stem.endswith(".conllu") else stem
    prefix = re.split(r"[_\-.]", stem, maxsplit=1)[0].lower()
    return ISO1_TO_ISO2B.get(prefix, prefix)


def discover_treebanks(directory):
    """Map language code -> treebank path for every .conllu in a directory."""
    files = {}
    for name in sorted(os.listdir(directory)):
        if not name.endswith(".conllu"):
            continue
        lang = language_from_filename(name)
        if lang in files:
            raise MalformedLine(f"two treebanks resolve to language {lang!r}", directory)
        files[lang] = os.path.join(directory, name)
    return files


def order_languages(codes):
    """Canonical ordering: LANGUAGE_ORDER members first, the rest sorted."""
    known = [c for c in LANGUAGE_ORDER if c in codes]
    extra = sorted(c for c in codes if c not in LANGUAGE_ORDER)
    return tuple(known + extra)


def load_split_mapping(path):
    """Read a two-column `sent_id<TAB>SPLIT` mapping file."""
    mapping = {}
    with io.open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t") if "\t" in line else line.split()
            if len(parts) != 2:
                raise MalformedLine("expected `sent_id<TAB>SPLIT`", path, line_no)
            sent_id, split = parts
            if sent_id in mapping:
                raise SplitMismatch(f"{path}:{line_no}: duplicate sent_id {sent_id!r}")
            mapping[sent_id] = split
    return mapping


def build_datasets(files, split):
    """Assemble one Dataset per split name from parallel treebanks.

    `files` maps language code -> treebank path; `split` maps sent_id ->
    split name. Every sentence id must occur in all languages
    (MissingTranslation) and be covered by the split mapping
    (SplitMismatch).
    """
    languages = order_languages(files.keys())
    per_language = {}
    for lang in languages:
        records = parse_conllu_file(files[lang], lang)
        by_id = {}
        for rec in records:
            if rec.sent_id in by_id:
                raise NonTreeStructure(f"{files[lang]}: duplicate sent_id {rec.sent_id}")
            by_id[rec.sent_id] = rec
        per_language[lang] = by_id

    all_ids = sorted(set().union(*(per_language[lang].keys() for lang in languages)))
    missing = []
    for sent_id in all_ids:
        absent = [lang for lang in languages if sent_id not in per_language[lang]]
        if absent:
            missing.append((sent_id, absent))
    if missing:
        report = "; ".join(f"{sid} missing in {','.join(langs)}" for sid, langs in missing[:20])
        more = "" if len(missing) <= 20 else f" (+{len(missing) - 20} more)"
        raise MissingTranslation(f"incomplete parallel grid: {report}{more}")

    uncovered = [sid for sid in all_ids if sid not in split]
    if uncovered:
        raise SplitMismatch(
            f"{len(uncovered)} sentence ids not covered by the split mapping, "
            f"first: {uncovered[:10]}"
        )

    datasets = {}
    for name in sorted(set(split[sid] for sid in all_ids)):
        ids = tuple(sid for sid in all_ids if split[sid] == name)
        grid = {}
        for sid in ids:
            for lang in languages:
                grid[(sid, lang)] = deptree.from_sentence(per_language[lang][sid])
        datasets[name] = Dataset(name=name, languages=languages, sent_ids=ids, grid=grid)
    return datasets


def build_dataset(files, split, name):
    """Assemble the single Dataset for one split name."""
    datasets = build_datasets(files, split)
    if name not in datasets:
        raise SplitMismatch(
            f"split {name!r} selects no sentences; available: {sorted(datasets)}"
        )
    return datasets[name]
