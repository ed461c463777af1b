"""Digest-keyed term-vector cache and the shared block text format.

A cache entry holds the canonical term vectors of every sentence in one
treebank file, keyed by the sha256 of the file's bytes; any edit to the
file changes the digest and silently invalidates the entry. Cache hits
are byte-identical to recomputation because the stored form IS the
canonical serialization.
"""

import hashlib
import os

from .polynomial import parse_term_vectors, serialize_term_vectors


def file_digest(path):
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def write_blocks(pairs):
    """Serialize (sent_id, vectors) pairs: `>sent_id` then one 75-int line per term."""
    chunks = []
    for sent_id, vectors in pairs:
        chunks.append(f">{sent_id}\n{serialize_term_vectors(vectors)}\n")
    return "".join(chunks)


def read_blocks(text):
    """Inverse of write_blocks."""
    pairs = []
    sent_id = None
    lines = []
    for line in text.splitlines():
        if line.startswith(">"):
            if sent_id is not None:
                pairs.append((sent_id, parse_term_vectors("\n".join(lines))))
            sent_id = line[1:].strip()
            lines = []
        elif line.strip():
            lines.append(line)
    if sent_id is not None:
        pairs.append((sent_id, parse_term_vectors("\n".join(lines))))
    return pairs


def load(cache_dir, digest):
    """Cached (sent_id, vectors) pairs for a file digest, or None."""
    path = os.path.join(cache_dir, f"{digest}.poly")
    if not os.path.exists(path):
        return None
    with open(path, encoding="utf-8") as handle:
        return read_blocks(handle.read())


def store(cache_dir, digest, pairs):
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, f"{digest}.poly")
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as handle:
        handle.write(write_blocks(pairs))
    os.replace(tmp, path)
