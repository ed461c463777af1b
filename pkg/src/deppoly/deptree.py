"""Rooted labeled dependency trees with integer relation labels.

Relations are indexed 1..37 in alphabetical order of the universal
dependency relation names; index 35 is the root label. Trees built from
sentences always carry label 35 at the root and nowhere else, but the
data structure itself accepts any labels in 1..37 so that synthetic
trees over small label alphabets can be constructed directly.
"""

from .errors import NonTreeStructure, UnknownRelation

RELATIONS = (
    "acl", "advcl", "advmod", "amod", "appos", "aux", "case", "cc",
    "ccomp", "clf", "compound", "conj", "cop", "csubj", "dep", "det",
    "discourse", "dislocated", "expl", "fixed", "flat", "goeswith",
    "iobj", "list", "mark", "nmod", "nsubj", "nummod", "obj", "obl",
    "orphan", "parataxis", "punct", "reparandum", "root", "vocative",
    "xcomp",
)

RELATION_INDEX = {name: i + 1 for i, name in enumerate(RELATIONS)}

N_RELATIONS = len(RELATIONS)
ROOT_INDEX = RELATION_INDEX["root"]


def strip_subtype(deprel):
    """Drop everything at and after the first ':' and lowercase."""
    return deprel.split(":", 1)[0].lower()


def relation_to_index(deprel):
    """Map a subtype-stripped, lowercase relation name to its index 1..37."""
    try:
        return RELATION_INDEX[deprel]
    except KeyError:
        raise UnknownRelation(f"not a universal relation: {deprel!r}") from None


class DepTree:
    """Immutable rooted tree; node i carries labels[i], children[i].

    Children are stored in construction (token-id) order for reproducible
    traversal; no operation on trees may depend on that order.
    """

    __slots__ = ("labels", "children", "root")

    def __init__(self, labels, children, root):
        self.labels = tuple(labels)
        self.children = tuple(tuple(c) for c in children)
        self.root = root

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return f"DepTree(n={len(self)}, root={self.root})"

    @classmethod
    def from_parents(cls, labels, parents):
        """Build a tree from a parent array (parents[root] is None).

        Validates that the parent references form a single rooted tree.
        """
        n = len(labels)
        if len(parents) != n:
            raise NonTreeStructure("labels and parents differ in length")
        roots = [i for i, p in enumerate(parents) if p is None]
        if len(roots) != 1:
            raise NonTreeStructure(f"expected exactly one root, found {len(roots)}")
        root = roots[0]
        children = [[] for _ in range(n)]
        for i, p in enumerate(parents):
            if p is None:
                continue
            if not 0 <= p < n:
                raise NonTreeStructure(f"node {i} has out-of-range parent {p}")
            children[p].append(i)
        # reachability from the root ensures there is no cycle
        seen = 0
        stack = [root]
        visited = [False] * n
        visited[root] = True
        while stack:
            node = stack.pop()
            seen += 1
            for c in children[node]:
                if visited[c]:
                    raise NonTreeStructure("cycle detected in head references")
                visited[c] = True
                stack.append(c)
        if seen != n:
            raise NonTreeStructure("head references are not connected")
        return cls(labels, children, root)


def from_sentence(rec):
    """Build the DepTree of a parsed sentence record.

    One node per token, edges from each head to its dependents, labels
    via relation_to_index on the subtype-stripped deprel. The root node
    is relabeled to the root index unconditionally.
    """
    ids = [tok.id for tok in rec.tokens]
    pos = {tok_id: i for i, tok_id in enumerate(ids)}
    labels = []
    parents = []
    for tok in rec.tokens:
        labels.append(relation_to_index(strip_subtype(tok.deprel)))
        parents.append(None if tok.head == 0 else pos[tok.head])
    tree = DepTree.from_parents(labels, parents)
    labels = list(tree.labels)
    labels[tree.root] = ROOT_INDEX
    return DepTree(labels, tree.children, tree.root)


def canonical_encoding(tree):
    """Canonical string of a rooted labeled tree.

    Recursive form `(label child-encodings...)` with the child encodings
    sorted lexicographically, so two trees are labeled-isomorphic exactly
    when their encodings are equal. Computed iteratively to stay safe on
    deep chains.
    """
    enc = [None] * len(tree)
    stack = [(tree.root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            parts = sorted(enc[c] for c in tree.children[node])
            enc[node] = f"({tree.labels[node]}" + "".join(parts) + ")"
        else:
            stack.append((node, True))
            for c in tree.children[node]:
                stack.append((c, False))
    return enc[tree.root]
