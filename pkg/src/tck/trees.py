"""Rooted binary phylogenetic trees: canonical forms, clusters, restriction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import (
    DuplicateLabel,
    EmptySubset,
    InternalAssertionFailed,
    TooFewLabels,
    UnknownLabel,
    ValidationError,
)
from .network import Network, validate

Shape = Union[str, tuple]

_SPECIAL = set("(),;:'[] \t\n#")


def format_label(label: str) -> str:
    if any(ch in _SPECIAL for ch in label):
        return "'" + label.replace("'", "''") + "'"
    return label


def _canon(shape: Shape) -> str:
    if isinstance(shape, str):
        return format_label(shape)
    return "(" + ",".join(sorted(_canon(c) for c in shape)) + ")"


def _leaves(shape: Shape) -> list[str]:
    if isinstance(shape, str):
        return [shape]
    out = []
    for c in shape:
        out.extend(_leaves(c))
    return out


@dataclass(frozen=True)
class PhyloTree:
    """A rooted binary phylogenetic tree stored as nested pairs of labels.

    ``shape`` is either a leaf label or a 2-tuple of shapes. Two trees compare
    equal iff they are isomorphic under a label-fixing map.
    """

    shape: Shape

    def __post_init__(self):
        _check_shape(self.shape)

    def __eq__(self, other):
        if not isinstance(other, PhyloTree):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __str__(self):
        return self.canonical()

    @property
    def leaves(self) -> frozenset:
        return frozenset(_leaves(self.shape))

    @property
    def n(self) -> int:
        return len(self.leaves)

    def canonical(self) -> str:
        return _canon(self.shape) + ";"

    def clusters(self) -> set[frozenset]:
        return clusters(self)

    def to_network(self) -> Network:
        vertices, arcs, labels = [], [], {}

        def build(shape):
            v = len(vertices)
            vertices.append(v)
            if isinstance(shape, str):
                labels[v] = shape
            else:
                for c in shape:
                    arcs.append((v, build(c)))
            return v

        build(self.shape)
        return validate(vertices, arcs, labels)


def _check_shape(shape):
    seen = set()
    stack = [shape]
    while stack:
        s = stack.pop()
        if isinstance(s, str):
            if not s:
                raise ValidationError("empty leaf label")
            if s in seen:
                raise DuplicateLabel(f"label {s!r} appears twice")
            seen.add(s)
        elif isinstance(s, tuple) and len(s) == 2:
            stack.extend(s)
        else:
            raise ValidationError(f"tree vertices must have exactly two children: {s!r}")


def tree_canonical(tree: PhyloTree) -> str:
    """Canonical string with children sorted; equal iff isomorphic."""
    return tree.canonical()


def tree_from_network(net: Network) -> PhyloTree:
    if net.k:
        raise ValidationError("network has reticulations")

    def walk(v):
        kids = net.children[v]
        if not kids:
            return net.labels[v]
        return (walk(kids[0]), walk(kids[1]))

    return PhyloTree(walk(net.root))


def clusters(tree: PhyloTree) -> set[frozenset]:
    """Leaf sets of pendant subtrees, one per arc (the full set is excluded)."""
    out = set()

    def walk(shape, is_root):
        leaves = frozenset(_leaves(shape))
        if not is_root:
            out.add(leaves)
        if not isinstance(shape, str):
            for c in shape:
                walk(c, False)

    walk(tree.shape, True)
    return out


def tree_from_clusters(cluster_sets: Iterable[frozenset]) -> PhyloTree:
    """Rebuild a binary tree from its hierarchy (the full leaf set included)."""
    hierarchy = sorted(set(cluster_sets), key=len, reverse=True)
    if not hierarchy:
        raise ValidationError("empty cluster system")
    top = hierarchy[0]

    def build(cluster):
        if len(cluster) == 1:
            return next(iter(cluster))
        maximal = []
        for c in hierarchy:
            if c < cluster and not any(c < m for m in maximal):
                maximal.append(c)
        if len(maximal) != 2 or maximal[0] | maximal[1] != cluster:
            raise InternalAssertionFailed(f"cluster {sorted(cluster)} does not split in two")
        return (build(maximal[0]), build(maximal[1]))

    return PhyloTree(build(top))


def restrict_tree(tree: PhyloTree, subset: Iterable[str]) -> PhyloTree:
    """Minimal connecting subtree of ``subset`` with degree-two vertices suppressed."""
    keep = frozenset(subset)
    if not keep:
        raise EmptySubset("restriction to the empty set")
    unknown = keep - tree.leaves
    if unknown:
        raise UnknownLabel(f"labels not in tree: {sorted(unknown)}")

    def walk(shape):
        if isinstance(shape, str):
            return shape if shape in keep else None
        parts = [p for p in (walk(c) for c in shape) if p is not None]
        if not parts:
            return None
        if len(parts) == 1:
            return parts[0]
        return tuple(parts)

    return PhyloTree(walk(tree.shape))


def _check_labels(labels: Sequence[str]):
    if len(set(labels)) != len(labels):
        raise DuplicateLabel(f"repeated label in {list(labels)}")


def _caterpillar_shape(labels: Sequence[str]) -> Shape:
    shape = labels[0]
    for lab in labels[1:]:
        shape = (shape, lab)
    return shape


def caterpillar(labels: Sequence[str]) -> PhyloTree:
    """The caterpillar ``(x1, x2, ..., xn)``: x1 and x2 form the deepest cherry."""
    labels = list(labels)
    if len(labels) < 2:
        raise TooFewLabels("a caterpillar needs at least two leaves")
    _check_labels(labels)
    return PhyloTree(_caterpillar_shape(labels))


def double_caterpillar(first: Sequence[str], second: Sequence[str]) -> PhyloTree:
    first, second = list(first), list(second)
    if not first or not second:
        raise TooFewLabels("both sides of a double caterpillar need a leaf")
    _check_labels(first + second)
    return PhyloTree((_caterpillar_shape(first), _caterpillar_shape(second)))


def all_trees(labels: Sequence[str]):
    """Yield every rooted binary tree on ``labels`` (each exactly once)."""
    labels = list(labels)
    if len(labels) == 1:
        yield PhyloTree(labels[0])
        return

    def grow(shape, lab):
        # attach lab to every arc of shape, including above the root
        yield (shape, lab)
        if not isinstance(shape, str):
            a, b = shape
            for s in grow(a, lab):
                yield (s, b)
            for s in grow(b, lab):
                yield (a, s)

    shapes = [labels[0]]
    for lab in labels[1:]:
        shapes = [s for shape in shapes for s in grow(shape, lab)]
    for s in shapes:
        yield PhyloTree(s)
