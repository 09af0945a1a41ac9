"""Embeddings and the set of trees displayed by a tree-child network."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from . import _kernels
from .canon import canonical_order
from .errors import LabelMismatch, NotTreeChild, TooManyReticulations
from .network import Arc, Network, is_tree_child
from .trees import PhyloTree, tree_from_clusters

DEFAULT_CAP = 24
_CHUNK = 1 << 15


@dataclass(frozen=True)
class Embedding:
    """One in-arc per reticulation; keys are reticulations, values their chosen arc."""

    choice: tuple[tuple[int, Arc], ...]

    @classmethod
    def from_dict(cls, choice: dict) -> Embedding:
        return cls(tuple(sorted((v, tuple(a)) for v, a in choice.items())))

    def as_dict(self) -> dict:
        return dict(self.choice)

    @property
    def used(self) -> frozenset:
        return frozenset(a for _, a in self.choice)

    def uses(self, arc) -> bool:
        return tuple(arc) in self.used


def _require_tree_child(net: Network):
    if not is_tree_child(net):
        raise NotTreeChild("displayed trees are computed for tree-child networks only")


def embedding_to_tree(net: Network, embedding: Embedding | dict) -> PhyloTree:
    """Keep every tree arc plus the chosen reticulation arcs and read off the tree."""
    _require_tree_child(net)
    choice = embedding.as_dict() if isinstance(embedding, Embedding) else dict(embedding)
    if set(choice) != set(net.reticulations):
        raise ValueError("an embedding must choose exactly one arc per reticulation")
    for v, (t, h) in choice.items():
        if h != v or (t, h) not in net.arc_set:
            raise ValueError(f"arc {(t, h)!r} is not an in-arc of {v!r}")
    kept = {a for a in net.tree_arcs} | set(choice.values())
    kids = {v: [] for v in net.vertices}
    for t, h in sorted(kept):
        kids[t].append(h)

    def walk(v):
        # unreachable parts never get visited; single-child vertices are suppressed
        while len(kids[v]) == 1:
            v = kids[v][0]
        if not kids[v]:
            return net.labels[v]
        return (walk(kids[v][0]), walk(kids[v][1]))

    return PhyloTree(walk(net.root))


class _Problem:
    """Array encoding of a network for the enumeration kernel."""

    def __init__(self, net: Network):
        order = canonical_order(net)
        self.reticulations = sorted(net.reticulations, key=order.__getitem__)
        self.in_arcs = [
            tuple((p, v) for p in sorted(net.parents[v], key=order.__getitem__))
            for v in self.reticulations
        ]
        labels = sorted(net.labels.values(), key=lambda s: s.encode("utf-8"))
        self.labels = labels
        bit = {lab: i for i, lab in enumerate(labels)}
        ret_index = {v: i for i, v in enumerate(self.reticulations)}
        verts = list(reversed(net.topological_order))
        idx = {v: i for i, v in enumerate(verts)}
        nv = len(verts)
        self.child = np.full((nv, 2), -1, dtype=np.int64)
        self.cond = np.full((nv, 2), -1, dtype=np.int64)
        self.want = np.zeros((nv, 2), dtype=np.int64)
        self.leafbit = np.zeros(nv, dtype=np.uint64)
        for v in verts:
            i = idx[v]
            if v in net.labels:
                self.leafbit[i] = np.uint64(1) << np.uint64(bit[net.labels[v]])
            for j, c in enumerate(net.children[v]):
                self.child[i, j] = idx[c]
                if c in ret_index:
                    r = ret_index[c]
                    self.cond[i, j] = r
                    self.want[i, j] = self.in_arcs[r].index((v, c))
        self.width = 2 * net.n - 1

    def embedding(self, mask: int) -> Embedding:
        return Embedding.from_dict(
            {
                v: self.in_arcs[r][(mask >> r) & 1]
                for r, v in enumerate(self.reticulations)
            }
        )

    def tree(self, row) -> PhyloTree:
        clusters = []
        for x in row:
            x = int(x)
            clusters.append(frozenset(lab for i, lab in enumerate(self.labels) if x >> i & 1))
        return tree_from_clusters(clusters)


class DisplayResult:
    """Outcome of enumerating all 2^k embeddings of a network.

    ``tree_of_mask[m]`` is the index into ``trees`` of the tree induced by
    choice bitmask ``m`` (bit r set picks the second in-arc of the r-th
    reticulation in canonical order).
    """

    def __init__(self, net, problem, trees, tree_of_mask):
        self.network = net
        self._problem = problem
        self.trees: list[PhyloTree] = trees
        self.tree_of_mask: np.ndarray = tree_of_mask

    def __len__(self):
        return len(self.trees)

    @property
    def reticulations(self) -> list:
        return list(self._problem.reticulations)

    @property
    def in_arcs(self) -> list:
        return list(self._problem.in_arcs)

    @cached_property
    def counts(self) -> np.ndarray:
        return np.bincount(self.tree_of_mask, minlength=len(self.trees))

    @cached_property
    def multiplicities(self) -> dict[str, int]:
        return {t.canonical(): int(c) for t, c in zip(self.trees, self.counts)}

    @property
    def canonical_set(self) -> set[str]:
        return {t.canonical() for t in self.trees}

    def embedding(self, mask: int) -> Embedding:
        return self._problem.embedding(mask)

    def masks_of(self, tree: PhyloTree) -> np.ndarray:
        code = tree.canonical()
        for i, t in enumerate(self.trees):
            if t.canonical() == code:
                return np.flatnonzero(self.tree_of_mask == i)
        return np.array([], dtype=np.int64)

    def arc_bits(self, arc) -> tuple[int, int] | None:
        """(reticulation index, bit value) selecting ``arc``; None for tree arcs."""
        arc = tuple(arc)
        for r, pair in enumerate(self._problem.in_arcs):
            if arc in pair:
                return r, pair.index(arc)
        return None


def _check_cap(net: Network, cap: int):
    if net.k > cap:
        raise TooManyReticulations(f"k={net.k} exceeds the reticulation cap {cap}")


def enumerate_embeddings(net: Network, cap: int = DEFAULT_CAP) -> Iterator[Embedding]:
    _require_tree_child(net)
    _check_cap(net, cap)
    problem = _Problem(net)
    for mask in range(1 << net.k):
        yield problem.embedding(mask)


def displayed_trees(net: Network, cap: int = DEFAULT_CAP) -> DisplayResult:
    """Exact T(N) with per-tree embedding counts."""
    _require_tree_child(net)
    _check_cap(net, cap)
    problem = _Problem(net)
    total = 1 << net.k
    if net.n > 64:
        return _displayed_reference(net, problem)
    index: dict[bytes, int] = {}
    trees: list[PhyloTree] = []
    tree_of_mask = np.empty(total, dtype=np.int32)
    for start in range(0, total, _CHUNK):
        masks = np.arange(start, min(total, start + _CHUNK), dtype=np.uint64)
        rows = _kernels.cluster_rows(
            masks, problem.child, problem.cond, problem.want, problem.leafbit, problem.width
        )
        uniq, inverse = np.unique(rows, axis=0, return_inverse=True)
        local = np.empty(len(uniq), dtype=np.int32)
        for j, row in enumerate(uniq):
            key = row.tobytes()
            if key not in index:
                index[key] = len(trees)
                trees.append(problem.tree(row))
            local[j] = index[key]
        tree_of_mask[start : start + len(masks)] = local[inverse.reshape(-1)]
    return DisplayResult(net, problem, trees, tree_of_mask)


def _displayed_reference(net: Network, problem: _Problem) -> DisplayResult:
    index: dict[str, int] = {}
    trees: list[PhyloTree] = []
    tree_of_mask = np.empty(1 << net.k, dtype=np.int32)
    for mask in range(1 << net.k):
        tree = embedding_to_tree(net, problem.embedding(mask))
        code = tree.canonical()
        if code not in index:
            index[code] = len(trees)
            trees.append(tree)
        tree_of_mask[mask] = index[code]
    return DisplayResult(net, problem, trees, tree_of_mask)


def displayed_trees_reference(net: Network, cap: int = DEFAULT_CAP) -> DisplayResult:
    """Same as :func:`displayed_trees` via explicit tree extraction per embedding."""
    _require_tree_child(net)
    _check_cap(net, cap)
    return _displayed_reference(net, _Problem(net))


def count_displayed(net: Network, cap: int = DEFAULT_CAP) -> int:
    return len(displayed_trees(net, cap))


def embeddings_of(net: Network, tree: PhyloTree, cap: int = DEFAULT_CAP) -> list[Embedding]:
    if tree.leaves != net.label_set:
        raise LabelMismatch("tree and network have different leaf sets")
    result = displayed_trees(net, cap)
    return [result.embedding(int(m)) for m in result.masks_of(tree)]


def _non_essential(result: DisplayResult, arc) -> bool:
    bits = result.arc_bits(arc)
    if bits is None:
        return False
    r, b = bits
    masks = np.arange(len(result.tree_of_mask), dtype=np.int64)
    avoids = ((masks >> r) & 1) != b
    covered = np.zeros(len(result.trees), dtype=bool)
    covered[result.tree_of_mask[avoids]] = True
    return bool(covered.all())


def is_non_essential(net: Network, arc, cap: int = DEFAULT_CAP) -> bool:
    """True iff every displayed tree has an embedding that avoids ``arc``.

    Tree arcs lie in every embedding of a tree-child network, so they are
    always essential.
    """
    arc = tuple(arc)
    if arc not in net.arc_set:
        raise ValueError(f"{arc!r} is not an arc of the network")
    return _non_essential(displayed_trees(net, cap), arc)


def non_essential_arcs(net: Network, cap: int = DEFAULT_CAP) -> list[Arc]:
    result = displayed_trees(net, cap)
    return [a for a in net.reticulation_arcs if _non_essential(result, a)]
