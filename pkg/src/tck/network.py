"""Rooted binary phylogenetic networks and their structural predicates."""

from __future__ import annotations

import enum
from collections import deque
from functools import cached_property
from typing import Hashable, Iterable, Mapping

from .errors import (
    BadDegree,
    DuplicateLabel,
    NotAcyclic,
    NotReticulation,
    NotReticulationArc,
    NotTreeChild,
    ParallelArcs,
    RootError,
    UnlabeledLeaf,
    ValidationError,
)

Arc = tuple[int, int]


class VertexRole(enum.Enum):
    ROOT = "root"
    TREE = "tree"
    RETICULATION = "reticulation"
    LEAF = "leaf"


class ArcKind(enum.Enum):
    TREE = "tree"
    RETICULATION = "reticulation"


def role_from_degree(indeg: int, outdeg: int) -> VertexRole | None:
    if indeg == 0 and outdeg == 2:
        return VertexRole.ROOT
    if indeg == 1 and outdeg == 2:
        return VertexRole.TREE
    if indeg == 2 and outdeg == 1:
        return VertexRole.RETICULATION
    if outdeg == 0 and indeg <= 1:
        return VertexRole.LEAF
    return None


class Network:
    """An immutable rooted binary phylogenetic network.

    Build instances with :func:`validate`; the constructor trusts its input.
    ``names`` optionally maps vertices to display names (file formats use it);
    it never affects equality of structure or canonical codes.
    """

    __slots__ = ("vertices", "arcs", "labels", "root", "names", "__dict__")

    def __init__(self, vertices, arcs, labels, root, names=None):
        self.vertices: tuple = tuple(sorted(vertices))
        self.arcs: tuple[Arc, ...] = tuple(sorted(arcs))
        self.labels: dict = dict(labels)
        self.root = root
        self.names: dict = dict(names) if names else {}

    def __repr__(self):
        return f"Network(n={self.n}, k={self.k}, |V|={len(self.vertices)})"

    @cached_property
    def children(self) -> dict:
        out = {v: [] for v in self.vertices}
        for t, h in self.arcs:
            out[t].append(h)
        return {v: tuple(sorted(c)) for v, c in out.items()}

    @cached_property
    def parents(self) -> dict:
        inc = {v: [] for v in self.vertices}
        for t, h in self.arcs:
            inc[h].append(t)
        return {v: tuple(sorted(p)) for v, p in inc.items()}

    @cached_property
    def roles(self) -> dict:
        return {
            v: role_from_degree(len(self.parents[v]), len(self.children[v]))
            for v in self.vertices
        }

    def role(self, v) -> VertexRole:
        return self.roles[v]

    @cached_property
    def leaves(self) -> tuple:
        return tuple(v for v in self.vertices if not self.children[v])

    @cached_property
    def reticulations(self) -> tuple:
        return tuple(v for v in self.vertices if len(self.parents[v]) == 2)

    @cached_property
    def tree_vertices(self) -> tuple:
        return tuple(v for v in self.vertices if self.roles[v] is VertexRole.TREE)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def k(self) -> int:
        return len(self.reticulations)

    @cached_property
    def leaf_by_label(self) -> dict:
        return {lab: v for v, lab in self.labels.items()}

    @cached_property
    def label_set(self) -> frozenset:
        return frozenset(self.labels.values())

    def arc_kind(self, arc: Arc) -> ArcKind:
        if len(self.parents[arc[1]]) == 2:
            return ArcKind.RETICULATION
        return ArcKind.TREE

    @cached_property
    def reticulation_arcs(self) -> tuple[Arc, ...]:
        return tuple(a for a in self.arcs if len(self.parents[a[1]]) == 2)

    @cached_property
    def tree_arcs(self) -> tuple[Arc, ...]:
        return tuple(a for a in self.arcs if len(self.parents[a[1]]) != 2)

    @cached_property
    def arc_set(self) -> frozenset:
        return frozenset(self.arcs)

    @cached_property
    def topological_order(self) -> tuple:
        order = _topological_order(self.vertices, self.children, self.parents)
        assert order is not None
        return tuple(order)

    @cached_property
    def depth(self) -> dict:
        """Shortest directed distance from the root to every vertex."""
        dist = {self.root: 0}
        queue = deque([self.root])
        while queue:
            v = queue.popleft()
            for c in self.children[v]:
                if c not in dist:
                    dist[c] = dist[v] + 1
                    queue.append(c)
        return dist

    def descendants(self, v) -> set:
        seen = {v}
        stack = [v]
        while stack:
            for c in self.children[stack.pop()]:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return seen

    def name(self, v) -> str:
        if v in self.labels:
            return self.labels[v]
        return self.names.get(v, str(v))

    def relabel_leaves(self, mapping: Mapping[str, str]) -> Network:
        labels = {v: mapping[lab] for v, lab in self.labels.items()}
        return Network(self.vertices, self.arcs, labels, self.root)


def _topological_order(vertices, children, parents):
    indeg = {v: len(parents[v]) for v in vertices}
    queue = deque(sorted(v for v in vertices if indeg[v] == 0))
    order = []
    while queue:
        v = queue.popleft()
        order.append(v)
        for c in children[v]:
            indeg[c] -= 1
            if indeg[c] == 0:
                queue.append(c)
    if len(order) != len(vertices):
        return None
    return order


def validate(
    vertices: Iterable[Hashable],
    arcs: Iterable[tuple[Hashable, Hashable]],
    labels: Mapping[Hashable, str],
    names: Mapping | None = None,
) -> Network:
    """Check the network axioms and return a :class:`Network`.

    Raises the :class:`~tck.errors.ValidationError` subclass naming the first
    violated axiom: parallel arcs, cycles, degrees, root, then labels.
    """
    vertices = list(vertices)
    vset = set(vertices)
    if len(vset) != len(vertices):
        raise ValidationError("duplicate vertex ids")
    if not vset:
        raise RootError("empty graph has no root")
    arcs = [tuple(a) for a in arcs]
    if not all(type(v) is int for v in vset):
        # vertex ids are ints internally; keep the originals as display names
        ids = {v: i for i, v in enumerate(sorted(vset, key=repr))}
        unknown = [x for a in arcs for x in a if x not in ids]
        if unknown:
            raise ValidationError(f"arc references unknown vertex {unknown[0]!r}")
        extra = dict(names or {})
        names = {i: extra.get(v, str(v)) for v, i in ids.items()}
        arcs = [(ids[t], ids[h]) for t, h in arcs]
        labels = {ids.get(v, v): lab for v, lab in dict(labels).items()}
        vset = set(ids.values())
    for t, h in arcs:
        if t not in vset or h not in vset:
            raise ValidationError(f"arc ({t!r}, {h!r}) references an unknown vertex")
        if t == h:
            raise NotAcyclic(f"self-loop at {t!r}")
    if len(set(arcs)) != len(arcs):
        dup = next(a for a in arcs if arcs.count(a) > 1)
        raise ParallelArcs(f"arc {dup!r} appears more than once")

    children = {v: [] for v in vset}
    parents = {v: [] for v in vset}
    for t, h in arcs:
        children[t].append(h)
        parents[h].append(t)
    if _topological_order(sorted(vset, key=repr), children, parents) is None:
        raise NotAcyclic("arc relation contains a directed cycle")

    roots = sorted((v for v in vset if not parents[v]), key=repr)
    if not roots:
        raise RootError("no vertex of in-degree zero")
    if len(roots) > 1:
        raise RootError(f"multiple vertices of in-degree zero: {roots!r}")
    root = roots[0]

    single = len(vset) == 1
    for v in sorted(vset, key=repr):
        indeg, outdeg = len(parents[v]), len(children[v])
        if single:
            break
        if v == root:
            if outdeg != 2:
                raise BadDegree(v, indeg, outdeg)
        elif outdeg == 0:
            if indeg != 1:
                raise BadDegree(v, indeg, outdeg)
        elif (indeg, outdeg) not in ((1, 2), (2, 1)):
            raise BadDegree(v, indeg, outdeg)

    labels = dict(labels)
    seen = {}
    for v, lab in labels.items():
        if v not in vset:
            raise ValidationError(f"label {lab!r} attached to unknown vertex {v!r}")
        if children[v]:
            raise ValidationError(f"label {lab!r} attached to non-leaf {v!r}")
        if not isinstance(lab, str) or not lab:
            raise ValidationError(f"bad label {lab!r}")
        if lab in seen:
            raise DuplicateLabel(f"label {lab!r} used by {seen[lab]!r} and {v!r}")
        seen[lab] = v
    for v in sorted(vset, key=repr):
        if not children[v] and v not in labels:
            raise UnlabeledLeaf(f"leaf {v!r} has no label")
    return Network(vset, arcs, labels, root, names)


# --- predicates -------------------------------------------------------------


def _tree_child_by_definition(net: Network) -> bool:
    for v in net.vertices:
        kids = net.children[v]
        if kids and not any(len(net.parents[c]) < 2 for c in kids):
            return False
    return True


def _tree_child_by_forbidden_patterns(net: Network) -> bool:
    for v in net.vertices:
        ret_kids = [c for c in net.children[v] if len(net.parents[c]) == 2]
        if len(net.parents[v]) == 2 and ret_kids:
            return False
        if len(net.children[v]) == 2 and len(ret_kids) == 2:
            return False
    return True


def is_tree_child(net: Network) -> bool:
    """Every non-leaf vertex has a child that is a tree vertex or a leaf."""
    result = _tree_child_by_definition(net)
    assert result == _tree_child_by_forbidden_patterns(net), "tree-child characterizations disagree"
    return result


def tree_path(net: Network, u) -> list:
    """Directed path from ``u`` to a leaf whose interior avoids reticulations."""
    if not is_tree_child(net):
        raise NotTreeChild("tree paths are only guaranteed in tree-child networks")
    path = [u]
    v = u
    while net.children[v]:
        v = next(c for c in net.children[v] if len(net.parents[c]) < 2)
        path.append(v)
    return path


def _reachable_without(net: Network, src, dst, skip: Arc) -> bool:
    stack = [src]
    seen = {src}
    while stack:
        v = stack.pop()
        for c in net.children[v]:
            if (v, c) == skip or c in seen:
                continue
            if c == dst:
                return True
            seen.add(c)
            stack.append(c)
    return False


def is_shortcut(net: Network, arc: Arc) -> bool:
    arc = tuple(arc)
    if arc not in net.arc_set or len(net.parents[arc[1]]) != 2:
        raise NotReticulationArc(f"{arc!r} is not a reticulation arc")
    return _reachable_without(net, arc[0], arc[1], arc)


def shortcuts(net: Network) -> list[Arc]:
    return [a for a in net.reticulation_arcs if is_shortcut(net, a)]


def is_normal_reticulation(net: Network, v) -> bool:
    if len(net.parents.get(v, ())) != 2:
        raise NotReticulation(f"{v!r} is not a reticulation")
    return not any(is_shortcut(net, (p, v)) for p in net.parents[v])


def is_normal(net: Network) -> bool:
    return is_tree_child(net) and not shortcuts(net)


def underlying_3cycles(net: Network) -> list[tuple[tuple, tuple[Arc, ...]]]:
    """All triangles of the underlying undirected graph, as (vertices, arcs)."""
    adj = {v: set(net.children[v]) | set(net.parents[v]) for v in net.vertices}
    found = []
    for a in net.vertices:
        for b in adj[a]:
            if b <= a:
                continue
            for c in adj[a] & adj[b]:
                if c <= b:
                    continue
                tri = (a, b, c)
                arcs = tuple(
                    sorted(
                        (x, y)
                        for x in tri
                        for y in tri
                        if (x, y) in net.arc_set
                    )
                )
                found.append((tri, arcs))
    if found and is_tree_child(net):
        for _, arcs in found:
            heads = [h for _, h in arcs]
            ret = [a for a in arcs if len(net.parents[a[1]]) == 2]
            assert len(ret) == 2 and ret[0][1] == ret[1][1], "3-cycle without a shared reticulation"
            assert sum(is_shortcut(net, a) for a in ret) == 1, "3-cycle without exactly one shortcut"
            assert len(arcs) - len(ret) == 1 and len(set(heads)) == 2
    return found


def has_3cycle(net: Network) -> bool:
    return bool(underlying_3cycles(net))


class Component:
    """A 2-connected component given by its (directed) arcs."""

    __slots__ = ("arcs", "vertices")

    def __init__(self, arcs):
        self.arcs = tuple(sorted(arcs))
        self.vertices = tuple(sorted({x for a in self.arcs for x in a}))

    @property
    def trivial(self) -> bool:
        return len(self.arcs) == 1

    def __repr__(self):
        kind = "trivial" if self.trivial else "non-trivial"
        return f"Component({kind}, {len(self.arcs)} arcs)"


def biconnected_components(net: Network) -> list[Component]:
    """Hopcroft-Tarjan block decomposition of the underlying undirected graph."""
    adj = {v: [] for v in net.vertices}
    for t, h in net.arcs:
        adj[t].append((h, (t, h)))
        adj[h].append((t, (t, h)))
    disc, low = {}, {}
    comps = []
    edge_stack = []
    timer = 0
    for start in net.vertices:
        if start in disc:
            continue
        disc[start] = low[start] = timer
        timer += 1
        stack = [(start, None, iter(adj[start]))]
        while stack:
            v, via, it = stack[-1]
            advanced = False
            for w, arc in it:
                if arc == via:
                    continue
                if w not in disc:
                    disc[w] = low[w] = timer
                    timer += 1
                    edge_stack.append(arc)
                    stack.append((w, arc, iter(adj[w])))
                    advanced = True
                    break
                if disc[w] < disc[v]:
                    low[v] = min(low[v], disc[w])
                    edge_stack.append(arc)
            if advanced:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[v])
                if low[v] >= disc[p]:
                    block = []
                    while True:
                        arc = edge_stack.pop()
                        block.append(arc)
                        if arc == via:
                            break
                    comps.append(Component(block))
    comps.sort(key=lambda c: c.arcs)
    return comps


def nontrivial_components(net: Network) -> list[Component]:
    return [c for c in biconnected_components(net) if not c.trivial]
