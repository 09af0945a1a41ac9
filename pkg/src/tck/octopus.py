"""The bound t(n, k), tight caterpillar ladders and octopuses."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Sequence, Union

from .errors import (
    BadOrder,
    DuplicateLabel,
    InternalAssertionFailed,
    KIsOne,
    NotTreeChild,
    OutOfRange,
    ParseError,
    SpecInconsistent,
)
from .network import (
    Arc,
    Component,
    Network,
    has_3cycle,
    is_tree_child,
    nontrivial_components,
    validate,
)

# --- the bound ----------------------------------------------------------------


def t_bound(n: int, k: int) -> int:
    """Sharp lower bound on |T(N)| for 3-cycle-free tree-child networks.

    1 for k = 0, 2 for k = 1, 2^(k/2) for even k >= 2 and 3 * 2^((k-3)/2)
    for odd k >= 3, all as exact integers.
    """
    if n < 1 or not 0 <= k <= n - 1:
        raise OutOfRange(f"t(n, k) needs n >= 1 and 0 <= k <= n - 1, got n={n}, k={k}")
    if k == 0:
        return 1
    if k == 1:
        return 2
    if k % 2 == 0:
        return 1 << (k // 2)
    return 3 << ((k - 3) // 2)


@dataclass(frozen=True)
class IdentityCheck:
    identity: str
    n: int
    k: int
    passed: bool


def tnk_identity_suite(n_max: int) -> list[IdentityCheck]:
    """Check the six t(n, k) identities over every admissible (n, k), n <= n_max."""
    if n_max < 5:
        raise OutOfRange("the identity suite needs n_max >= 5")
    t = t_bound
    out = []

    def rec(name, n, k, ok):
        out.append(IdentityCheck(name, n, k, bool(ok)))

    for n in range(1, n_max + 1):
        if n >= 2:
            rec("i", n, 1, t(n, 1) == 2 * t(n, 0))
        if n >= 3:
            rec("i", n, 2, t(n, 2) == 2 * t(n, 0))
        if n >= 4:
            rec(
                "ii",
                n,
                3,
                t(n, 3) == t(n, 2) + t(n, 0) < 2 * t(n, 1) == t(n, 2) + t(n, 1),
            )
            for k in range(2, n - 1):
                rec("iii", n, k, t(n, k) < t(n, k + 1))
            for k in range(3, n):
                rec("iv", n, k, t(n, k) < 4 * t(n, k - 3))
            for k in range(3, n, 2):
                rec("vi", n, k, t(n, k) == t(n, k - 1) + t(n, k - 3))
        if n >= 5:
            for k in range(4, n):
                rec("v", n, k, t(n, k) == 2 * t(n, k - 2) < t(n, k - 1) + t(n, k - 2))
            for k in range(4, n, 2):
                rec("vi", n, k, t(n, k) < t(n, k - 1) + t(n, k - 3))
    return out


# --- ladders ------------------------------------------------------------------

_SPINE = {
    3: ("u'3", "u'2", "u3", "u'1", "u2", "u1"),
    2: ("u'2", "u'1", "u2", "u1"),
}
_RUNG_NAMES = {
    3: (("u1", "v1"), ("u2", "v2"), ("u'1", "v1"), ("u3", "v3"), ("u'2", "v2"), ("u'3", "v3")),
    2: (("u1", "v1"), ("u2", "v2"), ("u'1", "v1"), ("u'2", "v2")),
}


def _core_arcs(order: int) -> list[tuple[str, str]]:
    spine = _SPINE[order]
    return list(zip(spine, spine[1:])) + list(_RUNG_NAMES[order])


def _vertex_names(order: int) -> list[str]:
    return list(_SPINE[order]) + [f"v{i}" for i in range(1, order + 1)]


@dataclass(frozen=True)
class Ladder:
    """A standalone tight caterpillar ladder with its named vertices and ordered rungs."""

    order: int
    network: Network
    vertex: dict
    rungs: tuple[Arc, ...]

    @property
    def first_rung(self) -> Arc:
        return self.rungs[0]

    @property
    def last_rung(self) -> Arc:
        return self.rungs[-1]


def build_tight_ladder(order: int, leaf_labels: Sequence[str] | None = None) -> Ladder:
    """Build the 2- or 3-tight caterpillar ladder on leaves l0, ..., l_order.

    The top spine vertex (u'2 or u'3) is the root.
    """
    if order not in (2, 3):
        raise BadOrder(f"ladders have order 2 or 3, not {order!r}")
    if leaf_labels is None:
        leaf_labels = [f"l{i}" for i in range(order + 1)]
    leaf_labels = list(leaf_labels)
    if len(leaf_labels) != order + 1:
        raise BadOrder(f"an order-{order} ladder has {order + 1} leaves")
    if len(set(leaf_labels)) != len(leaf_labels):
        raise DuplicateLabel(f"repeated label in {leaf_labels}")
    names = _vertex_names(order) + [f"l{i}" for i in range(order + 1)]
    vid = {nm: i for i, nm in enumerate(names)}
    arcs = [(vid[a], vid[b]) for a, b in _core_arcs(order)]
    arcs.append((vid["u1"], vid["l0"]))
    arcs += [(vid[f"v{i}"], vid[f"l{i}"]) for i in range(1, order + 1)]
    labels = {vid[f"l{i}"]: lab for i, lab in enumerate(leaf_labels)}
    net = validate(range(len(names)), arcs, labels, names={i: nm for nm, i in vid.items()})
    rungs = tuple((vid[a], vid[b]) for a, b in _RUNG_NAMES[order])
    return Ladder(order, net, vid, rungs)


@dataclass(frozen=True)
class LadderMatch:
    """An occurrence of a ladder core in a network (arcs map to arcs)."""

    order: int
    vertex: dict
    rungs: tuple[Arc, ...]
    arcs: frozenset

    @property
    def first_rung(self) -> Arc:
        return self.rungs[0]

    @property
    def last_rung(self) -> Arc:
        return self.rungs[-1]

    @property
    def top(self):
        return self.vertex[_SPINE[self.order][0]]


def _core_embeddings(order: int, net: Network, allowed_vertices=None, allowed_arcs=None):
    """Yield every injective map of the order-``order`` core into ``net``."""
    tarcs = _core_arcs(order)
    tnames = _vertex_names(order)
    tchildren = {v: [b for a, b in tarcs if a == v] for v in tnames}
    tparents = {v: [a for a, b in tarcs if b == v] for v in tnames}
    arcset = allowed_arcs if allowed_arcs is not None else net.arc_set
    seq = list(_SPINE[order]) + [f"v{i}" for i in range(1, order + 1)]
    top_candidates = allowed_vertices if allowed_vertices is not None else net.vertices
    mapping: dict = {}
    used: set = set()

    def ok(name, w):
        for c in tchildren[name]:
            if c in mapping and (w, mapping[c]) not in arcset:
                return False
        for p in tparents[name]:
            if p in mapping and (mapping[p], w) not in arcset:
                return False
        return True

    def extend(i):
        if i == len(seq):
            yield dict(mapping)
            return
        name = seq[i]
        if i == 0:
            cands = top_candidates
        else:
            p = tparents[name][0]
            cands = [h for (t, h) in arcset if t == mapping[p]]
        for w in sorted(cands):
            if w in used or not ok(name, w):
                continue
            mapping[name] = w
            used.add(w)
            yield from extend(i + 1)
            used.discard(w)
            del mapping[name]

    yield from extend(0)


def _as_match(order: int, mapping: dict) -> LadderMatch:
    arcs = frozenset((mapping[a], mapping[b]) for a, b in _core_arcs(order))
    rungs = tuple((mapping[a], mapping[b]) for a, b in _RUNG_NAMES[order])
    return LadderMatch(order, dict(mapping), rungs, arcs)


def ladder_core_match(net: Network, component: Component) -> LadderMatch | None:
    """Recognise a 2-connected component that is exactly a 2- or 3-tight core."""
    if component.trivial:
        return None
    comp_arcs = frozenset(component.arcs)
    for order in (2, 3):
        if len(comp_arcs) != len(_core_arcs(order)) or len(component.vertices) != len(
            _vertex_names(order)
        ):
            continue
        for mapping in _core_embeddings(order, net, component.vertices, comp_arcs):
            return _as_match(order, mapping)
    return None


def find_ladders(net: Network) -> list[LadderMatch]:
    """Every 2-/3-tight ladder of ``net``: cores occurring as subgraphs."""
    seen = {}
    for order in (2, 3):
        for mapping in _core_embeddings(order, net):
            m = _as_match(order, mapping)
            seen.setdefault((order, m.arcs), m)
    return [seen[key] for key in sorted(seen, key=lambda k: (k[0], sorted(k[1])))]


# --- octopus specs ----------------------------------------------------------------


@dataclass(frozen=True)
class LadderNode:
    """A ladder hung in a backbone; ``slots`` are the subtrees below l0..l_order."""

    order: int
    slots: tuple


SpecNode = Union[str, tuple, LadderNode]


@dataclass(frozen=True)
class OctopusSpec:
    """Backbone tree in which some vertices are replaced by ladder cores.

    A plain internal vertex is a 2-tuple; a ladder is a :class:`LadderNode`
    whose slots hang below u1 (slot 0) and below each v_i (slot i).
    """

    root: SpecNode
    n: int | None = None
    k: int | None = None
    ladders: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels, ladders = [], []
        _walk_spec(self.root, labels, ladders)
        if len(set(labels)) != len(labels):
            raise SpecInconsistent("leaf labels clash")
        n = len(labels)
        k = sum(ladders)
        if ladders.count(3) > 1:
            raise SpecInconsistent("at most one order-3 ladder is allowed")
        if self.n is not None and self.n != n:
            raise SpecInconsistent(f"spec has {n} leaves, expected {self.n}")
        if self.k is not None and self.k != k:
            raise SpecInconsistent(f"spec has {k} reticulations, expected {self.k}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "ladders", tuple(ladders))


def _walk_spec(node, labels, ladders):
    if isinstance(node, str):
        labels.append(node)
    elif isinstance(node, LadderNode):
        if node.order not in (2, 3) or len(node.slots) != node.order + 1:
            raise SpecInconsistent(f"bad ladder node {node!r}")
        ladders.append(node.order)
        for s in node.slots:
            _walk_spec(s, labels, ladders)
    elif isinstance(node, tuple) and len(node) == 2:
        for s in node:
            _walk_spec(s, labels, ladders)
    else:
        raise SpecInconsistent(f"bad spec node {node!r}")


_TOKEN = re.compile(r"\s*(L2\(|L3\(|\(|\)|,|;|[^\s(),;]+)")


def parse_octopus_spec(text: str) -> OctopusSpec:
    """Parse ``L2(a,b,c)`` / ``L3(a,b,c,d)`` / ``(a,b)`` nested text ending in ``;``."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", 1, pos + 1)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    if not tokens:
        raise ParseError("empty octopus spec", 1, 1)
    i = 0

    def expect(tok):
        nonlocal i
        if i >= len(tokens) or tokens[i][0] != tok:
            where = tokens[i][1] + 1 if i < len(tokens) else len(text) + 1
            raise ParseError(f"expected {tok!r}", 1, where)
        i += 1

    def node():
        nonlocal i
        if i >= len(tokens):
            raise ParseError("unexpected end of spec", 1, len(text) + 1)
        tok, at = tokens[i]
        if tok in ("L2(", "L3(", "("):
            i += 1
            parts = [node()]
            while i < len(tokens) and tokens[i][0] == ",":
                i += 1
                parts.append(node())
            expect(")")
            if tok == "(":
                if len(parts) != 2:
                    raise ParseError("plain vertices need two children", 1, at + 1)
                return tuple(parts)
            order = int(tok[1])
            if len(parts) != order + 1:
                raise ParseError(f"L{order} needs {order + 1} slots", 1, at + 1)
            return LadderNode(order, tuple(parts))
        if tok in (")", ",", ";"):
            raise ParseError(f"unexpected {tok!r}", 1, at + 1)
        i += 1
        return tok

    root = node()
    expect(";")
    if i != len(tokens):
        raise ParseError("trailing input after ';'", 1, tokens[i][1] + 1)
    return OctopusSpec(root)


def format_octopus_spec(spec: OctopusSpec) -> str:
    def fmt(node):
        if isinstance(node, str):
            return node
        if isinstance(node, LadderNode):
            return f"L{node.order}(" + ",".join(fmt(s) for s in node.slots) + ")"
        return "(" + ",".join(fmt(s) for s in node) + ")"

    return fmt(spec.root) + ";"


def build_octopus(spec: OctopusSpec | str) -> Network:
    """Realise a spec as a network and confirm it is recognised as an octopus."""
    if isinstance(spec, str):
        spec = parse_octopus_spec(spec)
    if spec.k == 1:
        raise SpecInconsistent("octopuses never have exactly one reticulation")
    arcs: list[Arc] = []
    labels: dict = {}
    count = 0

    def fresh():
        nonlocal count
        count += 1
        return count - 1

    def build(node):
        if isinstance(node, str):
            v = fresh()
            labels[v] = node
            return v
        if isinstance(node, LadderNode):
            ids = {nm: fresh() for nm in _vertex_names(node.order)}
            arcs.extend((ids[a], ids[b]) for a, b in _core_arcs(node.order))
            arcs.append((ids["u1"], build(node.slots[0])))
            for i in range(1, node.order + 1):
                arcs.append((ids[f"v{i}"], build(node.slots[i])))
            return ids[_SPINE[node.order][0]]
        v = fresh()
        for s in node:
            arcs.append((v, build(s)))
        return v

    build(spec.root)
    net = validate(range(count), arcs, labels)
    if not is_tree_child(net) or has_3cycle(net) or net.k != spec.k:
        raise InternalAssertionFailed("built octopus is not a 3-cycle-free tree-child network")
    if not is_octopus(net):
        raise InternalAssertionFailed("built octopus is not recognised as an octopus")
    return net


@dataclass(frozen=True)
class OctopusReport:
    is_octopus: bool
    vacuous: bool
    ladders: tuple


def octopus_report(net: Network) -> OctopusReport:
    if net.k == 1:
        raise KIsOne("octopuses are defined for k != 1")
    if not is_tree_child(net):
        raise NotTreeChild("octopus recognition needs a tree-child network")
    matches = []
    for comp in nontrivial_components(net):
        m = ladder_core_match(net, comp)
        if m is None:
            return OctopusReport(False, False, tuple(matches))
        matches.append(m)
    orders = [m.order for m in matches]
    if net.k % 2 == 0:
        ok = all(o == 2 for o in orders)
    else:
        ok = orders.count(3) == 1 and orders.count(2) == len(orders) - 1
    return OctopusReport(ok, net.k == 0, tuple(matches))


def is_octopus(net: Network) -> bool:
    """Every non-trivial block is a 2-tight core, plus exactly one 3-tight core if k is odd.

    Trees count as octopuses (vacuously); k = 1 raises :class:`KIsOne`.
    """
    return octopus_report(net).is_octopus


def octopus_spec_of(net: Network) -> OctopusSpec:
    """Decompose a recognised octopus back into its spec."""
    report = octopus_report(net)
    if not report.is_octopus:
        raise SpecInconsistent("network is not an octopus")
    by_top = {m.top: m for m in report.ladders}

    def walk(v):
        if v in net.labels:
            return net.labels[v]
        if v in by_top:
            m = by_top[v]
            core = set(m.vertex.values())
            u1 = m.vertex["u1"]
            (below_u1,) = [c for c in net.children[u1] if c not in core]
            slots = [walk(below_u1)]
            for i in range(1, m.order + 1):
                slots.append(walk(net.children[m.vertex[f"v{i}"]][0]))
            return LadderNode(m.order, tuple(slots))
        a, b = net.children[v]
        return (walk(a), walk(b))

    return OctopusSpec(walk(net.root))


def random_octopus_spec(rng: random.Random, n: int, k: int) -> OctopusSpec:
    """A random octopus layout with ``n`` leaves labelled x1..xn and ``k`` reticulations."""
    if k == 1 or not 0 <= k <= n - 1:
        raise SpecInconsistent(f"no octopus with n={n}, k={k}")
    ops = ["B"] * (n - 1 - k) + ["L2"] * ((k - 3 * (k % 2)) // 2) + ["L3"] * (k % 2)
    rng.shuffle(ops)
    items: list = [f"x{i}" for i in range(1, n + 1)]
    rng.shuffle(items)
    for op in ops:
        arity = {"B": 2, "L2": 3, "L3": 4}[op]
        picked = [items.pop(rng.randrange(len(items))) for _ in range(arity)]
        if op == "B":
            items.append(tuple(picked))
        else:
            items.append(LadderNode(arity - 1, tuple(picked)))
    (root,) = items
    return OctopusSpec(root, n=n, k=k)
