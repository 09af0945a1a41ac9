"""Canonical codes for leaf-labelled networks.

Colour refinement seeded by vertex role, leaf label and the set of labels
below each vertex, followed by individualisation with backtracking over every
vertex of the first non-singleton cell. The smallest certificate over all
branches is the code, so correctness does not depend on refinement being
strong; :func:`isomorphic_bruteforce` is the independent check used in tests.
"""

from __future__ import annotations

from .network import Network

_ROLE_RANK = {"root": 0, "tree": 1, "reticulation": 2, "leaf": 3}


def _label_key(label: str) -> bytes:
    return label.encode("utf-8")


def _reach_labels(net: Network, labelled: bool) -> dict:
    below = {}
    for v in reversed(net.topological_order):
        if v in net.labels:
            below[v] = (_label_key(net.labels[v]),) if labelled else (b"",)
        else:
            acc = set()
            for c in net.children[v]:
                acc.update(below[c])
            below[v] = acc
    if labelled:
        return {v: tuple(sorted(s)) for v, s in below.items()}
    # unlabelled: only the number of leaves below is meaningful
    counts = {}
    for v in reversed(net.topological_order):
        if v in net.labels:
            counts[v] = frozenset([v])
        else:
            counts[v] = frozenset().union(*(counts[c] for c in net.children[v]))
    return {v: len(counts[v]) for v in net.vertices}


def _ranks(keys: dict) -> dict:
    order = {k: i for i, k in enumerate(sorted(set(keys.values())))}
    return {v: order[k] for v, k in keys.items()}


def _refine(net: Network, colour: dict) -> dict:
    ncells = len(set(colour.values()))
    while True:
        keys = {
            v: (
                colour[v],
                tuple(sorted(colour[c] for c in net.children[v])),
                tuple(sorted(colour[p] for p in net.parents[v])),
            )
            for v in net.vertices
        }
        colour = _ranks(keys)
        m = len(set(colour.values()))
        if m == ncells:
            return colour
        ncells = m


def _certificate(net: Network, colour: dict, labelled: bool):
    arcs = tuple(sorted((colour[t], colour[h]) for t, h in net.arcs))
    if labelled:
        leaves = tuple(sorted((colour[v], _label_key(lab)) for v, lab in net.labels.items()))
    else:
        leaves = tuple(sorted(colour[v] for v in net.labels))
    return (len(net.vertices), leaves, arcs)


def _search(net: Network, colour: dict, labelled: bool):
    """Return (certificate, colouring) minimal over the individualisation tree."""
    cells = {}
    for v, c in colour.items():
        cells.setdefault(c, []).append(v)
    target = None
    for c in sorted(cells):
        if len(cells[c]) > 1:
            target = c
            break
    if target is None:
        return _certificate(net, colour, labelled), colour
    best = None
    for v in cells[target]:
        split = {u: (c, 0 if u == v else 1) for u, c in colour.items()}
        cert, final = _search(net, _refine(net, _ranks(split)), labelled)
        if best is None or cert < best[0]:
            best = (cert, final)
    return best


def canonical_form(net: Network, labelled: bool = True):
    """Return (certificate tuple, vertex -> canonical index)."""
    reach = _reach_labels(net, labelled)
    seed = {
        v: (
            _ROLE_RANK[net.roles[v].value],
            _label_key(net.labels[v]) if labelled and v in net.labels else b"",
            reach[v],
        )
        for v in net.vertices
    }
    colour = _refine(net, _ranks(seed))
    cert, final = _search(net, colour, labelled)
    return cert, final


def _encode(cert) -> str:
    nv, leaves, arcs = cert
    if leaves and isinstance(leaves[0], tuple):
        leaf_txt = ",".join(f"{i}={lab.decode('utf-8')!r}" for i, lab in leaves)
    else:
        leaf_txt = ",".join(str(i) for i in leaves)
    arc_txt = ",".join(f"{t}>{h}" for t, h in arcs)
    return f"V{nv}|L{leaf_txt}|A{arc_txt}"


def network_canonical_code(net: Network) -> str:
    """Equal for two networks iff a leaf-label-fixing digraph isomorphism exists."""
    return _code_cached(net)


def unlabelled_code(net: Network) -> str:
    """Canonical code ignoring which label sits on which leaf."""
    cert, _ = canonical_form(net, labelled=False)
    return _encode(cert)


def _code_cached(net: Network) -> str:
    cached = net.__dict__.get("_canonical_code")
    if cached is None:
        cert, order = canonical_form(net, labelled=True)
        cached = _encode(cert)
        net.__dict__["_canonical_code"] = cached
        net.__dict__["_canonical_order"] = order
    return cached


def canonical_order(net: Network) -> dict:
    """Vertex -> canonical index, consistent with :func:`network_canonical_code`."""
    _code_cached(net)
    return net.__dict__["_canonical_order"]


def isomorphic_bruteforce(a: Network, b: Network, labelled: bool = True) -> bool:
    """Exhaustive search for a role-preserving, label-fixing isomorphism."""
    if len(a.vertices) != len(b.vertices) or len(a.arcs) != len(b.arcs):
        return False
    if labelled and a.label_set != b.label_set:
        return False
    if not labelled and a.n != b.n:
        return False
    mapping = {}
    if labelled:
        for v, lab in a.labels.items():
            mapping[v] = b.leaf_by_label[lab]
    order = [v for v in a.vertices if v not in mapping]
    used = set(mapping.values())
    b_arcs = b.arc_set

    def consistent(v):
        w = mapping[v]
        for c in a.children[v]:
            if c in mapping and (w, mapping[c]) not in b_arcs:
                return False
        for p in a.parents[v]:
            if p in mapping and (mapping[p], w) not in b_arcs:
                return False
        return True

    def extend(i):
        if i == len(order):
            return all((mapping[t], mapping[h]) in b_arcs for t, h in a.arcs)
        v = order[i]
        for w in b.vertices:
            if w in used or b.roles[w] is not a.roles[v]:
                continue
            mapping[v] = w
            used.add(w)
            if consistent(v) and extend(i + 1):
                return True
            used.discard(w)
            del mapping[v]
        return False

    return extend(0)
