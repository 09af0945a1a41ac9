"""Reticulation-arc deletion with suppression, and tree restriction."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .canon import network_canonical_code
from .errors import (
    ArcVanished,
    InternalAssertionFailed,
    NotReticulationArc,
    NotTreeChild,
    ValidationError,
)
from .network import Arc, Network, is_tree_child, validate
from .trees import restrict_tree  # noqa: F401  (re-exported)


@dataclass(frozen=True)
class DeletionTrace:
    deleted_arc: Arc
    suppressed_vertices: tuple
    root_deleted: bool
    arc_remap: dict = field(default_factory=dict)
    """Original arc -> arc of the result; suppression maps both halves to the merged arc."""


def _suppress(arcs: set, remap: dict, x):
    ins = [a for a in arcs if a[1] == x]
    outs = [a for a in arcs if a[0] == x]
    if len(ins) != 1 or len(outs) != 1:
        raise InternalAssertionFailed(f"vertex {x!r} is not of degree (1, 1)")
    (p, _), (_, c) = ins[0], outs[0]
    merged = (p, c)
    if merged in arcs:
        raise InternalAssertionFailed(f"suppressing {x!r} creates parallel arcs {merged!r}")
    arcs.discard(ins[0])
    arcs.discard(outs[0])
    arcs.add(merged)
    for orig, cur in remap.items():
        if cur == ins[0] or cur == outs[0]:
            remap[orig] = merged


def delete_reticulation_arc(net: Network, arc: Arc) -> tuple[Network, DeletionTrace]:
    """Delete a reticulation arc and tidy up: the operation N \\ e.

    Both endpoints end up with degree (1, 1) and are suppressed, except when
    the tail is the root, which is removed so that its other child becomes
    the new root. The result is checked to be a tree-child network.
    """
    arc = tuple(arc)
    if arc not in net.arc_set or len(net.parents[arc[1]]) != 2:
        raise NotReticulationArc(f"{arc!r} is not a reticulation arc")
    if not is_tree_child(net):
        raise NotTreeChild("arc deletion is defined for tree-child networks")
    u, v = arc
    arcs = set(net.arcs)
    arcs.discard(arc)
    remap = {a: a for a in net.arcs if a != arc}
    _suppress(arcs, remap, v)
    suppressed = [v]
    root = net.root
    root_deleted = u == net.root
    if root_deleted:
        (out,) = [a for a in arcs if a[0] == u]
        arcs.discard(out)
        root = out[1]
        for orig in [o for o, cur in remap.items() if cur == out]:
            del remap[orig]
        removed = {u, v}
    else:
        _suppress(arcs, remap, u)
        suppressed.append(u)
        removed = {u, v}
    vertices = [x for x in net.vertices if x not in removed]
    names = {x: nm for x, nm in net.names.items() if x not in removed}
    try:
        result = validate(vertices, arcs, net.labels, names)
    except ValidationError as exc:
        raise InternalAssertionFailed(f"deleting {arc!r} produced an invalid network: {exc}") from exc
    if result.root != root or not is_tree_child(result):
        raise InternalAssertionFailed(f"deleting {arc!r} did not yield a tree-child network")
    trace = DeletionTrace(arc, tuple(suppressed), root_deleted, remap)
    return result, trace


def _fold(net: Network, arcs: Sequence[Arc]) -> Network:
    current = {a: a for a in net.arcs}
    for want in arcs:
        want = tuple(want)
        if want not in current:
            if want in net.arc_set:
                raise ArcVanished(f"{want!r} no longer exists after earlier deletions")
            raise NotReticulationArc(f"{want!r} is not an arc of the network")
        net, trace = delete_reticulation_arc(net, current[want])
        current = {
            orig: trace.arc_remap[cur]
            for orig, cur in current.items()
            if cur in trace.arc_remap
        }
    return net


def delete_arcs(net: Network, arcs: Sequence[Arc]) -> Network:
    """Delete several reticulation arcs in order, tracking arcs through merges.

    Arcs are named as in the original network; an arc merged by suppression
    is followed to the merged arc.
    """
    arcs = [tuple(a) for a in arcs]
    result = _fold(net, arcs)
    heads = [a[1] for a in arcs]
    if __debug__ and len(arcs) > 1 and len(set(heads)) == len(heads):
        other = _fold(net, list(reversed(arcs)))
        assert network_canonical_code(other) == network_canonical_code(result), (
            "deletion order changed the result"
        )
    return result
