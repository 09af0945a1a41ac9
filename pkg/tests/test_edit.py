import random

import pytest

from tck.canon import network_canonical_code
from tck.display import displayed_trees, embedding_to_tree
from tck.edit import delete_arcs, delete_reticulation_arc
from tck.errors import NotReticulationArc, NotTreeChild
from tck.figures import FIG1_SHORTCUT
from tck.network import is_tree_child, validate


def test_delete_shortcut_of_fig1(fig1):
    result, trace = delete_reticulation_arc(fig1, FIG1_SHORTCUT)
    assert (result.n, result.k) == (4, 1)
    assert trace.deleted_arc == FIG1_SHORTCUT
    assert set(trace.suppressed_vertices) == set(FIG1_SHORTCUT)
    assert not trace.root_deleted
    assert is_tree_child(result)
    assert len(result.vertices) == len(fig1.vertices) - 2


def test_tree_arc_is_rejected(fig1):
    with pytest.raises(NotReticulationArc):
        delete_reticulation_arc(fig1, (0, 1))
    with pytest.raises(NotReticulationArc):
        delete_reticulation_arc(fig1, (7, 8))


def test_non_tree_child_is_rejected():
    arcs = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 5), (5, 4), (5, 8), (3, 6), (4, 7)]
    net = validate(range(9), arcs, {6: "a", 7: "b", 8: "c"})
    with pytest.raises(NotTreeChild):
        delete_reticulation_arc(net, (1, 3))


def test_root_tail_deletion(census_all):
    two_leaf = [n for n in census_all if n.n == 2 and n.k == 1][0]
    (root_arc,) = [a for a in two_leaf.reticulation_arcs if a[0] == two_leaf.root]
    result, trace = delete_reticulation_arc(two_leaf, root_arc)
    assert trace.root_deleted
    assert result.k == 0 and result.n == 2
    assert displayed_trees(result).canonical_set <= displayed_trees(two_leaf).canonical_set


def test_deletion_splits_displayed_trees(census_all):
    # T(N) is the union over the two in-arcs of any reticulation of T(N \ e)
    for net in census_all:
        if net.k == 0 or net.n > 4:
            continue
        whole = displayed_trees(net).canonical_set
        for r in net.reticulations:
            parts = []
            for p in net.parents[r]:
                reduced, _ = delete_reticulation_arc(net, (p, r))
                assert reduced.k == net.k - 1 and reduced.label_set == net.label_set
                parts.append(displayed_trees(reduced).canonical_set)
            assert parts[0] | parts[1] == whole


def test_delete_arcs_is_order_independent(census_all):
    rng = random.Random(5)
    for net in census_all:
        if net.k < 2:
            continue
        rets = list(net.reticulations)
        rng.shuffle(rets)
        chosen = [(rng.choice(net.parents[r]), r) for r in rets]
        a = delete_arcs(net, chosen)
        b = delete_arcs(net, list(reversed(chosen)))
        assert network_canonical_code(a) == network_canonical_code(b)
        assert a.k == 0
        # deleting the unchosen in-arcs leaves exactly the embedded tree
        kept = {r: next(p for p in net.parents[r] if (p, r) not in chosen) for r in rets}
        tree = embedding_to_tree(net, {r: (p, r) for r, p in kept.items()})
        assert displayed_trees(a).trees == [tree]


def test_delete_both_in_arcs_fails(fig1):
    with pytest.raises(NotReticulationArc):
        delete_arcs(fig1, [(1, 4), (3, 4)])
