import networkx as nx
import pytest

from tck.errors import (
    BadDegree,
    DuplicateLabel,
    NotAcyclic,
    ParallelArcs,
    RootError,
    UnlabeledLeaf,
    ValidationError,
)
from tck.figures import FIG1_RETICULATIONS, FIG1_SHORTCUT
from tck.network import (
    VertexRole,
    biconnected_components,
    has_3cycle,
    is_normal,
    is_normal_reticulation,
    is_shortcut,
    is_tree_child,
    nontrivial_components,
    shortcuts,
    tree_path,
    underlying_3cycles,
    validate,
)


def cherry():
    return validate([0, 1, 2], [(0, 1), (0, 2)], {1: "a", 2: "b"})


def test_single_vertex_network():
    net = validate([0], [], {0: "x"})
    assert net.n == 1 and net.k == 0 and net.root == 0
    assert is_tree_child(net)


def test_roles_of_cherry():
    net = cherry()
    assert net.roles[0] is VertexRole.ROOT
    assert net.leaves == (1, 2)
    assert net.k == 0


@pytest.mark.parametrize(
    "arcs, labels, exc",
    [
        ([(0, 1), (0, 1)], {1: "a"}, ParallelArcs),
        ([(0, 1), (1, 0), (0, 2)], {2: "a"}, NotAcyclic),
        ([(0, 0)], {}, NotAcyclic),
        ([(0, 1), (0, 2), (3, 4), (3, 5)], {1: "a", 2: "b", 4: "c", 5: "d"}, RootError),
        ([(0, 1), (0, 2), (1, 3)], {2: "b", 3: "c"}, BadDegree),
        ([(0, 1), (0, 2)], {1: "a", 2: "a"}, DuplicateLabel),
        ([(0, 1), (0, 2)], {1: "a"}, UnlabeledLeaf),
    ],
)
def test_validation_errors(arcs, labels, exc):
    vertices = sorted({v for a in arcs for v in a})
    with pytest.raises(exc):
        validate(vertices, arcs, labels)
    assert issubclass(exc, ValidationError)


def test_string_vertex_ids_become_names():
    net = validate(["r", "a", "b"], [("r", "a"), ("r", "b")], {"a": "x1", "b": "x2"})
    assert net.name(net.root) == "r"
    assert net.label_set == {"x1", "x2"}


def test_fig1_structure(fig1):
    assert (fig1.n, fig1.k, len(fig1.vertices)) == (4, 2, 11)
    assert set(fig1.reticulations) == set(FIG1_RETICULATIONS)
    assert is_tree_child(fig1)
    assert shortcuts(fig1) == [FIG1_SHORTCUT]
    assert not is_normal(fig1)
    assert not has_3cycle(fig1)
    assert not is_normal_reticulation(fig1, 6)
    assert is_normal_reticulation(fig1, 4)


def test_tree_path_ends_in_leaf(fig1):
    for v in fig1.vertices:
        if v in fig1.reticulations:
            continue
        path = tree_path(fig1, v)
        assert path[0] == v and path[-1] in fig1.labels
        assert all(len(fig1.parents[x]) < 2 for x in path[1:])


def test_not_tree_child():
    # both children of vertex 1 are reticulations
    arcs = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 5), (5, 4), (5, 8), (3, 6), (4, 7)]
    net = validate(range(9), arcs, {6: "a", 7: "b", 8: "c"})
    assert not is_tree_child(net)


def test_3cycle_in_smallest_reticulated_network(census_all):
    two_leaf = [n for n in census_all if n.n == 2 and n.k == 1]
    assert len(two_leaf) == 2
    for net in two_leaf:
        cycles = underlying_3cycles(net)
        assert len(cycles) == 1
        assert has_3cycle(net)


def test_shortcut_matches_reachability(census_all):
    for net in census_all[::7]:
        g = nx.DiGraph(net.arcs)
        for a in net.reticulation_arcs:
            h = g.copy()
            h.remove_edge(*a)
            assert is_shortcut(net, a) == nx.has_path(h, *a)


def test_blocks_against_networkx(census_all, fig1):
    for net in [fig1] + census_all[::5]:
        if not net.arcs:
            continue
        ours = sorted(sorted(c.arcs) for c in biconnected_components(net))
        g = nx.Graph(net.arcs)
        theirs = []
        for comp in nx.biconnected_component_edges(g):
            arcs = {a for a in net.arcs if a in comp or a[::-1] in comp}
            theirs.append(sorted(arcs))
        assert ours == sorted(theirs)


def test_fig1_has_one_block(fig1):
    blocks = nontrivial_components(fig1)
    assert len(blocks) == 1 and len(blocks[0].arcs) == 8


def test_relabel_leaves_keeps_shape(fig1):
    moved = fig1.relabel_leaves({"x1": "x4", "x2": "x3", "x3": "x2", "x4": "x1"})
    assert moved.label_set == fig1.label_set
    assert moved.labels[7] == "x4"
