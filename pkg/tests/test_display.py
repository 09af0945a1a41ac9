import os
import subprocess
import sys

import numpy as np
import pytest

from tck import _kernels
from tck.display import (
    Embedding,
    count_displayed,
    displayed_trees,
    displayed_trees_reference,
    embedding_to_tree,
    embeddings_of,
    enumerate_embeddings,
    is_non_essential,
    non_essential_arcs,
)
from tck.errors import LabelMismatch, NotTreeChild, TooManyReticulations
from tck.figures import fig1_tree
from tck.network import validate
from tck.octopus import build_octopus
from tck.trees import PhyloTree


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    before = _kernels.BACKEND
    _kernels.set_backend(request.param)
    yield request.param
    _kernels.set_backend(before)


def _same(a, b):
    assert a.multiplicities == b.multiplicities
    assert [t.canonical() for t in np.array(a.trees)[a.tree_of_mask]] == [
        t.canonical() for t in np.array(b.trees)[b.tree_of_mask]
    ]


def test_fig1_golden(fig1, backend):
    result = displayed_trees(fig1)
    assert len(result) == 3
    assert int(result.counts.sum()) == 4
    assert result.multiplicities[fig1_tree().canonical()] == 2
    assert result.canonical_set == {
        "((x1,x2),(x3,x4));",
        "(((x2,x3),x4),x1);",
        "(((x3,x4),x2),x1);",
    }


def test_fig1_embeddings_of_drawn_tree(fig1):
    embs = embeddings_of(fig1, fig1_tree())
    assert len(embs) == 2
    for e in embs:
        assert embedding_to_tree(fig1, e) == fig1_tree()
    # x2 must hang below a; either in-arc of v works
    assert all(e.as_dict()[4] == (1, 4) for e in embs)
    assert {e.as_dict()[6] for e in embs} == {(2, 6), (5, 6)}


def test_ladder_multiplicities(ladder2, ladder3, backend):
    r2 = displayed_trees(ladder2.network)
    assert sorted(r2.counts.tolist()) == [1, 3]
    assert r2.multiplicities["((l0,l1),l2);"] == 3
    assert r2.multiplicities["((l0,l2),l1);"] == 1
    r3 = displayed_trees(ladder3.network)
    assert sorted(r3.counts.tolist()) == [2, 2, 4]


def test_backends_agree_with_reference(census_all, fig3, backend):
    for net in census_all[::3] + list(fig3):
        _same(displayed_trees(net), displayed_trees_reference(net))


def test_chunked_enumeration_matches(fig3, monkeypatch):
    import tck.display as display

    whole = displayed_trees(fig3[0])
    monkeypatch.setattr(display, "_CHUNK", 16)
    _same(displayed_trees(fig3[0]), whole)


def test_disable_numba_env_flag():
    code = "from tck import _kernels; print(_kernels.BACKEND)"
    env = dict(os.environ, TCK_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "numpy"


def test_multiplicities_sum_to_2_pow_k(census_all):
    for net in census_all:
        assert int(displayed_trees(net).counts.sum()) == 1 << net.k


def test_normal_networks_display_2_pow_k(census_all):
    from tck.network import is_normal

    hits = 0
    for net in census_all:
        if is_normal(net):
            hits += 1
            assert count_displayed(net) == 1 << net.k
    assert hits > 0


def test_tree_displays_itself():
    t = PhyloTree(((("a", "b"), "c"), ("d", "e")))
    result = displayed_trees(t.to_network())
    assert result.trees == [t]


def test_enumerate_embeddings(fig1):
    embs = list(enumerate_embeddings(fig1))
    assert len(embs) == 4 and len(set(embs)) == 4
    for e in embs:
        assert isinstance(e, Embedding) and len(e.used) == 2


def test_embedding_validation(fig1):
    with pytest.raises(ValueError):
        embedding_to_tree(fig1, {4: (1, 4)})
    with pytest.raises(ValueError):
        embedding_to_tree(fig1, {4: (0, 4), 6: (2, 6)})


def test_errors(fig1):
    with pytest.raises(TooManyReticulations):
        displayed_trees(fig1, cap=1)
    with pytest.raises(LabelMismatch):
        embeddings_of(fig1, PhyloTree(("x1", "x2")))
    arcs = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 5), (5, 4), (5, 8), (3, 6), (4, 7)]
    with pytest.raises(NotTreeChild):
        displayed_trees(validate(range(9), arcs, {6: "a", 7: "b", 8: "c"}))
    with pytest.raises(ValueError):
        is_non_essential(fig1, (0, 9))


def test_non_essential_on_ladders(ladder2, ladder3):
    for ladder in (ladder2, ladder3):
        got = set(non_essential_arcs(ladder.network))
        assert got == {ladder.first_rung, ladder.last_rung}
        for a in ladder.network.tree_arcs:
            assert not is_non_essential(ladder.network, a)


def test_fig1_has_no_non_essential_arcs(fig1):
    assert non_essential_arcs(fig1) == []


def test_fig3_counts(fig3):
    for net in fig3:
        assert (net.n, net.k) == (10, 7)
        assert count_displayed(net) == 12


def test_larger_octopus_all_backends():
    net = build_octopus("L3(L2(x1,x2,x3),L2(x4,x5,x6),L2(x7,x8,x9),x10);")
    assert net.k == 9
    counts = set()
    for name in ("numba", "numpy"):
        _kernels.set_backend(name)
        counts.add(count_displayed(net))
    _kernels.set_backend("numba" if _kernels.HAVE_NUMBA else "numpy")
    assert counts == {3 * 2**3}
