import itertools
import random

import pytest

from tck.canon import canonical_order, isomorphic_bruteforce, network_canonical_code, unlabelled_code
from tck.census import generate_tree_child
from tck.network import Network, validate


def scramble(net: Network, rng: random.Random) -> Network:
    """Same network with vertex ids permuted and arcs listed in random order."""
    ids = list(net.vertices)
    perm = dict(zip(ids, rng.sample(ids, len(ids))))
    arcs = [(perm[t], perm[h]) for t, h in net.arcs]
    rng.shuffle(arcs)
    return validate([perm[v] for v in ids], arcs, {perm[v]: lab for v, lab in net.labels.items()})


def swap_two_labels(net: Network, rng: random.Random) -> Network:
    a, b = rng.sample(sorted(net.label_set), 2)
    mapping = {lab: lab for lab in net.label_set}
    mapping[a], mapping[b] = b, a
    return net.relabel_leaves(mapping)


def small_networks():
    # every tree-child network with at most 12 vertices reachable at n <= 4
    out = []
    for n in range(1, 5):
        for k in range(n):
            for net in generate_tree_child(n, k):
                if len(net.vertices) <= 12:
                    out.append(net)
    return out


SMALL = small_networks()


def test_scrambled_copies_share_the_code():
    rng = random.Random(1)
    for net in SMALL:
        other = scramble(net, rng)
        assert network_canonical_code(other) == network_canonical_code(net)
        assert isomorphic_bruteforce(net, other)


def test_label_swaps_agree_with_oracle():
    rng = random.Random(2)
    for net in SMALL:
        if net.n < 2:
            continue
        other = swap_two_labels(net, rng)
        same = network_canonical_code(other) == network_canonical_code(net)
        assert same == isomorphic_bruteforce(net, other)


@pytest.mark.parametrize("n,k", [(3, 0), (3, 1), (3, 2), (4, 0), (4, 1)])
def test_all_pairs_in_cell_are_distinct(n, k):
    nets = generate_tree_child(n, k)
    codes = [network_canonical_code(x) for x in nets]
    assert len(set(codes)) == len(codes)
    rng = random.Random(n * 10 + k)
    pairs = list(itertools.combinations(nets, 2))
    for a, b in rng.sample(pairs, min(len(pairs), 3000)):
        assert not isomorphic_bruteforce(a, b)


def test_unlabelled_code_ignores_labels():
    rng = random.Random(3)
    for net in SMALL[::3]:
        if net.n >= 2:
            assert unlabelled_code(swap_two_labels(net, rng)) == unlabelled_code(net)


def test_canonical_order_is_a_bijection(fig1):
    order = canonical_order(fig1)
    assert sorted(order.values()) == list(range(len(fig1.vertices)))
