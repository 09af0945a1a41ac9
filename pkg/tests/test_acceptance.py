"""Acceptance criteria 1-10, one printed PASS/FAIL line each."""

import itertools
import json
import random
import time

import pytest

from tck.canon import isomorphic_bruteforce, network_canonical_code
from tck.census import (
    brute_force_generate,
    generate_tree_child,
    run_census,
    tight_lemma_discrepancies,
    verify_deletion_lemmas,
    verify_main_theorem,
    verify_normal_strictness,
)
from tck.display import count_displayed, displayed_trees
from tck.figures import FIG1_SHORTCUT, FIG3_LEFT_SPEC, FIG3_RIGHT_SPEC, fig1_network, fig1_tree
from tck.formats import parse_edgelist, parse_enewick, serialize_edgelist, serialize_enewick
from tck.network import is_normal, shortcuts
from tck.octopus import (
    build_octopus,
    format_octopus_spec,
    is_octopus,
    parse_octopus_spec,
    random_octopus_spec,
    t_bound,
    tnk_identity_suite,
)
from tck.trees import all_trees

from .test_canon import SMALL, scramble, swap_two_labels
from .test_trees import iso_oracle, shuffle_shape

OCTOPUS_SEED = 20261015


def verdict(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\n[acceptance] criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


def test_criterion_01_bound_values(capsys):
    got = [t_bound(9, k) for k in range(9)]
    verdict(capsys, 1, got == [1, 2, 2, 3, 4, 6, 8, 12, 16], f"t(n,k) for k=0..8 is {got}")


def test_criterion_02_identity_suite(capsys):
    start = time.perf_counter()
    checks = tnk_identity_suite(40)
    elapsed = time.perf_counter() - start
    failed = [c for c in checks if not c.passed]
    ok = not failed and elapsed < 1.0 and {c.identity for c in checks} == set("i ii iii iv v vi".split())
    verdict(capsys, 2, ok, f"{len(checks)} identity instances for n <= 40, {len(failed)} failed, {elapsed:.3f}s")


def octopus_sweep():
    rng = random.Random(OCTOPUS_SEED)
    specs = {FIG3_LEFT_SPEC: parse_octopus_spec(FIG3_LEFT_SPEC), FIG3_RIGHT_SPEC: parse_octopus_spec(FIG3_RIGHT_SPEC)}
    for k in [0, 2, 3, 4, 5, 6, 7, 8, 9]:
        for n in range(k + 1, 13):
            for _ in range(2):
                spec = random_octopus_spec(rng, n, k)
                specs.setdefault(format_octopus_spec(spec), spec)
    return specs


def test_criterion_03_octopuses_meet_the_bound(capsys):
    specs = octopus_sweep()
    bad = []
    ks = set()
    for text, spec in specs.items():
        net = build_octopus(spec)
        ks.add(net.k)
        if net.n > 12 or count_displayed(net) != t_bound(net.n, net.k):
            bad.append(text)
    fig3 = [count_displayed(build_octopus(s)) for s in (FIG3_LEFT_SPEC, FIG3_RIGHT_SPEC)]
    ok = not bad and len(specs) >= 50 and fig3 == [12, 12] and ks == {0, 2, 3, 4, 5, 6, 7, 8, 9}
    verdict(capsys, 3, ok, f"{len(specs)} distinct octopus specs, {len(bad)} off the bound, Fig. 3 counts {fig3}")


def test_criterion_04_figure1(capsys):
    net = fig1_network()
    result = displayed_trees(net)
    mult = result.multiplicities.get(fig1_tree().canonical())
    ok = (
        len(result) == 3
        and int(result.counts.sum()) == 4
        and mult == 2
        and not is_octopus(net)
        and shortcuts(net) == [FIG1_SHORTCUT]
    )
    verdict(capsys, 4, ok, f"|T|={len(result)} from {int(result.counts.sum())} embeddings, drawn tree x{mult}")


def test_criterion_05_main_theorem_census(capsys):
    oracle_ok = all(
        {network_canonical_code(x) for x in generate_tree_child(n, k, f)}
        == {network_canonical_code(x) for x in brute_force_generate(n, k, f)}
        for n in range(1, 4)
        for k in range(n)
        for f in (False, True)
    )
    start = time.perf_counter()
    report = verify_main_theorem(4)
    elapsed = time.perf_counter() - start
    ok = oracle_ok and report.ok and elapsed <= 300
    n_nets = sum(c.generated for c in report.cells)
    verdict(
        capsys,
        5,
        ok,
        f"generator == brute force at n <= 3: {oracle_ok}; {n_nets} networks, "
        f"{len(report.violations)} violations, {elapsed:.1f}s",
    )


@pytest.fixture(scope="module")
def census_nets():
    return [net for n in range(1, 5) for k in range(n) for net in generate_tree_child(n, k, True)]


def test_criterion_06_tight_lemma(capsys, census_nets):
    checked = 0
    bad = 0
    for net in census_nets:
        if net.k in (2, 3):
            checked += 1
            bad += bool(tight_lemma_discrepancies(net))
    verdict(capsys, 6, bad == 0 and checked > 0, f"{checked} networks with k in {{2,3}}, {bad} with discrepancies")


def test_criterion_07_deletion_lemmas(capsys, census_nets):
    rng = random.Random(OCTOPUS_SEED)
    octopuses = []
    while len(octopuses) < 100:
        n = rng.randint(3, 12)
        k = rng.choice([k for k in range(min(n, 10)) if k != 1])
        octopuses.append(build_octopus(random_octopus_spec(rng, n, k)))
    instances = [x for net in census_nets + octopuses for x in verify_deletion_lemmas(net)]
    failed = [x for x in instances if not x.passed]
    kinds = {x.lemma for x in instances}
    ok = not failed and kinds == {"tail", "no3cycles"}
    verdict(capsys, 7, ok, f"{len(instances)} lemma instances (seed {OCTOPUS_SEED}), {len(failed)} failed")


def test_criterion_08_normal_strictness(capsys):
    records = verify_normal_strictness(4)
    failed = [r for r in records if not r.passed]
    verdict(capsys, 8, bool(records) and not failed, f"{len(records)} networks with a normal reticulation, {len(failed)} not strict")


def test_criterion_09_normal_is_2_pow_k(capsys, census_nets):
    normal = [net for net in census_nets if is_normal(net)]
    bad = [net for net in normal if count_displayed(net) != 1 << net.k]
    with_ret = sum(1 for net in normal if net.k)
    ok = not bad and with_ret > 0
    verdict(capsys, 9, ok, f"{len(normal)} normal networks ({with_ret} with k >= 1), {len(bad)} with |T| != 2^k")


def test_criterion_10_infrastructure(capsys):
    everything = [net for n in range(1, 5) for k in range(n) for net in generate_tree_child(n, k)]
    roundtrip = all(
        network_canonical_code(parse_enewick(serialize_enewick(net))) == network_canonical_code(net)
        and network_canonical_code(parse_edgelist(serialize_edgelist(net))) == network_canonical_code(net)
        for net in everything
    )

    rng = random.Random(10)
    trees_ok = True
    for n in range(1, 7):
        trees = list(all_trees([f"x{i}" for i in range(n)]))
        pairs = itertools.product(trees, repeat=2) if n <= 5 else zip(trees, trees[1:])
        for a, b in pairs:
            trees_ok &= (a.canonical() == b.canonical()) == iso_oracle(a.shape, b.shape)
        for t in trees:
            trees_ok &= iso_oracle(t.shape, shuffle_shape(t.shape, rng))
    for n in (7, 8):
        for t in itertools.islice(all_trees([f"x{i}" for i in range(n)]), 0, None, 53):
            other = type(t)(shuffle_shape(t.shape, rng))
            trees_ok &= other.canonical() == t.canonical() and iso_oracle(t.shape, other.shape)

    nets_ok = True
    for net in SMALL:
        other = scramble(net, rng)
        nets_ok &= network_canonical_code(other) == network_canonical_code(net) and isomorphic_bruteforce(net, other)
        if net.n >= 2:
            swapped = swap_two_labels(net, rng)
            same = network_canonical_code(swapped) == network_canonical_code(net)
            nets_ok &= same == isomorphic_bruteforce(net, swapped)

    one = json.dumps(run_census(4, jobs=1).to_dict(include_timing=False), sort_keys=True)
    eight = json.dumps(run_census(4, jobs=8).to_dict(include_timing=False), sort_keys=True)
    ok = roundtrip and trees_ok and nets_ok and one == eight
    verdict(
        capsys,
        10,
        ok,
        f"round-trip on {len(everything)} networks: {roundtrip}; tree oracle: {trees_ok}; "
        f"network oracle on {len(SMALL)} networks: {nets_ok}; 1 vs 8 workers identical: {one == eight}",
    )
