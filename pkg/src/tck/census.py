"""Exhaustive census of small tree-child networks and machine checks of the bound.

Networks are grown by reversing cherry reductions: from a single leaf,
repeatedly hang a new leaf next to an existing one (cherry) or join two
existing leaves by a new reticulation (reticulated cherry). Intermediate
levels are deduplicated up to unlabelled isomorphism; the final level is
expanded over all leaf labellings and deduplicated with the labelled code.
:func:`brute_force_generate` is an independent oracle for n <= 3.
"""

from __future__ import annotations

import itertools
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

from .canon import network_canonical_code, unlabelled_code
from .display import _non_essential, displayed_trees
from .edit import delete_reticulation_arc
from .errors import ScaleExceeded, ValidationError
from .formats import serialize_enewick
from .network import (
    Network,
    has_3cycle,
    is_normal,
    is_normal_reticulation,
    is_tree_child,
    underlying_3cycles,
    validate,
)
from .octopus import find_ladders, is_octopus, t_bound

log = logging.getLogger(__name__)

MAX_LEAVES = 5
ORACLE_MAX_LEAVES = 3


def _labels(n: int) -> list[str]:
    return [f"x{i}" for i in range(1, n + 1)]


def _single_leaf() -> Network:
    return Network([0], [], {0: "x1"}, 0)


def _add_cherry(net: Network, leaf, label: str) -> Network:
    p, y = len(net.vertices), len(net.vertices) + 1
    labels = dict(net.labels)
    labels[y] = label
    if not net.arcs:
        return Network([leaf, p, y], [(p, leaf), (p, y)], labels, p)
    (q,) = net.parents[leaf]
    arcs = [a for a in net.arcs if a != (q, leaf)]
    arcs += [(q, p), (p, leaf), (p, y)]
    return Network(list(net.vertices) + [p, y], arcs, labels, net.root)


def _add_reticulated_cherry(net: Network, x, y) -> Network:
    # x gets a reticulation above it, fed by a new vertex above y
    r, p = len(net.vertices), len(net.vertices) + 1
    (qx,) = net.parents[x]
    (qy,) = net.parents[y]
    arcs = [a for a in net.arcs if a not in ((qx, x), (qy, y))]
    arcs += [(qx, r), (r, x), (qy, p), (p, y), (p, r)]
    return Network(list(net.vertices) + [r, p], arcs, net.labels, net.root)


@lru_cache(maxsize=None)
def _unlabelled_level(m: int, j: int) -> tuple[Network, ...]:
    """Tree-child networks with m leaves and j reticulations, one per unlabelled class."""
    if m < 1 or j < 0 or j > m - 1:
        return ()
    if m == 1:
        return (_single_leaf(),)
    found: dict[str, Network] = {}
    for net in _unlabelled_level(m - 1, j):
        for leaf in net.leaves:
            child = _add_cherry(net, leaf, f"x{m}")
            found.setdefault(unlabelled_code(child), child)
    for net in _unlabelled_level(m, j - 1):
        for x in net.leaves:
            for y in net.leaves:
                if x != y:
                    child = _add_reticulated_cherry(net, x, y)
                    if is_tree_child(child):
                        found.setdefault(unlabelled_code(child), child)
    return tuple(found[c] for c in sorted(found))


def _labellings(net: Network, labels: list[str]) -> dict[str, Network]:
    out = {}
    current = sorted(net.labels.values())
    for perm in itertools.permutations(labels):
        relabelled = net.relabel_leaves(dict(zip(current, perm)))
        out.setdefault(network_canonical_code(relabelled), relabelled)
    return out


def _check_scale(n: int, k: int, limit: int):
    if n > limit:
        raise ScaleExceeded(f"n={n} exceeds the configured maximum {limit}")
    if n < 1 or not 0 <= k <= n - 1:
        raise ScaleExceeded(f"no tree-child network has n={n}, k={k}")


def generate_tree_child(
    n: int, k: int, forbid_3cycles: bool = False, max_leaves: int = MAX_LEAVES
) -> list[Network]:
    """All tree-child networks on x1..xn with k reticulations, one per labelled class.

    Returned in canonical-code order.
    """
    _check_scale(n, k, max_leaves)
    found: dict[str, Network] = {}
    for rep in _unlabelled_level(n, k):
        for code, net in _labellings(rep, _labels(n)).items():
            found.setdefault(code, net)
    nets = [found[c] for c in sorted(found)]
    if forbid_3cycles:
        nets = [net for net in nets if not has_3cycle(net)]
    return nets


def brute_force_generate(n: int, k: int, forbid_3cycles: bool = False) -> list[Network]:
    """Independent oracle: every digraph on the forced vertex multiset, filtered.

    Vertex multiset: a root, n + k - 2 further tree vertices, k reticulations
    and n leaves. Each non-leaf vertex picks its children; whatever survives
    validation and the tree-child test is deduplicated by canonical code.
    """
    if n > ORACLE_MAX_LEAVES:
        raise ScaleExceeded(f"brute force is limited to n <= {ORACLE_MAX_LEAVES}")
    _check_scale(n, k, ORACLE_MAX_LEAVES)
    labels = _labels(n)
    if n == 1:
        return [validate([0], [], {0: "x1"})]
    n_tree = n + k - 2
    root = 0
    tree = list(range(1, 1 + n_tree))
    rets = list(range(1 + n_tree, 1 + n_tree + k))
    leaves = list(range(1 + n_tree + k, 1 + n_tree + k + n))
    vertices = [root] + tree + rets + leaves
    cap = {v: 1 for v in tree + leaves}
    cap.update({v: 2 for v in rets})
    targets = tree + rets + leaves
    out_needed = [(root, 2)] + [(v, 2) for v in tree] + [(v, 1) for v in rets]
    children = {v: [] for v in vertices}
    found: dict[str, Network] = {}

    def reaches(a, b):
        stack, seen = [a], {a}
        while stack:
            x = stack.pop()
            if x == b:
                return True
            for c in children[x]:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return False

    def assign(i):
        if i == len(out_needed):
            arcs = [(u, c) for u in vertices for c in children[u]]
            try:
                net = validate(vertices, arcs, dict(zip(leaves, labels)))
            except ValidationError:
                return
            if is_tree_child(net):
                found.setdefault(network_canonical_code(net), net)
            return
        u, need = out_needed[i]
        for combo in itertools.combinations(targets, need):
            if u in combo or any(cap[c] == 0 for c in combo):
                continue
            if any(reaches(c, u) for c in combo):
                continue
            for c in combo:
                cap[c] -= 1
            children[u].extend(combo)
            assign(i + 1)
            del children[u][-need:]
            for c in combo:
                cap[c] += 1

    assign(0)
    nets = [found[c] for c in sorted(found)]
    if forbid_3cycles:
        nets = [net for net in nets if not has_3cycle(net)]
    return nets


# --- per-network checks ---------------------------------------------------------------


@dataclass
class LemmaInstance:
    lemma: str
    arc: tuple
    passed: bool
    detail: str = ""


def verify_deletion_lemmas(net: Network) -> list[LemmaInstance]:
    """Exercise the minimum-distance-tail and 3-cycle follow-up deletion lemmas.

    ``net`` must be tree-child without 3-cycles. Every reticulation arc whose
    tail is closest to the root is checked for the first; every reticulation
    arc is checked for the second.
    """
    out: list[LemmaInstance] = []
    if not net.k:
        return out
    depth = net.depth
    best = min(depth[t] for t, _ in net.reticulation_arcs)
    for e in net.reticulation_arcs:
        reduced, _ = delete_reticulation_arc(net, e)
        cycles = underlying_3cycles(reduced)
        if depth[e[0]] == best:
            ok = is_tree_child(reduced) and not cycles
            out.append(LemmaInstance("tail", e, ok, "" if ok else "N \\ e has a 3-cycle"))
        for _, arcs in cycles:
            rets = [a for a in arcs if len(reduced.parents[a[1]]) == 2]
            for f in rets:
                again, _ = delete_reticulation_arc(reduced, f)
                ok = is_tree_child(again) and not has_3cycle(again)
                out.append(
                    LemmaInstance(
                        "no3cycles", e, ok, "" if ok else f"N \\ {{e, {f}}} has a 3-cycle"
                    )
                )
    return out


def tight_lemma_discrepancies(net: Network, result=None) -> list[tuple]:
    """Arcs where non-essentiality and being a first/last ladder rung disagree."""
    if result is None:
        result = displayed_trees(net)
    rungs = set()
    for m in find_ladders(net):
        rungs.add(m.first_rung)
        rungs.add(m.last_rung)
    bad = []
    for a in net.arcs:
        if _non_essential(result, a) != (a in rungs):
            bad.append(a)
    return bad


@dataclass
class NetworkCheck:
    code: str
    n: int
    k: int
    count: int
    octopus: bool | None
    violations: list[str] = field(default_factory=list)
    lemma_instances: int = 0


def check_network(net: Network, bound=None, properties: bool = True) -> NetworkCheck:
    """Every census assertion for one 3-cycle-free tree-child network."""
    bound = bound or t_bound
    result = displayed_trees(net)
    count = len(result)
    n, k = net.n, net.k
    problems = []
    if int(result.counts.sum()) != 1 << k:
        problems.append("multiplicities do not sum to 2^k")
    octo = None if k == 1 else is_octopus(net)
    t = bound(n, k)
    if k == 0 and count != 1:
        problems.append(f"k=0 but |T|={count}")
    if k == 1 and count != 2:
        problems.append(f"k=1 but |T|={count}")
    if k >= 2:
        if count < t:
            problems.append(f"|T|={count} < t(n,k)={t}")
        if (count == t) != octo:
            problems.append(f"|T|={count}, t(n,k)={t}, octopus={octo}")
    instances = 0
    if properties:
        if is_normal(net) and count != 1 << k:
            problems.append(f"normal network with |T|={count} != 2^k")
        if k >= 2 and any(is_normal_reticulation(net, v) for v in net.reticulations):
            if count <= t:
                problems.append(f"has a normal reticulation but |T|={count} <= t(n,k)={t}")
        if k in (2, 3):
            bad = tight_lemma_discrepancies(net, result)
            if bad:
                problems.append(f"non-essential arcs disagree with ladder rungs at {bad}")
        lemmas = verify_deletion_lemmas(net)
        instances = len(lemmas)
        problems += [f"lemma {x.lemma} fails at {x.arc}: {x.detail}" for x in lemmas if not x.passed]
    return NetworkCheck(network_canonical_code(net), n, k, count, octo, problems, instances)


# --- census -------------------------------------------------------------------------


@dataclass
class Cell:
    n: int
    k: int
    generated: int = 0
    min_T: int | None = None
    max_T: int | None = None
    bound: int = 0
    equality_count: int = 0
    octopus_count: int = 0
    all_equality_octopus: bool | None = None
    violations: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "generated": self.generated,
            "min_T": self.min_T,
            "max_T": self.max_T,
            "bound": self.bound,
            "equality_count": self.equality_count,
            "octopus_count": self.octopus_count,
            "all_equality_octopus": self.all_equality_octopus,
            "violations": list(self.violations),
        }


@dataclass
class CensusReport:
    cells: list[Cell]
    meta: dict

    @property
    def violations(self) -> list:
        return [v for c in self.cells for v in c.violations]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self, include_timing: bool = True) -> dict:
        meta = dict(self.meta)
        if not include_timing:
            meta.pop("timing", None)
        return {"cells": [c.to_dict() for c in self.cells], "meta": meta}


def _encode(net: Network):
    return (net.vertices, net.arcs, net.labels, net.root)


def _decode(raw) -> Network:
    vertices, arcs, labels, root = raw
    return Network(vertices, arcs, labels, root)


def _check_batch(args):
    raws, properties, bound = args
    out = []
    for raw in raws:
        net = _decode(raw)
        chk = check_network(net, bound=bound, properties=properties)
        enwk = serialize_enewick(net) if chk.violations else ""
        out.append((chk, enwk))
    return out


def _map(fn, batches, jobs):
    if jobs <= 1:
        return [fn(b) for b in batches]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, batches))


def run_census(
    n_max: int,
    forbid_3cycles: bool = True,
    jobs: int = 1,
    extended: bool = False,
    properties: bool = True,
    bound=None,
) -> CensusReport:
    """Check every network with n <= n_max leaves; see :func:`verify_main_theorem`.

    Without ``forbid_3cycles`` all tree-child networks are enumerated and the
    per-cell statistics cover all of them, but the bound assertions are only
    applied to the 3-cycle-free ones.
    """
    limit = MAX_LEAVES if extended else 4
    if n_max > limit:
        raise ScaleExceeded(f"n_max={n_max} exceeds the scale budget ({limit}; 5 with extended)")
    bound = bound or t_bound
    started = time.perf_counter()
    timing = {}
    cells = []
    checked = 0
    lemma_instances = 0
    for n in range(1, n_max + 1):
        for k in range(0, n):
            t0 = time.perf_counter()
            nets = generate_tree_child(n, k, forbid_3cycles=False, max_leaves=MAX_LEAVES)
            free = [net for net in nets if not has_3cycle(net)]
            pool = free if forbid_3cycles else nets
            batches = [
                ([_encode(x) for x in free[i : i + 64]], properties, bound)
                for i in range(0, len(free), 64)
            ]
            results = [r for batch in _map(_check_batch, batches, jobs) for r in batch]
            by_code = {chk.code: (chk, enwk) for chk, enwk in results}
            cell = Cell(n, k, generated=len(pool), bound=bound(n, k))
            counts = []
            for net in pool:
                code = network_canonical_code(net)
                if code in by_code:
                    chk, enwk = by_code[code]
                    counts.append(chk.count)
                    lemma_instances += chk.lemma_instances
                    if k >= 2 and chk.count == cell.bound:
                        cell.equality_count += 1
                    if k >= 2 and chk.octopus:
                        cell.octopus_count += 1
                    for why in chk.violations:
                        cell.violations.append({"code": code, "enewick": enwk, "reason": why})
                else:
                    counts.append(len(displayed_trees(net)))
                    if k >= 2 and counts[-1] == cell.bound:
                        cell.equality_count += 1
            checked += len(results)
            if counts:
                cell.min_T, cell.max_T = min(counts), max(counts)
            if k >= 2:
                eq = [chk for chk, _ in results if chk.count == cell.bound]
                cell.all_equality_octopus = all(chk.octopus for chk in eq)
            elif k == 0:
                cell.octopus_count = cell.generated
                cell.all_equality_octopus = True
            cells.append(cell)
            timing[f"{n},{k}"] = round(time.perf_counter() - t0, 3)
            log.info("cell n=%d k=%d: %d networks, |T| in [%s, %s]", n, k, cell.generated, cell.min_T, cell.max_T)
    timing["total"] = round(time.perf_counter() - started, 3)
    meta = {
        "n_max": n_max,
        "forbid_3cycles": forbid_3cycles,
        "properties_checked": properties,
        "networks_checked": checked,
        "deletion_lemma_instances": lemma_instances,
        "generator": "reverse-cherry",
        "octopus_k0_vacuous": True,
        "timing": timing,
    }
    return CensusReport(cells, meta)


def verify_main_theorem(
    n_max: int = 4, jobs: int = 1, extended: bool = False, bound=None
) -> CensusReport:
    """Census over 3-cycle-free tree-child networks with n <= n_max.

    Asserts |T| = 1 for k = 0, |T| = 2 for k = 1, |T| >= t(n, k) for k >= 2
    and that equality holds exactly for octopuses, along with the property
    suites (normal reticulations, tight ladders, deletion lemmas).
    """
    return run_census(n_max, forbid_3cycles=True, jobs=jobs, extended=extended, bound=bound)


@dataclass
class StrictnessRecord:
    code: str
    count: int
    bound: int
    passed: bool


def verify_normal_strictness(n_max: int = 4) -> list[StrictnessRecord]:
    """Networks with k >= 2, no 3-cycles and a normal reticulation beat the bound strictly."""
    if n_max > MAX_LEAVES:
        raise ScaleExceeded(f"n_max={n_max} exceeds {MAX_LEAVES}")
    out = []
    for n in range(3, n_max + 1):
        for k in range(2, n):
            for net in generate_tree_child(n, k, forbid_3cycles=True):
                if any(is_normal_reticulation(net, v) for v in net.reticulations):
                    c = len(displayed_trees(net))
                    t = t_bound(n, k)
                    out.append(StrictnessRecord(network_canonical_code(net), c, t, c > t))
    return out
