"""Hand-built networks used as fixtures and golden examples."""

from __future__ import annotations

from .network import Network, validate
from .trees import PhyloTree

# vertex names follow the drawing: u is the tail of the shortcut (u, v)
FIG1_NAMES = {
    0: "rho",
    1: "a",
    2: "u",
    3: "c",
    4: "b",
    5: "d",
    6: "v",
    7: "x1",
    8: "x2",
    9: "x3",
    10: "x4",
}
FIG1_ARCS = [
    (0, 1),  # rho -> a
    (0, 2),  # rho -> u
    (1, 7),  # a -> x1
    (1, 4),  # a -> b
    (3, 4),  # c -> b   (dashed)
    (3, 5),  # c -> d
    (5, 6),  # d -> v   (dashed)
    (4, 8),  # b -> x2
    (5, 9),  # d -> x3
    (6, 10),  # v -> x4
    (2, 3),  # u -> c
    (2, 6),  # u -> v   (the shortcut)
]
FIG1_U = 2
FIG1_V = 6
FIG1_SHORTCUT = (2, 6)
FIG1_RETICULATIONS = (4, 6)


def fig1_network() -> Network:
    """The four-leaf tree-child network with one shortcut (11 vertices, k = 2)."""
    labels = {7: "x1", 8: "x2", 9: "x3", 10: "x4"}
    return validate(range(11), FIG1_ARCS, labels, names=FIG1_NAMES)


def fig1_tree() -> PhyloTree:
    """The displayed tree drawn next to the network: ((x1,x2),(x3,x4))."""
    return PhyloTree((("x1", "x2"), ("x3", "x4")))


# Octopus layouts written in the octopus spec text format (see octopus.py).
# Ladder slots are listed as l0, l1, l2[, l3]: l0 hangs below u1, li below vi.
FIG3_LEFT_SPEC = "L2((x5,x6),L2(x2,x1,(x3,x4)),L3(x8,x9,x7,x10));"
FIG3_RIGHT_SPEC = "((L2(x2,x1,x3),L2(x5,x4,x6)),L3(x8,x9,x7,x10));"
