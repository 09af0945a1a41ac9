"""Extended Newick and edge-list text formats."""

from __future__ import annotations

import re
from pathlib import Path

from .canon import canonical_order
from .errors import ParseError, TagArityError, ValidationError
from .network import Network, validate
from .trees import format_label

_HYBRID = re.compile(r"#H(\d+)$")
_LENGTH = re.compile(r"[0-9eE.+\-]+")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def where(self, pos=None) -> tuple[int, int]:
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, msg, pos=None, cls=ParseError):
        line, col = self.where(pos)
        return cls(msg, line, col)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch):
        if self.peek() != ch:
            found = repr(self.peek()) if self.peek() else "end of input"
            raise self.error(f"expected {ch!r}, found {found}")
        self.pos += 1

    def label(self) -> str:
        self.skip_ws()
        if self.peek() == "'":
            start = self.pos
            self.pos += 1
            out = []
            while True:
                if self.pos >= len(self.text):
                    raise self.error("unterminated quoted label", start)
                ch = self.text[self.pos]
                if ch == "'":
                    if self.text[self.pos + 1 : self.pos + 2] == "'":
                        out.append("'")
                        self.pos += 2
                        continue
                    self.pos += 1
                    return "".join(out)
                out.append(ch)
                self.pos += 1
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in "(),;:'[" and not self.text[self.pos].isspace():
            self.pos += 1
        return self.text[start : self.pos]

    def lengths(self):
        while self.peek() == ":":
            self.pos += 1
            self.skip_ws()
            m = _LENGTH.match(self.text, self.pos)
            if m:
                self.pos = m.end()


def parse_enewick(text: str) -> Network:
    """Parse the supported eNewick subset into a validated network.

    Reticulations are written ``(subtree)#Hn`` once and referenced as a bare
    ``#Hn`` once. Branch lengths are accepted and discarded; internal labels
    other than hybrid tags are rejected.
    """
    sc = _Scanner(text)
    if not text.strip():
        raise ParseError("empty input", 1, 1)
    vertices: list[int] = []
    arcs: list[tuple[int, int]] = []
    labels: dict[int, str] = {}
    names: dict[int, str] = {}
    tag_vertex: dict[str, int] = {}
    tag_defs: dict[str, list] = {}
    tag_refs: dict[str, list] = {}

    def hybrid_vertex(tag):
        if tag not in tag_vertex:
            v = len(vertices)
            vertices.append(v)
            tag_vertex[tag] = v
            names[v] = tag
        return tag_vertex[tag]

    def node():
        if sc.peek() == "(":
            start = sc.pos
            sc.take("(")
            kids = [node()]
            while sc.peek() == ",":
                sc.take(",")
                kids.append(node())
            sc.take(")")
            at = sc.pos
            lab = sc.label()
            sc.lengths()
            if lab:
                m = _HYBRID.match(lab)
                if not m:
                    raise sc.error(f"internal vertex label {lab!r} is not a hybrid tag", at)
                tag_defs.setdefault(lab, []).append(start)
                v = hybrid_vertex(lab)
            else:
                v = len(vertices)
                vertices.append(v)
            arcs.extend((v, c) for c in kids if c is not None)
            return v
        at = sc.pos
        lab = sc.label()
        if not lab:
            found = repr(sc.peek()) if sc.peek() else "end of input"
            raise sc.error(f"expected a label or '(', found {found}", at)
        sc.lengths()
        if _HYBRID.match(lab):
            tag_refs.setdefault(lab, []).append(at)
            return hybrid_vertex(lab)
        v = len(vertices)
        vertices.append(v)
        labels[v] = lab
        return v

    root = node()
    sc.take(";")
    sc.skip_ws()
    if sc.pos != len(text):
        raise sc.error("trailing input after ';'")
    for tag in sorted(set(tag_defs) | set(tag_refs)):
        d, r = tag_defs.get(tag, []), tag_refs.get(tag, [])
        if len(d) + len(r) != 2 or len(d) != 1:
            first = (d + r)[0]
            raise sc.error(
                f"hybrid tag {tag} appears {len(d) + len(r)} times "
                f"({len(d)} with a subtree); expected one definition and one reference",
                first,
                TagArityError,
            )
    del root
    internal = [v for v in vertices if v not in labels and v not in names]
    for i, v in enumerate(internal):
        names[v] = f"n{i}"
    names = _avoid_clashes(names, set(labels.values()))
    return validate(vertices, arcs, labels, names=names)


def _avoid_clashes(names: dict, taken: set) -> dict:
    out = {}
    for v, nm in names.items():
        while nm in taken:
            nm = "_" + nm
        out[v] = nm
    return out


def serialize_enewick(net: Network) -> str:
    """Canonical eNewick: children in canonical order, tags #H1..#Hk by first visit."""
    order = canonical_order(net)
    tags: dict = {}

    def emit(v) -> str:
        if v in net.labels:
            return format_label(net.labels[v])
        kids = sorted(net.children[v], key=order.__getitem__)
        if len(net.parents[v]) == 2:
            if v in tags:
                return tags[v]
            tags[v] = f"#H{len(tags) + 1}"
            tag = tags[v]
            return "(" + ",".join(emit(c) for c in kids) + ")" + tag
        return "(" + ",".join(emit(c) for c in kids) + ")"

    return emit(net.root) + ";"


def parse_edgelist(text: str) -> Network:
    """Parse ``leaves: x1 x2 ...`` followed by one ``tail head`` pair per line."""
    lines = text.splitlines()
    header_at = None
    for i, line in enumerate(lines):
        if line.strip() and not line.lstrip().startswith("# "):
            header_at = i
            break
    if header_at is None:
        raise ParseError("empty input", 1, 1)
    header = lines[header_at]
    key, sep, rest = header.partition(":")
    if key.strip() != "leaves" or not sep:
        col = len(header) - len(header.lstrip()) + 1
        raise ParseError("first line must be 'leaves: <labels>'", header_at + 1, col)
    leaves = rest.split()
    if not leaves:
        raise ParseError("no leaves listed", header_at + 1, len(header) + 1)
    if len(set(leaves)) != len(leaves):
        raise ValidationError("duplicate leaf label in header")
    arcs = []
    for j in range(header_at + 1, len(lines)):
        line = lines[j]
        if not line.strip() or line.lstrip().startswith("# "):
            continue
        parts = line.split()
        if len(parts) != 2:
            col = len(line) - len(line.lstrip()) + 1
            raise ParseError("expected 'tail head'", j + 1, col)
        arcs.append((parts[0], parts[1]))
    names = list(dict.fromkeys(leaves + [x for a in arcs for x in a]))
    vid = {nm: i for i, nm in enumerate(names)}
    labels = {vid[lab]: lab for lab in leaves}
    return validate(
        range(len(names)),
        [(vid[t], vid[h]) for t, h in arcs],
        labels,
        names={i: nm for nm, i in vid.items() if nm not in leaves},
    )


def serialize_edgelist(net: Network, keep_names: bool = False) -> str:
    """Edge list with arcs in canonical order.

    Internal vertices are called ``v<canonical index>`` unless ``keep_names``
    is set and the network carries display names.
    """
    order = canonical_order(net)
    taken = set(net.labels.values())
    if keep_names and net.names:
        internal = {v: net.name(v) for v in net.vertices if v not in net.labels}
    else:
        internal = {v: f"v{order[v]}" for v in net.vertices if v not in net.labels}
    names = _avoid_clashes(internal, taken)
    names.update(net.labels)
    leaves = sorted(net.labels.values(), key=lambda s: s.encode("utf-8"))
    lines = ["leaves: " + " ".join(leaves)]
    for t, h in sorted(net.arcs, key=lambda a: (order[a[0]], order[a[1]])):
        lines.append(f"{names[t]} {names[h]}")
    return "\n".join(lines) + "\n"


ENEWICK_SUFFIXES = {".enwk", ".enewick", ".nwk", ".newick"}
EDGELIST_SUFFIXES = {".edl"}


def parse_network_text(text: str, suffix: str = "") -> Network:
    suffix = suffix.lower()
    if suffix in EDGELIST_SUFFIXES:
        return parse_edgelist(text)
    if suffix in ENEWICK_SUFFIXES:
        return parse_enewick(text)
    if text.lstrip().startswith("leaves"):
        return parse_edgelist(text)
    return parse_enewick(text)


def load_network(path) -> Network:
    path = Path(path)
    return parse_network_text(path.read_text(encoding="utf-8"), path.suffix)


def dump_network(net: Network, path, keep_names: bool = False) -> None:
    path = Path(path)
    if path.suffix.lower() in EDGELIST_SUFFIXES:
        text = serialize_edgelist(net, keep_names)
    else:
        text = serialize_enewick(net) + "\n"
    path.write_text(text, encoding="utf-8")


def resolve_vertex(net: Network, name: str):
    """Find a vertex by leaf label or display name."""
    if name in net.leaf_by_label:
        return net.leaf_by_label[name]
    hits = [v for v, nm in net.names.items() if nm == name]
    if len(hits) == 1:
        return hits[0]
    if not hits and name.lstrip("-").isdigit() and int(name) in net.children and not net.names:
        return int(name)
    raise KeyError(name)
