"""Finite windows of the coset graph and its contractions.

A window holds the nodes (n, eps) for n in a finite index set.  Moves that
leave the window are not drawn; the node is flagged as boundary instead.
Stages follow the usual chain: gamma (the graph itself), bar (B-cycles
contracted), tilde (bar modulo AV), and the pruned bar0 / tilde0.
"""
from __future__ import annotations

import io
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable

from .neumann import QuadrupleAction, block_survivors

STAGES = ("gamma", "bar", "tilde", "bar0", "tilde0")


class StageError(ValueError):
    pass


class NotQuasiEulerian(ValueError):
    pass


@dataclass(frozen=True)
class AxiomViolation:
    node: tuple
    condition: str

    def __str__(self) -> str:
        n, e = self.node
        return f"{self.condition} at ({n},{e})"


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            # keep the smaller node as representative so ids are deterministic
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx


# ----- stage gamma -------------------------------------------------------------

@dataclass
class Graph232Window:
    """The coset graph restricted to a finite node set.

    ``a``, ``b``, ``v`` and ``c`` map a node to its image when the image is
    inside the window.  ``c`` comes straight from the action rather than
    from composing ``a`` and ``b``, so it survives a deleted A-edge.
    """

    vertices: list
    a: dict
    b: dict
    v: dict
    c: dict
    boundary: set
    action: object = None
    stage: str = "gamma"

    @classmethod
    def from_action(cls, action, indices: Iterable[int]) -> Graph232Window:
        indices = sorted(set(indices))
        vertices = [(n, e) for n in indices for e in (0, 1)]
        inside = set(vertices)
        maps = {m: {} for m in "abvc"}
        boundary = set()
        for x in vertices:
            for m in "abvc":
                y = action.image(m, x)
                if y in inside:
                    maps[m][x] = y
                else:
                    boundary.add(x)
        return cls(vertices, maps["a"], maps["b"], maps["v"], maps["c"], boundary, action)

    @property
    def interior(self) -> list:
        return [x for x in self.vertices if x not in self.boundary]

    def label(self, x):
        if hasattr(self.action, "label"):
            return self.action.label(x)
        y = self.a.get(x, x)
        return (min(x, y), max(x, y))

    def label_order(self, label) -> float:
        if hasattr(self.action, "label_order"):
            return self.action.label_order(label)
        return math.inf


def build_window(spec, n: int) -> Graph232Window:
    """Window on the indices |k| <= n."""
    if n < 0:
        raise ValueError("window size must be >= 0")
    for k in (-n, n):
        spec.iota(k)  # raises OutOfRange in finite mode
    return Graph232Window.from_action(QuadrupleAction(spec), range(-n, n + 1))


def core_blocks(spec, n: int) -> int:
    """Largest M with the domain of the first M blocks inside [-n, n]; 0 if none fits."""
    m = 0
    while True:
        d = spec.domain(m + 1)
        if d.start < -n or d.stop - 1 > n:
            return m
        if not spec.cyclic and m + 1 >= len(spec.blocks):
            return m + 1
        m += 1


def build_core(spec, blocks: int) -> Graph232Window:
    """Window on the domain of the first ``blocks`` blocks; iota maps it onto itself."""
    return Graph232Window.from_action(QuadrupleAction(spec), spec.domain(blocks))


def validate_axioms(g: Graph232Window) -> list[AxiomViolation]:
    """Check the four (2,3,2)-graph conditions at every interior node."""
    if g.stage != "gamma":
        raise StageError("axioms are checked on stage gamma")
    out = []

    def path(x, moves):
        for m in moves:
            x = getattr(g, m).get(x)
            if x is None:
                return None
        return x

    for x in g.interior:
        ax = g.a.get(x)
        if ax is None or g.a.get(ax) != x:
            out.append(AxiomViolation(x, "missing or non-involutive A-edge"))
        vx = g.v.get(x)
        if vx is None or g.v.get(vx) != x:
            out.append(AxiomViolation(x, "missing or non-involutive V-edge"))
        bx = g.b.get(x)
        if bx is None:
            out.append(AxiomViolation(x, "missing B-edge"))
        elif bx != x:
            if g.b.get(bx) == x:
                out.append(AxiomViolation(x, "B-cycle length 2"))
            elif path(x, "bbb") not in (x, None):
                out.append(AxiomViolation(x, "B-cycle longer than 3"))
        for moves, name in (("avav", "AVAV"), ("abvabv", "ABVABV")):
            y = path(x, moves)
            if y is not None and y != x:
                out.append(AxiomViolation(x, f"{name}-path does not close"))
        if ax is not None and x in g.c and g.b.get(ax) not in (None, g.c[x]):
            out.append(AxiomViolation(x, "C differs from A then B"))
    return out


@dataclass(frozen=True)
class OrbitReport:
    orbits: list
    neumann: bool
    open_orbits: int

    def __str__(self) -> str:
        sizes = ", ".join(str(len(o)) for o in self.orbits)
        return (f"{len(self.orbits)} C-orbits (sizes {sizes}), {self.open_orbits} boundary-open, "
                f"Neumann check {'true' if self.neumann else 'false'}")


def c_orbits(g: Graph232Window) -> OrbitReport:
    """Partition the window's nodes into C-orbits and test the two-orbit criterion.

    Boundary nodes are kept in their orbit so that V can be compared on
    whole sheets; an orbit is open when one of its nodes steps outside.
    """
    if g.stage != "gamma":
        raise StageError("C-orbits are computed on stage gamma")
    uf = _UnionFind(g.vertices)
    for x, y in g.c.items():
        uf.union(x, y)
    groups = defaultdict(list)
    for x in g.vertices:
        groups[uf.find(x)].append(x)
    orbits = [sorted(o) for _, o in sorted(groups.items())]
    open_roots = {uf.find(x) for x in g.vertices if x not in g.c}
    is_open = [uf.find(o[0]) in open_roots for o in orbits]
    ok = len(orbits) == 2 and all(is_open)
    if ok:
        first, second = (set(o) for o in orbits)
        image = {g.v.get(x) for x in first}
        ok = image == second
    return OrbitReport(orbits, ok, sum(is_open))


def is_connected(g: Graph232Window) -> bool:
    """Connectivity through A-, B- and C-edges (V-edges excluded)."""
    if not g.vertices:
        return False
    uf = _UnionFind(g.vertices)
    for m in (g.a, g.b, g.c):
        for x, y in m.items():
            uf.union(x, y)
    return len({uf.find(x) for x in g.vertices}) == 1


# ----- contractions ------------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    u: tuple
    v: tuple
    label: tuple
    node: tuple  # the gamma node whose A-edge this is

    @property
    def is_loop(self) -> bool:
        return self.u == self.v


@dataclass
class ContractedWindow:
    stage: str
    members: dict          # vertex id -> sorted gamma nodes
    edges: list
    boundary: set
    source: Graph232Window
    removed: list = field(default_factory=list)

    @property
    def vertices(self) -> list:
        return sorted(self.members)

    def degree(self) -> Counter:
        deg = Counter()
        for e in self.edges:
            deg[e.u] += 1
            deg[e.v] += 1
        return deg

    def label_order(self, label) -> float:
        return self.source.label_order(label)


def contract_b(g: Graph232Window) -> ContractedWindow:
    """Collapse each B-loop and B-3-cycle to one vertex; keep every A-edge once."""
    if g.stage != "gamma":
        raise StageError("contract_b expects stage gamma")
    # follow B through the action so a 3-cycle with one node outside stays whole
    inside = set(g.vertices)
    uf = _UnionFind(g.vertices)
    for x in g.vertices:
        y = g.action.image("b", x)
        try:
            z = g.action.image("b", y)
        except LookupError:  # finite spec: y lies beyond the covered range
            z = None
        for w in (y, z):
            if w in inside:
                uf.union(x, w)
    members = defaultdict(list)
    for x in g.vertices:
        members[uf.find(x)].append(x)
    edges = []
    for x in g.vertices:
        y = g.a.get(x)
        if y is None or y < x:
            continue
        edges.append(Edge(uf.find(x), uf.find(y), g.label(x), x))
    boundary = {uf.find(x) for x in g.boundary}
    return ContractedWindow("bar", dict(members), edges, boundary, g)


def quotient_av(g: ContractedWindow) -> ContractedWindow:
    """Identify bar vertices along AV and merge parallel edges with equal labels."""
    if g.stage != "bar":
        raise StageError("quotient_av expects stage bar")
    src = g.source
    bar_of = {x: vid for vid, xs in g.members.items() for x in xs}
    uf = _UnionFind(list(g.members))
    for x in src.vertices:
        y = src.action.image("v", src.action.image("a", x))
        if y in bar_of:
            uf.union(bar_of[x], bar_of[y])
    members = defaultdict(list)
    for vid, xs in g.members.items():
        members[uf.find(vid)].extend(xs)
    seen = {}
    for e in g.edges:
        key = e.label
        if key in seen:
            continue
        seen[key] = Edge(*sorted((uf.find(e.u), uf.find(e.v))), e.label, e.node)
    boundary = {uf.find(v) for v in g.boundary}
    return ContractedWindow("tilde", {k: sorted(v) for k, v in members.items()},
                            list(seen.values()), boundary, src)


def prune(g: ContractedWindow) -> ContractedWindow:
    """Drop loops labelled by involutions and interior leaves labelled by order-3 pairs."""
    if g.stage in ("bar0", "tilde0"):
        return g
    if g.stage not in ("bar", "tilde"):
        raise StageError("prune expects stage bar or tilde")
    edges = list(g.edges)
    members = dict(g.members)
    removed = []
    changed = True
    while changed:
        changed = False
        keep = []
        for e in edges:
            if e.is_loop and g.label_order(e.label) == 2:
                removed.append(e.label)
                changed = True
            else:
                keep.append(e)
        edges = keep
        deg = Counter()
        incident = defaultdict(list)
        for e in edges:
            deg[e.u] += 1
            deg[e.v] += 1
            incident[e.u].append(e)
            incident[e.v].append(e)
        leaves = {v for v in members
                  if deg[v] == 1 and v not in g.boundary
                  and g.label_order(incident[v][0].label) == 3}
        if leaves:
            changed = True
            for v in leaves:
                removed.append(incident[v][0].label)
                del members[v]
            edges = [e for e in edges if e.u not in leaves and e.v not in leaves]
    return ContractedWindow(g.stage + "0", members, edges, set(g.boundary) & set(members),
                            g.source, removed)


def betti(g: ContractedWindow) -> int:
    """|E| - |V| + #components, loops counted as edges."""
    uf = _UnionFind(list(g.members))
    for e in g.edges:
        uf.union(e.u, e.v)
    comps = len({uf.find(v) for v in g.members})
    return len(g.edges) - len(g.members) + comps


def stage(g: Graph232Window, name: str):
    """Run the contraction chain up to the named stage."""
    if name not in STAGES:
        raise StageError(f"unknown stage {name!r}")
    if name == "gamma":
        return g
    bar = contract_b(g)
    if name == "bar":
        return bar
    if name == "bar0":
        return prune(bar)
    tilde = quotient_av(bar)
    return tilde if name == "tilde" else prune(tilde)


# ----- extraction --------------------------------------------------------------

@dataclass(frozen=True)
class Tails:
    count: int            # components of the outside that touch the core
    outside_betti: int    # 0 when the outside is a forest of tails


def open_tails(spec, blocks: int, stage_name: str = "tilde0", probe: int | None = None) -> Tails:
    """Look past the core of ``blocks`` blocks into a larger window of ``probe`` blocks.

    The pruned graph of the larger window is split into the part meeting
    the core's indices and the rest; the rest's components touching the
    core are the tails seen from the core.
    """
    if probe is None:
        probe = len(spec.blocks) if not spec.cyclic else blocks + 2 * spec.period
    dom = set(spec.domain(blocks))
    big = stage(build_core(spec, probe), stage_name)
    core = {v for v, xs in big.members.items() if any(x[0] in dom for x in xs)}
    outside = [v for v in big.members if v not in core]
    uf = _UnionFind(outside)
    touch = set()
    n_edges = 0
    for e in big.edges:
        if e.u not in core and e.v not in core:
            uf.union(e.u, e.v)
            n_edges += 1
        elif e.u in core and e.v not in core:
            touch.add(e.v)
        elif e.v in core and e.u not in core:
            touch.add(e.u)
    comps = len({uf.find(v) for v in outside})
    return Tails(len({uf.find(v) for v in touch}), n_edges - len(outside) + comps)


@dataclass(frozen=True)
class ExtractionResult:
    finite: list        # survivors of finite order (L0)
    infinite: list      # survivors of infinite order (L_inf)
    beta: int           # Betti number of the pruned tilde core
    tails: Tails

    @property
    def consistent(self) -> bool:
        """|L_inf| = beta + s - 1; meaningful when the outside is a forest."""
        return len(self.infinite) == self.beta + self.tails.count - 1


def extract_generators(spec, blocks: int, probe: int | None = None) -> ExtractionResult:
    """Independent generators of the first ``blocks`` blocks, cross-checked on the graph core."""
    survivors = [s for i in range(blocks) for s in block_survivors(spec, i)]
    finite = [s for s in survivors if s.order != math.inf]
    infinite = [s for s in survivors if s.order == math.inf]
    t0 = stage(build_core(spec, blocks), "tilde0")
    return ExtractionResult(finite, infinite, betti(t0), open_tails(spec, blocks, "tilde0", probe))


# ----- quasi-Eulerian paths ----------------------------------------------------

@dataclass(frozen=True)
class QuasiEulerianPair:
    paths: tuple  # two lists of oriented edges (gamma node, its A-image)

    def __str__(self) -> str:
        return f"quasi-Eulerian pair: path lengths {len(self.paths[0])}, {len(self.paths[1])}"


def quasi_eulerian(g: ContractedWindow) -> QuasiEulerianPair:
    """Project the two C-orbits of the gamma window onto bar as paths of oriented A-edges."""
    if g.stage != "bar":
        raise StageError("quasi_eulerian expects stage bar")
    src = g.source
    report = c_orbits(src)
    if len(report.orbits) != 2 or report.open_orbits != 2:
        raise NotQuasiEulerian(f"need two open C-orbits, found {report}")
    bar_of = {x: vid for vid, xs in g.members.items() for x in xs}
    deg = g.degree()
    paths = []
    for orbit in report.orbits:
        # walk along C from a node with no in-window predecessor
        preds = {y for x, y in src.c.items() if x in orbit}
        start = [x for x in orbit if x not in preds]
        if len(start) != 1:
            raise NotQuasiEulerian("C-orbit is not a single path")
        order, x = [], start[0]
        while x is not None:
            order.append(x)
            x = src.c.get(x)
        # an A-edge leaving the window breaks the path; keep gaps as None
        paths.append([(x, src.a[x]) if x in src.a else None for x in order])
    for path in paths:
        for e, f in zip(path, path[1:]):
            if e is None or f is None:
                continue
            (x, ax), (y, ay) = e, f
            if y == ax and ay == x and bar_of[x] != bar_of[ax] and deg[bar_of[ax]] != 1:
                raise NotQuasiEulerian(f"path backtracks at {ax}")
    paths = [[e for e in p if e is not None] for p in paths]
    used = Counter(e for p in paths for e in p)
    for x in src.vertices:
        ax = src.a.get(x)
        if ax is None or bar_of[x] == bar_of[ax]:
            continue
        if x in src.boundary or ax in src.boundary:
            continue
        if used[(x, ax)] != 1:
            raise NotQuasiEulerian(f"oriented edge {x}->{ax} used {used[(x, ax)]} times")
    return QuasiEulerianPair(tuple(paths))


# ----- two-orbit isotropic example --------------------------------------------

class Fig1Action:
    """A two-orbit action of the extended group whose stabilizer is isotropic.

    Cosets are (n, 0) for the orbit of the base point under C and (n, 1) for
    the orbit of its image under B^-1.  C moves both orbits by +1 and A has
    period three along each orbit.  V preserves each orbit, which is what
    keeps the stabilizer from being a Neumann subgroup.
    """

    def image(self, move: str, node):
        n, e = node
        if move == "c":
            return (n + 1, e)
        if move == "v":
            return (-n, 0) if e == 0 else (-1 - n, 1)
        if move == "a":
            return self._a(node)
        if move == "b":
            return self.image("c", self._a(node))
        raise ValueError(move)

    @staticmethod
    def _a(node):
        n, e = node
        r = n % 3
        if e == 0:
            return {0: (n, 0), 1: (-n, 1), 2: (-n - 1, 1)}[r]
        return {1: (n, 1), 2: (-n, 0), 0: (-n - 1, 0)}[r]


def fig1_window(n: int) -> Graph232Window:
    return Graph232Window.from_action(Fig1Action(), range(-n, n + 1))


def _power(letter: str, k: int) -> str:
    inverse = {"t": "T", "T": "t"}
    return letter * k if k >= 0 else inverse[letter] * -k


def fig1_generators(k: int = 1) -> list[tuple[str, str]]:
    """V, C^3j A C^-3j and C^(3j+2) B A B^-1 C^(-3j-2) for |j| <= k, as (name, word)."""
    out = [("V", "v")]
    for j in range(-k, k + 1):
        out.append((f"C^{3 * j} A C^{-3 * j}", _power("t", 3 * j) + "w" + _power("t", -3 * j)))
    for j in range(-k, k + 1):
        m = 3 * j + 2
        out.append((f"C^{m} B A B^-1 C^{-m}", _power("t", m) + "fwF" + _power("t", -m)))
    return out


def fig1_walk(word: str, node=(0, 0)):
    """Right action of a letter word on the fixture cosets."""
    act = Fig1Action()
    for x in word:
        if x == "w":
            node = act.image("a", node)
        elif x == "f":
            node = act.image("b", node)
        elif x == "F":
            node = act.image("b", act.image("b", node))
        elif x == "v":
            node = act.image("v", node)
        elif x == "t":
            node = act.image("c", node)
        elif x == "T":
            node = (node[0] - 1, node[1])
        else:
            raise ValueError(x)
    return node


# ----- DOT export --------------------------------------------------------------

def _name(x) -> str:
    return f'"{x[0]}_{x[1]}"'


def export_dot(g, out=None) -> str:
    """Deterministic DOT text; written to ``out`` (path or file object) when given."""
    buf = io.StringIO()
    buf.write("digraph G {\n")
    if isinstance(g, Graph232Window):
        for x in g.vertices:
            attrs = ' [shape=box]' if x in g.boundary else ""
            buf.write(f"  {_name(x)}{attrs};\n")
        for x in g.vertices:
            y = g.a.get(x)
            if y is not None and x <= y:
                buf.write(f"  {_name(x)} -> {_name(y)} [dir=none, style=bold];\n")
        for x in g.vertices:
            y = g.b.get(x)
            if y is not None:
                buf.write(f"  {_name(x)} -> {_name(y)} [style=solid];\n")
        for x in g.vertices:
            y = g.v.get(x)
            if y is not None and x <= y:
                buf.write(f"  {_name(x)} -> {_name(y)} [dir=none, style=dashed];\n")
    else:
        for vid in g.vertices:
            attrs = ' [shape=box]' if vid in g.boundary else ""
            buf.write(f"  {_name(vid)}{attrs};\n")
        for e in sorted(g.edges, key=lambda e: (e.u, e.v, e.label, e.node)):
            lab = "|".join(f"S{i}" for i in e.label) if isinstance(e.label[0], int) else ""
            extra = f', label="{lab}"' if lab else ""
            buf.write(f"  {_name(e.u)} -> {_name(e.v)} [dir=none, style=bold{extra}];\n")
    buf.write("}\n")
    text = buf.getvalue()
    if out is not None:
        if hasattr(out, "write"):
            out.write(text)
        else:
            with open(out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
    return text
