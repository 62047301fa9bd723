"""The Neumann subgroup determined by an involution spec.

Cosets of the subgroup are the nodes (n, eps) standing for S tau^n nu^eps.
The base node (0, 0) is the subgroup itself, so a word lies in the
subgroup exactly when walking it from (0, 0) returns to (0, 0).  Actions
are right actions: a word acts letter by letter from the left.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, Sequence

from .invospec import InvolutionSpec
from .pgl2 import (
    IDENTITY,
    NU,
    OMEGA,
    ElementClass,
    GroupElement,
    RationalPoint,
    classify,
    tau_power,
)
from . import tietze

INF = math.inf
Node = tuple  # (n, eps)
BASE = (0, 0)


class NotNeumannOverM(UserWarning):
    """Every delta is +1: the subgroup lies in PSL(2, Z) and has no modular-part doubling."""


class NoNegativeDeterminant(ValueError):
    pass


def act(spec, letter: str, node: Node) -> Node:
    """Image of ``node`` under one letter of the word alphabet (w f F v t T)."""
    n, e = node
    if letter == "t":
        return (n + (1 if e == 0 else -1), e)
    if letter == "T":
        return (n - (1 if e == 0 else -1), e)
    if letter == "v":
        return (n, 1 - e)
    if letter == "w":
        d = spec.delta(n)
        return (spec.iota(n), (e + (1 - d) // 2) % 2)
    if letter == "f":
        d = spec.delta(n)
        return (spec.iota(n) + (1 if e == 0 else -1) * d, (e + (1 - d) // 2) % 2)
    if letter == "F":
        return act(spec, "w", act(spec, "T", node))
    raise ValueError(f"unknown letter {letter!r}")


def walk(spec, word: str, start: Node = BASE) -> Node:
    node = start
    for x in word:
        node = act(spec, x, node)
    return node


_MOVES = {"a": "w", "b": "f", "v": "v", "c": "t"}


@dataclass(frozen=True)
class QuadrupleAction:
    """The permutations A, B, V, C of the cosets, as used by the graph code."""

    spec: object

    def image(self, move: str, node: Node) -> Node:
        return act(self.spec, _MOVES[move], node)

    def label(self, node: Node) -> tuple[int, int]:
        """The A-edge at (n, eps) carries the pair {S_n, S_iota(n)}; stored as sorted indices."""
        n = node[0]
        m = self.spec.iota(n)
        return (min(n, m), max(n, m))

    def label_order(self, label) -> float:
        return classify(sigma_matrix(self.spec, label[0])).order


def sigma_word_letters(spec, n: int) -> str:
    """Letters of C^n A V^((1-delta_n)/2) C^-iota(n)."""
    m = spec.iota(n)
    v = "v" if spec.delta(n) == -1 else ""
    return ("t" * n if n >= 0 else "T" * -n) + "w" + v + ("T" * m if m >= 0 else "t" * -m)


@lru_cache(maxsize=65536)
def sigma_matrix(spec, n: int) -> GroupElement:
    g = tau_power(n) * OMEGA
    if spec.delta(n) == -1:
        g = g * NU
    return g * tau_power(-spec.iota(n))


@dataclass(frozen=True)
class SigmaGenerator:
    index: int
    matrix: GroupElement
    det: int
    partner: int
    element_class: ElementClass

    @property
    def order(self) -> float:
        return self.element_class.order

    def __str__(self) -> str:
        order = "inf" if self.order == INF else str(self.order)
        return (f"S{self.index} = {self.matrix}  det={self.det}  partner=S{self.partner}  "
                f"class={self.element_class.value}  order={order}")


def sigma(spec, n: int) -> SigmaGenerator:
    g = sigma_matrix(spec, n)
    return SigmaGenerator(n, g, g.det, spec.iota(n), classify(g))


def eval_sigma_word(spec, word: Sequence[int]) -> GroupElement:
    return reduce(lambda g, n: g * sigma_matrix(spec, n), word, IDENTITY)


def format_sigma_word(word: Sequence[int]) -> str:
    return " ".join(f"S{n}" for n in word)


def parse_sigma_word(text: str) -> tuple[int, ...]:
    out = []
    for tok in text.split():
        if not tok.startswith("S"):
            raise ValueError(f"bad sigma token {tok!r}")
        out.append(int(tok[1:]))
    return tuple(out)


@dataclass(frozen=True)
class RelationViolation:
    index: int
    relation: str
    value: GroupElement

    def __str__(self) -> str:
        return f"{self.relation} at n={self.index}: got {self.value}"


def verify_relations(spec, window: Iterable[int]) -> list[RelationViolation]:
    """Check the pair relation, the triangle relation and det = delta at every n."""
    out = []
    for n in window:
        s = sigma_matrix(spec, n)
        m = spec.iota(n)
        d = spec.delta(n)
        if s.det != d:
            out.append(RelationViolation(n, "det S_n = delta_n", s))
        pair = s * sigma_matrix(spec, m)
        if not pair.is_identity():
            out.append(RelationViolation(n, "S_n S_iota(n) = 1", pair))
        tri = s * sigma_matrix(spec, m + d) * sigma_matrix(spec, spec.iota(n - 1))
        if not tri.is_identity():
            out.append(RelationViolation(n, "S_n S_(iota(n)+delta_n) S_iota(n-1) = 1", tri))
    return out


@dataclass(frozen=True)
class Decomposition:
    sigma_word: tuple[int, ...]
    node: Node

    @property
    def in_subgroup(self) -> bool:
        return self.node == BASE

    def transversal(self) -> GroupElement:
        n, e = self.node
        return tau_power(n) * (NU if e else IDENTITY)


def decompose(spec, word: str) -> Decomposition:
    """Reidemeister-Schreier rewriting: word = (sigma word) * tau^n nu^eps."""
    node = BASE
    out = []
    for x in word:
        n, e = node
        if x in "wf":
            out.append(n)
        elif x == "F":
            out.append(n - (1 if e == 0 else -1))
        node = act(spec, x, node)
    return Decomposition(tuple(out), node)


def matrix_to_word(g: GroupElement) -> str:
    """A word in w, t, T, v evaluating to g, found by Euclid on the bottom row."""
    suffix = ""
    if g.det == -1:
        g, suffix = g * NU, "v"
    steps = []  # letters r with g * r1 * r2 * ... = 1
    a, b, c, d = g.entries()
    while c != 0:
        k = -(d // c)
        b, d = b + k * a, d + k * c
        steps.append("t" * k if k >= 0 else "T" * -k)
        a, b, c, d = b, -a, d, -c
        steps.append("w")
    # now +-[[1, b], [0, 1]]
    if a < 0:
        b = -b
    steps.append("T" * b if b >= 0 else "t" * -b)
    inverse = {"t": "T", "T": "t", "w": "w"}
    word = "".join(inverse[x] for x in reversed("".join(steps)))
    return word + suffix


def reach_rational(spec, x: RationalPoint) -> tuple[int, ...]:
    """A sigma word s with s(oo) = x; the transversal part of the rewrite fixes oo."""
    if x.q == 0:
        return ()
    u, v = _solve_unimodular(x.p, x.q)
    return decompose(spec, matrix_to_word(GroupElement(x.p, u, x.q, v))).sigma_word


def _ext_gcd(a: int, b: int):
    if b == 0:
        return (a, 1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return (g, y, x - (a // b) * y)


def _solve_unimodular(p: int, q: int) -> tuple[int, int]:
    g, x, y = _ext_gcd(p, q)
    # p*x + q*y = g = +-1; v = x*g, u = -y*g gives p*v - u*q = 1
    return (-y * g, x * g)


# ----- structure ---------------------------------------------------------------

@dataclass(frozen=True)
class StructureVector:
    r2: float
    r3: float
    rinf: float

    def __str__(self) -> str:
        f = lambda x: "inf" if x == INF else str(int(x))
        return f"({f(self.r2)}, {f(self.r3)}, {f(self.rinf)})"

    def doubled(self) -> StructureVector:
        """(2 r2, 2 r3, 2 rinf - 1): the structure of the index-two modular part."""
        return StructureVector(2 * self.r2, 2 * self.r3, 2 * self.rinf - 1)


@dataclass(frozen=True)
class Survivor:
    """A surviving generator, usually a single S_n but possibly a short sigma word."""

    word: tuple[int, ...]
    order: float

    @property
    def index(self) -> int | None:
        return self.word[0] if len(self.word) == 1 else None


def block_survivors(spec, i: int) -> list[Survivor]:
    """Independent generators delivered by block i after eliminating its relations.

    Partners go first via S_j S_iota(j) = 1, then the chain relations
    S_(j-1) = S_j S_(iota(j)+delta_j) for j inside the block.
    """
    rng = spec.block_range(i)
    k, last = rng.start, rng.stop - 1
    gens = list(rng)
    relators = []
    for j in gens:
        m = spec.iota(j)
        if m >= j:
            relators.append(((j, 1), (m, 1)))
    for j in range(k + 1, last + 1):
        m = spec.iota(j) + spec.delta(j)
        relators.append(((j - 1, -1), (j, 1), (m, 1)))
    elim = tietze.eliminate(gens, relators, keep_order=gens)
    out = []
    for g in elim.survivors:
        word = tuple(n if e > 0 else spec.iota(n) for n, e in elim.words[g])
        cls = classify(eval_sigma_word(spec, word))
        if g in elim.powers and cls.order != elim.powers[g]:
            raise tietze.UnsupportedPresentation(
                f"{format_sigma_word(word)} has relator order {elim.powers[g]} but matrix order {cls.order}")
        if g not in elim.powers and cls.order != INF:
            raise tietze.UnsupportedPresentation(
                f"{format_sigma_word(word)} is free in the block but has finite order")
        out.append(Survivor(word, cls.order))
    return out


def period_counts(spec) -> StructureVector:
    """Contribution (r2, r3, rinf) of one pass over the spec's block list."""
    counts = {2: 0, 3: 0, INF: 0}
    for i in range(spec.period):
        for s in block_survivors(spec, i):
            counts[s.order] += 1
    return StructureVector(counts[2], counts[3], counts[INF])


def _has_negative_delta(spec) -> bool:
    return any(-1 in b.signs for b in spec.blocks)


@dataclass(frozen=True)
class Structure:
    hat: StructureVector
    modular: StructureVector
    per_period: StructureVector
    inside_modular_group: bool


def structure(spec: InvolutionSpec) -> Structure:
    """Free-product structure vectors of the subgroup and of its determinant-one part."""
    per = period_counts(spec)
    if spec.cyclic:
        scale = lambda x: INF if x else 0
        hat = StructureVector(scale(per.r2), scale(per.r3), scale(per.rinf))
    else:
        hat = per
    if not _has_negative_delta(spec):
        warnings.warn("all delta are +1; the subgroup is contained in PSL(2, Z)", NotNeumannOverM)
        return Structure(hat, hat, per, True)
    return Structure(hat, hat.doubled(), per, False)


# ----- determinant-one part -----------------------------------------------------

def choose_e(spec, window: Iterable[int]) -> int:
    """Index m of the generator E: smallest |m| with delta_m = -1, negative m first."""
    cands = sorted((abs(m), m) for m in window if spec.delta(m) == -1)
    if not cands:
        raise NoNegativeDeterminant("no generator of determinant -1 in the window")
    return cands[0][1]


def modular_generators(spec, window: Sequence[int]) -> list[tuple[int, ...]]:
    """Schreier generators E^e S_n E^(-e*delta_n + (delta_n - 1)/2) of the modular part.

    Returned as sigma words (E^-1 written as S_iota(m)), with identities and
    duplicate elements removed, in first-seen order.
    """
    window = list(window)
    m = choose_e(spec, window)
    e_inv = spec.iota(m)
    out, seen = [], set()
    for n in window:
        d = spec.delta(n)
        for eps in (0, 1):
            power = -eps * d + (d - 1) // 2
            word = (m,) * eps + (n,) + ((m,) * power if power > 0 else (e_inv,) * -power)
            g = eval_sigma_word(spec, word)
            if g.is_identity() or g in seen:
                continue
            seen.add(g)
            out.append(word)
    return out


def modular_independent_set(spec, hat_words: Sequence[tuple[int, ...]], e_word: tuple[int, ...]):
    """Independent generators of the modular part from independent ones of the full subgroup.

    Transversal {1, E}: determinant-one generators g give g and E g E^-1,
    determinant -1 generators give E g and g E^-1; trivial results are dropped.
    """
    e = eval_sigma_word(spec, e_word)
    e_inv_word = tuple(spec.iota(n) for n in reversed(e_word))
    out = []
    for w in hat_words:
        g = eval_sigma_word(spec, w)
        if g.det == 1:
            cands = [w, e_word + w + e_inv_word]
        else:
            cands = [e_word + w, w + e_inv_word]
        for c in cands:
            if not eval_sigma_word(spec, c).is_identity():
                out.append(c)
    return out
