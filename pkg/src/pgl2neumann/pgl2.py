"""Exact arithmetic in PGL(2, Z) using 2x2 integer matrices modulo sign.

Words over the letters below are evaluated left to right, so ``w f``
evaluates to omega * phi = tau = z + 1.

    letter  element      matrix (up to sign)
    w       A = omega    [[0, -1], [1, 0]]
    f       B = phi      [[0, -1], [1, 1]]
    F       B^2          phi * phi
    v       V = nu       [[-1, 0], [0, 1]]
    t       C = tau      [[1, 1], [0, 1]]
    T       C^-1         [[1, -1], [0, 1]]
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Iterable, Sequence


class WordSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class GroupElement:
    """An element of PGL(2, Z) stored in sign-canonical form.

    The first nonzero entry of (a, b, c, d) is always positive, so two
    instances compare equal exactly when they represent the same element.
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if det not in (1, -1):
            raise ValueError(f"determinant must be +-1, got {det}")
        lead = self.a or self.b
        if lead < 0:
            for name in "abcd":
                object.__setattr__(self, name, -getattr(self, name))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> GroupElement:
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        # well defined up to sign only; this is the canonical representative's
        return self.a + self.d

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other: GroupElement) -> GroupElement:
        a, b, c, d = self.entries()
        e, f, g, h = other.entries()
        return GroupElement(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> GroupElement:
        # adjugate; dividing by det = +-1 is a sign change, absorbed by canonicalization
        return GroupElement(self.d, -self.b, -self.c, self.a)

    def __pow__(self, k: int) -> GroupElement:
        if k < 0:
            return self.inverse() ** (-k)
        result, base = IDENTITY, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return self == IDENTITY

    def __str__(self) -> str:
        return f"+-[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


IDENTITY = GroupElement(1, 0, 0, 1)
OMEGA = GroupElement(0, -1, 1, 0)
PHI = GroupElement(0, -1, 1, 1)
NU = GroupElement(-1, 0, 0, 1)
TAU = GroupElement(1, 1, 0, 1)

LETTERS = {
    "w": OMEGA,
    "f": PHI,
    "F": PHI * PHI,
    "v": NU,
    "t": TAU,
    "T": TAU.inverse(),
}
LETTER_INVERSE = {"w": "w", "f": "F", "F": "f", "v": "v", "t": "T", "T": "t"}


def tau_power(n: int) -> GroupElement:
    return GroupElement(1, n, 0, 1)


def parse_word(text: str) -> str:
    """Normalize word text (whitespace-separated or contiguous) to a letter string."""
    letters = "".join(text.split())
    bad = sorted(set(letters) - set(LETTERS))
    if bad:
        raise WordSyntaxError(f"unknown letters in word: {''.join(bad)!r}")
    return letters


def format_word(word: str) -> str:
    return " ".join(word)


def eval_word(word: Iterable[str]) -> GroupElement:
    return reduce(lambda g, x: g * LETTERS[x], word, IDENTITY)


def free_reduce(word: str) -> str:
    """Cancel adjacent inverse pairs and fold f/F runs using phi^3 = 1, omega^2 = nu^2 = 1."""
    out: list[str] = []
    for x in word:
        if out and out[-1] == LETTER_INVERSE[x]:
            out.pop()
        elif out and out[-1] == x and x in "fF":
            out[-1] = LETTER_INVERSE[x]
        else:
            out.append(x)
    return "".join(out)


PRESENTATION_RELATORS = {
    "omega^2": "ww",
    "phi^3": "fff",
    "nu^2": "vv",
    "(omega nu)^2": "wvwv",
    "(omega phi nu)^2": "wfvwfv",
}


def check_presentation() -> dict[str, bool]:
    """Evaluate every defining relator of PGL(2, Z); all must be the identity."""
    return {name: eval_word(w).is_identity() for name, w in PRESENTATION_RELATORS.items()}


class ElementClass(enum.Enum):
    IDENTITY = "Identity"
    ELLIPTIC2 = "Elliptic2"
    ELLIPTIC3 = "Elliptic3"
    PARABOLIC = "Parabolic"
    HYPERBOLIC = "Hyperbolic"
    ISOTROPIC_INVOLUTION = "IsotropicInvolution"
    GLIDE_HYPERBOLIC = "GlideHyperbolic"

    @property
    def order(self) -> float:
        """Element order; ``math.inf`` for classes of infinite order."""
        return _ORDERS.get(self, float("inf"))


_ORDERS = {
    ElementClass.IDENTITY: 1,
    ElementClass.ELLIPTIC2: 2,
    ElementClass.ELLIPTIC3: 3,
    ElementClass.ISOTROPIC_INVOLUTION: 2,
}


def classify(g: GroupElement) -> ElementClass:
    t = abs(g.trace)
    if g.det == -1:
        return ElementClass.ISOTROPIC_INVOLUTION if t == 0 else ElementClass.GLIDE_HYPERBOLIC
    if g.is_identity():
        return ElementClass.IDENTITY
    if t == 0:
        return ElementClass.ELLIPTIC2
    if t == 1:
        return ElementClass.ELLIPTIC3
    if t == 2:
        return ElementClass.PARABOLIC
    return ElementClass.HYPERBOLIC


def is_isotropic(g: GroupElement) -> bool:
    """True iff g != 1 fixes a point of Q u {oo}, i.e. lies in a conjugate of <tau, nu>."""
    if g.is_identity():
        return False
    return abs(g.trace) == 2 if g.det == 1 else g.trace == 0


@dataclass(frozen=True)
class RationalPoint:
    """A point p/q of Q u {oo} in lowest terms with q >= 0; (1, 0) is infinity."""

    p: int
    q: int

    def __post_init__(self):
        if self.p == 0 and self.q == 0:
            raise ValueError("0/0 is not a point")
        g = gcd(self.p, self.q)
        p, q = self.p // g, self.q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def parse(cls, text: str) -> RationalPoint:
        text = text.strip()
        if text.lower() in ("inf", "oo", "infinity", "1/0"):
            return INFINITY
        num, _, den = text.partition("/")
        try:
            return cls(int(num), int(den) if den else 1)
        except ValueError as exc:
            raise ValueError(f"not a rational point: {text!r}") from exc

    def __str__(self) -> str:
        return "inf" if self.q == 0 else f"{self.p}/{self.q}"


INFINITY = RationalPoint(1, 0)


def moebius_image(g: GroupElement, x: RationalPoint) -> RationalPoint:
    return RationalPoint(g.a * x.p + g.b * x.q, g.c * x.p + g.d * x.q)
