"""Bounded brute-force checks: freeness, anisotropy and the maximality identity.

Reduced words are enumerated level by level with numpy.  Each level keeps
the four matrix entries of every word plus a parent pointer, so witnesses
can be spelled out afterwards.  Entries stay in int64 unless a crude bound
says they might overflow, in which case object arrays (Python ints) are used.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .pgl2 import GroupElement, classify

INF = math.inf
_INT64_SAFE = 2 ** 62


class WitnessInconclusive(LookupError):
    def __init__(self, n: int):
        super().__init__(f"no witness for n={n} inside the window; enlarge it")
        self.n = n


class DeclaredOrderMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Factor:
    """One free factor: a generator and the order it is declared to have."""

    name: str
    matrix: GroupElement
    order: float
    inverse_name: str | None = None


def check_factors(factors: Sequence[Factor]) -> None:
    for f in factors:
        actual = classify(f.matrix).order
        if actual != f.order:
            raise DeclaredOrderMismatch(f"{f.name}: declared order {f.order}, matrix has {actual}")


@dataclass(frozen=True)
class Letter:
    name: str
    matrix: GroupElement
    factor: int
    inverse: bool = False


def letters_for(factors: Sequence[Factor]) -> list[Letter]:
    """Order 2: g.  Order 3: g, g^2.  Infinite: g, g^-1."""
    out = []
    for i, f in enumerate(factors):
        out.append(Letter(f.name, f.matrix, i))
        if f.order == 3:
            out.append(Letter(f"{f.name}^2", f.matrix * f.matrix, i))
        elif f.order == INF:
            out.append(Letter(f.inverse_name or f"{f.name}^-1", f.matrix.inverse(), i, True))
    return out


def free_product_rules(letters: Sequence[Letter], factors: Sequence[Factor]) -> np.ndarray:
    """allowed[i, j]: letter j may follow letter i in a normal form."""
    k = len(letters)
    allowed = np.ones((k, k), dtype=bool)
    for i, x in enumerate(letters):
        for j, y in enumerate(letters):
            if x.factor != y.factor:
                continue
            if factors[x.factor].order == INF:
                allowed[i, j] = x.inverse == y.inverse
            else:
                allowed[i, j] = False
    return allowed


def count_words(allowed: np.ndarray, length: int) -> list[int]:
    """Number of admissible words of each length 1..length (Python ints, no overflow)."""
    k = allowed.shape[0]
    ending = [1] * k
    counts = [k] if length >= 1 else []
    cols = [[i for i in range(k) if allowed[i, j]] for j in range(k)]
    for _ in range(1, length):
        ending = [sum(ending[i] for i in cols[j]) for j in range(k)]
        counts.append(sum(ending))
    return counts


def free_product_count(orders: Sequence[float], length: int) -> int:
    """Reduced words of exactly this length in the free product of cyclic groups of the given orders."""
    factors = [Factor(str(i), GroupElement(1, 0, 0, 1), o) for i, o in enumerate(orders)]
    letters = letters_for(factors)
    return count_words(free_product_rules(letters, factors), length)[-1]


# ----- enumeration -------------------------------------------------------------

@dataclass
class _Level:
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    det: np.ndarray
    last: np.ndarray
    parent: np.ndarray


def _bound_dtype(letters: Sequence[Letter], length: int):
    biggest = max(max(abs(v) for v in x.matrix.entries()) for x in letters)
    bound = 2 ** (length - 1) * max(biggest, 1) ** length
    return np.int64 if bound < _INT64_SAFE else object


def _canonical(a, b, c, d):
    sign = np.where(a != 0, np.sign(a), np.sign(b)) if a.dtype != object else \
        np.array([(1 if (x or y) > 0 else -1) for x, y in zip(a, b)], dtype=object)
    return a * sign, b * sign, c * sign, d * sign


class WordEnumerator:
    """Walks all admissible words of length 1..max_len, one level at a time."""

    def __init__(self, letters: Sequence[Letter], allowed: np.ndarray, max_len: int):
        self.letters = list(letters)
        self.allowed = allowed
        self.max_len = max_len
        self.dtype = _bound_dtype(self.letters, max_len)
        m = np.array([x.matrix.entries() for x in self.letters], dtype=self.dtype).reshape(-1, 4)
        self.la, self.lb, self.lc, self.ld = (m[:, i] for i in range(4))
        self.ldet = np.array([x.matrix.det for x in self.letters], dtype=np.int8)
        self.levels: list[_Level] = []

    def first(self) -> _Level:
        k = len(self.letters)
        lvl = _Level(self.la.copy(), self.lb.copy(), self.lc.copy(), self.ld.copy(),
                     self.ldet.copy(), np.arange(k), np.full(k, -1))
        return lvl

    def extend(self, prev: _Level, j: int) -> _Level:
        """All words of ``prev`` followed by letter j, where allowed."""
        rows = np.nonzero(self.allowed[prev.last, j])[0]
        a, b, c, d = prev.a[rows], prev.b[rows], prev.c[rows], prev.d[rows]
        e, f, g, h = self.la[j], self.lb[j], self.lc[j], self.ld[j]
        na, nb, nc, nd = _canonical(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
        return _Level(na, nb, nc, nd, prev.det[rows] * self.ldet[j],
                      np.full(len(rows), j), rows)

    def next_level(self, prev: _Level) -> _Level:
        parts = [self.extend(prev, j) for j in range(len(self.letters))]
        cat = lambda name: np.concatenate([getattr(p, name) for p in parts])
        return _Level(*(cat(n) for n in ("a", "b", "c", "d", "det", "last", "parent")))

    def spell(self, depth: int, row: int) -> list[str]:
        """Letter names of word ``row`` at level ``depth`` (0-based), using stored levels."""
        out = []
        while depth >= 0:
            lvl = self.levels[depth]
            out.append(self.letters[int(lvl.last[row])].name)
            row = int(lvl.parent[row])
            depth -= 1
        return out[::-1]


def _is_identity(lvl: _Level) -> np.ndarray:
    return (lvl.a == 1) & (lvl.b == 0) & (lvl.c == 0) & (lvl.d == 1)


def _is_isotropic(lvl: _Level) -> np.ndarray:
    tr = lvl.a + lvl.d
    pos = (lvl.det == 1) & ((tr == 2) | (tr == -2)) & ~_is_identity(lvl)
    neg = (lvl.det == -1) & (tr == 0)
    return (pos | neg).astype(bool)


# ----- verdicts ----------------------------------------------------------------

@dataclass
class Verdict:
    passed: bool
    words: int
    expected: int | None = None
    witnesses: list = field(default_factory=list)
    note: str = ""

    def __str__(self) -> str:
        head = "PASS" if self.passed else "FAIL"
        parts = [f"{head}: {self.words} words"]
        if self.expected is not None:
            parts.append(f"expected {self.expected}")
        if self.note:
            parts.append(self.note)
        lines = [", ".join(parts)]
        for w in self.witnesses:
            lines.append("  witness: " + w)
        return "\n".join(lines)


def freeness_scan(factors: Sequence[Factor], max_len: int) -> Verdict:
    """All admissible words of length <= max_len must give distinct non-identity matrices."""
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    check_factors(factors)
    letters = letters_for(factors)
    allowed = free_product_rules(letters, factors)
    expected = sum(count_words(allowed, max_len))
    en = WordEnumerator(letters, allowed, max_len)
    lvl = en.first()
    en.levels.append(lvl)
    for _ in range(1, max_len):
        lvl = en.next_level(lvl)
        en.levels.append(lvl)
    sizes = [len(l.a) for l in en.levels]
    total = sum(sizes)
    depth = np.concatenate([np.full(s, i) for i, s in enumerate(sizes)])
    row = np.concatenate([np.arange(s) for s in sizes])
    witnesses = []
    for i, l in enumerate(en.levels):
        for r in np.nonzero(_is_identity(l))[0][: max(0, 5 - len(witnesses))]:
            witnesses.append(" ".join(en.spell(i, int(r))) + " = 1")
    keys = np.stack([np.concatenate([getattr(l, n) for l in en.levels]) for n in "abcd"], axis=1)
    if keys.dtype == object:
        seen: dict = {}
        for idx, key in enumerate(map(tuple, keys)):
            if key in seen and len(witnesses) < 10:
                j = seen[key]
                witnesses.append(" ".join(en.spell(int(depth[j]), int(row[j]))) + " == "
                                 + " ".join(en.spell(int(depth[idx]), int(row[idx]))))
            seen.setdefault(key, idx)
    else:
        _, first, inverse, counts = np.unique(keys, axis=0, return_index=True,
                                              return_inverse=True, return_counts=True)
        inverse = inverse.reshape(-1)
        dup = np.nonzero(counts[inverse] > 1)[0]
        dup = dup[first[inverse[dup]] != dup]
        for idx in dup[: max(0, 10 - len(witnesses))]:
            j = first[inverse[idx]]
            witnesses.append(" ".join(en.spell(int(depth[j]), int(row[j]))) + " == "
                             + " ".join(en.spell(int(depth[idx]), int(row[idx]))))
    passed = not witnesses and total == expected
    return Verdict(passed, total, expected, witnesses)


def isotropy_scan(letters: Sequence[Letter], allowed: np.ndarray, max_len: int,
                  max_witnesses: int = 10) -> Verdict:
    """Admissible words of length <= max_len; PASS iff none is a nontrivial isotropic element.

    The last level is never stored: it is produced one final letter at a
    time and only tested.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    en = WordEnumerator(letters, allowed, max_len)
    witnesses: list[str] = []
    total = 0

    def note(lvl, depth, spell_last=None):
        nonlocal total
        total += len(lvl.a)
        hits = np.nonzero(_is_isotropic(lvl))[0]
        for r in hits[: max(0, max_witnesses - len(witnesses))]:
            if spell_last is None:
                witnesses.append(" ".join(en.spell(depth, int(r))))
            else:
                witnesses.append(" ".join(en.spell(depth - 1, int(lvl.parent[r])) + [spell_last]))
        return len(hits)

    bad = 0
    lvl = en.first()
    en.levels.append(lvl)
    bad += note(lvl, 0)
    for depth in range(1, max_len - 1):
        lvl = en.next_level(lvl)
        en.levels.append(lvl)
        bad += note(lvl, depth)
    if max_len >= 2:
        for j in range(len(en.letters)):
            part = en.extend(lvl, j)
            bad += note(part, max_len - 1, en.letters[j].name)
    expected = sum(count_words(allowed, max_len))
    return Verdict(bad == 0, total, expected, witnesses,
                   note=f"{bad} isotropic" if bad else "")


def sigma_letters(spec, window: Iterable[int]):
    """Letters S_n for n in the window; S_n may not be followed by its inverse S_iota(n)."""
    from .neumann import sigma_matrix

    window = list(window)
    letters = [Letter(f"S{n}", sigma_matrix(spec, n), i) for i, n in enumerate(window)]
    pos = {n: i for i, n in enumerate(window)}
    allowed = np.ones((len(window), len(window)), dtype=bool)
    for i, n in enumerate(window):
        j = pos.get(spec.iota(n))
        if j is not None:
            allowed[i, j] = False
    return letters, allowed


def anisotropy_scan(spec, window: Iterable[int], max_len: int = 6) -> Verdict:
    letters, allowed = sigma_letters(spec, window)
    return isotropy_scan(letters, allowed, max_len)


def full_group_letters():
    """A, B, B^2, V as free-product letters; the whole extended group, used as a negative control."""
    from .pgl2 import NU, OMEGA, PHI

    factors = [Factor("A", OMEGA, 2), Factor("B", PHI, 3), Factor("V", NU, 2)]
    letters = letters_for(factors)
    return letters, free_product_rules(letters, factors)


# ----- maximality identity -----------------------------------------------------

@dataclass
class MaximalityReport:
    witnesses: dict       # n -> k with iota(k) + iota(n - k) != n
    inconclusive: list    # n with no witness in the window

    @property
    def passed(self) -> bool:
        return not self.inconclusive

    def __str__(self) -> str:
        head = "PASS" if self.passed else "INCONCLUSIVE"
        lines = [f"{head}: {len(self.witnesses)} witnessed, {len(self.inconclusive)} without witness"]
        for n in sorted(self.witnesses):
            lines.append(f"  n={n}: k={self.witnesses[n]}")
        for n in self.inconclusive:
            lines.append(f"  n={n}: no witness")
        return "\n".join(lines)


def maximality_identity_scan(iota: Callable[[int], int] | object, ns: Iterable[int],
                             ks: Iterable[int] | None = None, strict: bool = False) -> MaximalityReport:
    """For each n look for k with iota(k) + iota(n - k) != n.

    ``iota`` is a callable or anything with an ``iota`` method.  Failing to
    find a witness inside a finite window is not a refutation, so those n
    are listed as inconclusive (or raise WitnessInconclusive when strict).
    """
    f = iota if callable(iota) else iota.iota
    ns = list(ns)
    ks = list(ns if ks is None else ks)
    witnesses, missing = {}, []
    for n in ns:
        for k in ks:
            if f(k) + f(n - k) != n:
                witnesses[n] = k
                break
        else:
            if strict:
                raise WitnessInconclusive(n)
            missing.append(n)
    return MaximalityReport(witnesses, missing)
