"""Tietze elimination on presentations whose relators are short words.

Words are tuples of ``(generator, exponent)`` pairs with exponent +-1.
"""
from __future__ import annotations

from dataclasses import dataclass

Word = tuple


class UnsupportedPresentation(ValueError):
    """Elimination stalled on a relator that is not a power of one generator."""


def reduce_word(word):
    out = []
    for g, e in word:
        if out and out[-1] == (g, -e):
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def cyclic_reduce(word):
    w = list(reduce_word(word))
    while len(w) >= 2 and w[0] == (w[-1][0], -w[-1][1]):
        w = w[1:-1]
    return tuple(w)


def invert(word):
    return tuple((g, -e) for g, e in reversed(word))


def substitute(word, gen, replacement):
    """Replace every occurrence of ``gen`` (and its inverse) in ``word``."""
    out = []
    inv = invert(replacement)
    for g, e in word:
        if g == gen:
            out.extend(replacement if e > 0 else inv)
        else:
            out.append((g, e))
    return reduce_word(out)


def solve_for(relator, gen):
    """Rewrite relator == 1, in which ``gen`` occurs once, as gen = word."""
    i = next(k for k, (g, _) in enumerate(relator) if g == gen)
    e = relator[i][1]
    # relator = u g^e v = 1  =>  g^e = u^-1 v^-1
    rest = invert(relator[:i]) + invert(relator[i + 1:])
    rest = reduce_word(rest)
    return rest if e > 0 else invert(rest)


@dataclass
class Elimination:
    survivors: list
    powers: dict          # surviving generator -> order forced by a relator x^k
    eliminated: dict      # eliminated generator -> expression in survivors
    words: dict           # surviving generator -> word in the original generators


@dataclass(frozen=True)
class Fresh:
    """A generator introduced by a change of variables x = u."""

    number: int


def root(word):
    """Return (u, k) with word == u^k and k maximal."""
    n = len(word)
    for size in range(1, n + 1):
        if n % size == 0 and word[:size] * (n // size) == word:
            return word[:size], n // size
    return word, 1


def _single_choice(rels, rank):
    choice = None
    for idx, r in enumerate(rels):
        counts: dict = {}
        for g, _ in r:
            counts[g] = counts.get(g, 0) + 1
        for g, c in counts.items():
            if c == 1:
                key = (-rank.get(g, -1), idx)
                if choice is None or key < choice[0]:
                    choice = (key, idx, g)
    return choice


def eliminate(generators, relators, keep_order=None) -> Elimination:
    """Eliminate generators occurring exactly once in some relator until none is left.

    ``keep_order`` ranks generators by how much we prefer to keep them; the
    generator with the lowest preference is eliminated first.  When a
    relator is a proper power u^k, a fresh generator x = u replaces one
    generator occurring once in u.  Whatever is left must be free
    generators or generators with a single power relator.
    """
    gens = list(generators)
    rank = {g: i for i, g in enumerate(keep_order or gens)}
    rels = [r for r in (cyclic_reduce(r) for r in relators) if r]
    eliminated: dict = {}
    words = {g: ((g, 1),) for g in gens}
    fresh = 0

    def apply(g, expr):
        nonlocal rels
        gens.remove(g)
        for h in list(eliminated):
            eliminated[h] = substitute(eliminated[h], g, expr)
        eliminated[g] = expr
        rels = [r for r in (cyclic_reduce(substitute(r, g, expr)) for r in rels) if r]

    for _ in range(10 * (len(gens) + len(rels)) + 10):
        choice = _single_choice(rels, rank)
        if choice is not None:
            _, idx, g = choice
            expr = solve_for(rels[idx], g)
            del rels[idx]
            apply(g, expr)
            continue
        swapped = False
        for r in rels:
            u, k = root(r)
            if k == 1 or len(u) == 1:
                continue
            single = [g for g in {g for g, _ in u} if sum(h == g for h, _ in u) == 1]
            if not single:
                continue
            g = max(single, key=lambda h: (rank.get(h, -1), repr(h)))
            x = Fresh(fresh)
            fresh += 1
            words[x] = reduce_word(tuple(p for h, e in u for p in (words[h] if e > 0 else invert(words[h]))))
            rank[x] = -fresh  # fresh generators are kept in preference to everything else
            gens.append(x)
            apply(g, solve_for(u + ((x, -1),), g))
            swapped = True
            break
        if not swapped:
            break
    else:
        raise UnsupportedPresentation("elimination did not terminate")
    powers: dict = {}
    for r in rels:
        names = {g for g, _ in r}
        signs = {e for _, e in r}
        if len(names) != 1 or len(signs) != 1:
            raise UnsupportedPresentation(f"relator {r} is not a power of one generator")
        (g,) = names
        k = len(r)
        powers[g] = k if g not in powers else _gcd(powers[g], k)
    return Elimination(gens, powers, eliminated, {g: words[g] for g in gens})


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a
