import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pgl2neumann import graph232, neumann, oracle
from pgl2neumann.oracle import (
    DeclaredOrderMismatch,
    Factor,
    WitnessInconclusive,
    anisotropy_scan,
    count_words,
    free_product_count,
    free_product_rules,
    freeness_scan,
    full_group_letters,
    isotropy_scan,
    letters_for,
    maximality_identity_scan,
)
from pgl2neumann.pgl2 import GroupElement, classify, eval_word

INF = math.inf


def sigma_factors(spec, words):
    out = []
    for w in words:
        g = neumann.eval_sigma_word(spec, w)
        inv = tuple(spec.iota(n) for n in reversed(w))
        out.append(Factor(neumann.format_sigma_word(w), g, classify(g).order, neumann.format_sigma_word(inv)))
    return out


def brute_count(orders, length):
    """Reduced words spelled out symbol by symbol: (factor, exponent) with neighbours in different factors."""
    syllables = []
    for i, o in enumerate(orders):
        if o == INF:
            syllables += [(i, 1), (i, -1)]
        else:
            syllables += [(i, e) for e in range(1, o)]
    n = 0
    for w in itertools.product(syllables, repeat=length):
        ok = True
        for x, y in zip(w, w[1:]):
            if x[0] == y[0] and not (orders[x[0]] == INF and x[1] == y[1]):
                ok = False
                break
        n += ok
    return n


@pytest.mark.parametrize("orders", [(2, 2), (2, 3), (3, INF), (2, 3, INF), (INF, INF)])
@pytest.mark.parametrize("length", [1, 2, 3, 4])
def test_count_matches_brute_force(orders, length):
    assert free_product_count(orders, length) == brute_count(orders, length)


def test_known_counts():
    # Z/2 * Z/3 with letters A, B, B^2
    assert [free_product_count((2, 3), n) for n in (1, 2, 3, 4)] == [3, 4, 6, 8]
    # free group of rank 2
    assert [free_product_count((INF, INF), n) for n in (1, 2, 3)] == [4, 12, 36]


def test_single_involution_passes(sbb):
    v = freeness_scan(sigma_factors(sbb, [(-1,)]), 5)
    assert v.passed and v.words == 1 == v.expected


def test_forced_collision():
    g = GroupElement(2, 1, 1, 1)
    v = freeness_scan([Factor("g", g, INF), Factor("h", g * g, INF)], 2)
    assert not v.passed
    assert "h == g g" in v.witnesses


def test_identity_witness():
    a = eval_word("w")
    v = freeness_scan([Factor("A", a, 2), Factor("A'", a, 2)], 2)
    assert not v.passed
    assert any(w.endswith("= 1") for w in v.witnesses)


def test_declared_order_checked():
    with pytest.raises(DeclaredOrderMismatch):
        freeness_scan([Factor("A", eval_word("w"), 3)], 2)


def test_binf_survivors_free(binf):
    hat = [s.word for i in range(2) for s in neumann.block_survivors(binf, i)]
    v = freeness_scan(sigma_factors(binf, hat), 8)
    assert v.passed and v.words == v.expected == 13120


def test_sbb_survivors_free(sbb):
    hat = [s.word for i in range(3) for s in neumann.block_survivors(sbb, i)]
    v = freeness_scan(sigma_factors(sbb, hat), 8)
    assert v.passed and v.words == 58469


def test_sbb_modular_set_free_short(sbb):
    hat = [s.word for i in range(3) for s in neumann.block_survivors(sbb, i)]
    S = neumann.modular_independent_set(sbb, hat, (4,))
    v = freeness_scan(sigma_factors(sbb, S), 6)
    assert v.passed and v.words == v.expected == 111820


def test_object_dtype_path_agrees(binf):
    # big entries force Python-int arithmetic; the verdict must not change
    g = neumann.eval_sigma_word(binf, (0,) * 6)
    letters = letters_for([Factor("g", g, INF)])
    assert oracle._bound_dtype(letters, 40) is object
    v = freeness_scan([Factor("g", g, INF)], 40)
    assert v.passed and v.words == 80


def test_anisotropy_binf(binf):
    v = anisotropy_scan(binf, range(-5, 10), 6)
    assert v.passed and v.words == v.expected


def test_full_group_negative_control():
    letters, allowed = full_group_letters()
    v = isotropy_scan(letters, allowed, 2)
    assert not v.passed
    assert "A B" in v.witnesses
    assert "V" in v.witnesses


def test_isotropy_last_level_spelling(binf):
    letters, allowed = oracle.sigma_letters(binf, range(-2, 3))
    a = isotropy_scan(letters, allowed, 3)
    assert a.words == sum(count_words(allowed, 3))


def test_maximality(binf, sbb):
    for spec in (binf, sbb):
        rep = maximality_identity_scan(spec, range(-50, 51))
        assert rep.passed and len(rep.witnesses) == 101
        for n, k in rep.witnesses.items():
            assert spec.iota(k) + spec.iota(n - k) != n


def test_maximality_negative_control():
    n = 7
    rep = maximality_identity_scan(lambda k: n - k, [n], range(-50, 51))
    assert rep.witnesses == {} and rep.inconclusive == [n]
    assert not rep.passed
    with pytest.raises(WitnessInconclusive):
        maximality_identity_scan(lambda k: n - k, [n], range(-50, 51), strict=True)


def test_fig1_freeness_fails():
    factors = [Factor(name, eval_word(w), 2) for name, w in graph232.fig1_generators(1)]
    v = freeness_scan(factors, 4)
    assert not v.passed
    assert "C^0 A C^0 V C^0 A C^0 V = 1" in v.witnesses


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from([2, 3, INF]), min_size=1, max_size=4), st.integers(1, 6))
def test_count_words_is_per_length(orders, length):
    factors = [Factor(str(i), GroupElement(1, 0, 0, 1), o) for i, o in enumerate(orders)]
    letters = letters_for(factors)
    counts = count_words(free_product_rules(letters, factors), length)
    assert len(counts) == length
    assert counts[-1] == free_product_count(orders, length)
    assert all(isinstance(c, int) for c in counts)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 5))
def test_scans_are_deterministic(length):
    letters, allowed = full_group_letters()
    assert str(isotropy_scan(letters, allowed, length)) == str(isotropy_scan(letters, allowed, length))
    assert isinstance(allowed, np.ndarray)
