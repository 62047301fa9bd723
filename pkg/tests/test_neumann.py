import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from pgl2neumann import invospec, neumann
from pgl2neumann.neumann import (
    NoNegativeDeterminant,
    NotNeumannOverM,
    QuadrupleAction,
    StructureVector,
    act,
    decompose,
    eval_sigma_word,
    format_sigma_word,
    matrix_to_word,
    parse_sigma_word,
    reach_rational,
    sigma,
    sigma_matrix,
    structure,
    verify_relations,
    walk,
)
from pgl2neumann.pgl2 import INFINITY, ElementClass, RationalPoint, classify, eval_word, moebius_image

from . import oracles

words = st.text(alphabet="wfFvtT", max_size=30)


def test_sigma_values_binf(binf):
    assert sigma_matrix(binf, 0).entries() == (0, 1, 1, -1)
    assert sigma_matrix(binf, -1).entries() == (1, -1, -1, 2)
    assert sigma_matrix(binf, 2).entries() == (2, 1, 1, 1)
    # worked identity: S0^2 = S2^-1
    sq = sigma_matrix(binf, 0) ** 2
    assert sq == sigma_matrix(binf, 2).inverse()
    assert sq.entries() == (1, -1, -1, 2)


def test_sigma_values_sbb(sbb):
    assert sigma_matrix(sbb, -1).entries() == (1, 2, -1, -1)
    assert sigma_matrix(sbb, 0).entries() == (0, 1, -1, 1)


@pytest.mark.parametrize("names", [["BINF"], ["B2", "B3", "BINF"], ["B3", "BINF", "B2"]])
def test_sigma_matches_reference(names):
    spec = invospec.assemble([invospec.BUILTIN_BLOCKS[n] for n in names])
    iota, delta, _ = oracles.layout(names, 30)
    for n in spec.domain(20):
        assert sigma_matrix(spec, n).entries() == oracles.sigma(iota, delta, n)


def test_sigma_generator_report(binf):
    s = sigma(binf, 0)
    assert s.det == -1 and s.partner == 1
    assert s.element_class is ElementClass.GLIDE_HYPERBOLIC
    assert str(s) == "S0 = +-[[0, 1], [1, -1]]  det=-1  partner=S1  class=GlideHyperbolic  order=inf"


def test_sigma_word_syntax():
    assert parse_sigma_word("S0 S-1  S12") == (0, -1, 12)
    assert format_sigma_word((0, -1)) == "S0 S-1"
    with pytest.raises(ValueError):
        parse_sigma_word("S0 T1")


def test_relations_hold(binf, sbb):
    assert verify_relations(binf, range(-100, 101)) == []
    assert verify_relations(sbb, range(-100, 101)) == []


def test_action_examples(binf):
    assert act(binf, "w", (0, 0)) == (1, 1)
    assert walk(binf, "f", (0, 0)) == (0, 1)
    assert walk(binf, "ff", (0, 0)) == (2, 0)
    assert walk(binf, "fff", (0, 0)) == (0, 0)
    q = QuadrupleAction(binf)
    assert q.image("c", (0, 0)) == (1, 0)
    assert q.image("c", (0, 1)) == (-1, 1)
    assert q.label((7, 0)) == (-2, 7)


def test_decompose_example(sbb):
    d = decompose(sbb, "w")
    assert d.sigma_word == (0,)
    assert d.node == (1, 0)
    assert not d.in_subgroup


@settings(max_examples=300)
@given(words)
def test_decompose_contract(w):
    for spec in (invospec.assemble([invospec.BINF]), invospec.assemble([invospec.B2, invospec.B3, invospec.BINF])):
        d = decompose(spec, w)
        assert eval_sigma_word(spec, d.sigma_word) * d.transversal() == eval_word(w)
        assert d.node == walk(spec, w)


@given(words)
def test_matrix_to_word_round_trip(w):
    g = eval_word(w)
    assert eval_word(matrix_to_word(g)) == g


@given(st.integers(-400, 400), st.integers(1, 300))
def test_reach_rational(p, q):
    spec = invospec.assemble([invospec.B2, invospec.B3, invospec.BINF])
    x = RationalPoint(p, q)
    assert moebius_image(eval_sigma_word(spec, reach_rational(spec, x)), INFINITY) == x


def test_reach_infinity_is_empty(binf):
    assert reach_rational(binf, INFINITY) == ()


@given(st.integers(-300, 300))
def test_sigma_partner_is_inverse(n):
    spec = invospec.assemble([invospec.B2, invospec.B3, invospec.BINF])
    g = sigma_matrix(spec, n)
    assert (g * sigma_matrix(spec, spec.iota(n))).is_identity()
    assert g.det == spec.delta(n)


def test_structure_vectors(binf, sbb):
    s = structure(binf)
    assert s.per_period == StructureVector(0, 0, 1)
    assert str(s.hat) == "(0, 0, inf)"
    t = structure(sbb)
    assert t.per_period == StructureVector(1, 1, 1)
    assert str(t.modular) == "(inf, inf, inf)"
    finite = structure(invospec.assemble([invospec.B2, invospec.B3, invospec.BINF], mode="finite"))
    assert finite.hat == StructureVector(1, 1, 1)
    assert finite.modular == StructureVector(2, 2, 1)


def test_structure_warns_without_negative_delta():
    spec = invospec.assemble([invospec.B2, invospec.B3])
    with pytest.warns(NotNeumannOverM):
        s = structure(spec)
    assert s.inside_modular_group and s.modular == s.hat
    with pytest.raises(NoNegativeDeterminant):
        neumann.choose_e(spec, range(-10, 10))


def test_choose_e(binf, sbb):
    assert neumann.choose_e(binf, range(-5, 10)) == 0
    assert neumann.choose_e(sbb, range(-5, 10)) == 4


@pytest.mark.parametrize("spec_name", ["binf", "sbb"])
def test_modular_generators_are_in_subgroup(spec_name, request):
    spec = request.getfixturevalue(spec_name)
    gens = neumann.modular_generators(spec, range(-6, 10))
    assert gens
    for w in gens:
        g = eval_sigma_word(spec, w)
        assert g.det == 1
        assert decompose(spec, matrix_to_word(g)).in_subgroup


def test_modular_independent_set_counts(sbb):
    hat = [s.word for i in range(sbb.period) for s in neumann.block_survivors(sbb, i)]
    S = neumann.modular_independent_set(sbb, hat, (4,))
    orders = sorted(
        (classify(eval_sigma_word(sbb, w)).order for w in S), key=lambda o: (o == math.inf, o)
    )
    assert orders == [2, 2, 3, 3, math.inf]
    assert all(eval_sigma_word(sbb, w).det == 1 for w in S)


def test_random_words_fixed_seed(sbb):
    rng = random.Random(7)
    for _ in range(200):
        w = "".join(rng.choice("wfFvtT") for _ in range(rng.randint(0, 30)))
        d = decompose(sbb, w)
        assert d.in_subgroup == (d.node == (0, 0))
        assert eval_sigma_word(sbb, d.sigma_word) * d.transversal() == eval_word(w)
