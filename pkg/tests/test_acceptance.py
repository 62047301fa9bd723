"""Acceptance suite: twelve criteria, each printing one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the lines are written
straight to the terminal, bypassing output capture.
"""
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

from pgl2neumann import graph232, invospec, neumann, oracle, pgl2
from pgl2neumann.pgl2 import classify, eval_word

from . import oracles

DATA = Path(__file__).parent / "data"
SPECS = {
    "[BINF]": invospec.assemble([invospec.BINF]),
    "[B2,B3,BINF]": invospec.assemble([invospec.B2, invospec.B3, invospec.BINF]),
}


@pytest.fixture
def verdict(capsys):
    """Print the criterion line, then fail the test if needed."""
    def emit(number, ok, elapsed, limit=None, detail=""):
        fast = limit is None or elapsed < limit
        status = "PASS" if ok and fast else "FAIL"
        timing = f"{elapsed:.3f} s" + (f" (limit {limit} s)" if limit is not None else "")
        with capsys.disabled():
            print(f"\ncriterion {number:2d}: {status}  {timing}  {detail}")
        assert ok, detail
        assert fast, f"took {elapsed:.3f} s, limit {limit} s"
    return emit


def sigma_factors(spec, words):
    out = []
    for w in words:
        g = neumann.eval_sigma_word(spec, w)
        inv = tuple(spec.iota(n) for n in reversed(w))
        out.append(oracle.Factor(neumann.format_sigma_word(w), g, classify(g).order,
                                 neumann.format_sigma_word(inv)))
    return out


def test_01_presentation(verdict):
    t = time.perf_counter()
    report = pgl2.check_presentation()
    elapsed = time.perf_counter() - t
    ok = len(report) == 5 and all(report.values())
    verdict(1, ok, elapsed, 0.001, f"{sum(report.values())}/5 relators trivial")


def test_02_involution_validation(verdict):
    t = time.perf_counter()
    found = {name: invospec.validate(spec, range(-500, 501)) for name, spec in SPECS.items()}
    elapsed = time.perf_counter() - t
    ok = all(not v for v in found.values())
    verdict(2, ok, elapsed, 1, ", ".join(f"{k}: {len(v)} violations" for k, v in found.items()))


def test_03_sigma_relations(verdict):
    t = time.perf_counter()
    window = range(-200, 201)
    bad = 0
    for spec in SPECS.values():
        bad += len(neumann.verify_relations(spec, window))
        bad += sum(neumann.sigma_matrix(spec, n).det != spec.delta(n) for n in window)
    binf = SPECS["[BINF]"]
    s0, s2 = neumann.sigma_matrix(binf, 0), neumann.sigma_matrix(binf, 2)
    worked = s0 * s0 == s2.inverse() and (s0 * s0).entries() == oracles.canon(((1, -1), (-1, 2)))
    elapsed = time.perf_counter() - t
    verdict(3, bad == 0 and worked, elapsed, 1,
            f"{bad} relation/determinant failures, S0^2 = S2^-1 = +-[[1, -1], [-1, 2]]: {worked}")


def test_04_block_orders(verdict):
    t = time.perf_counter()
    spec = SPECS["[B2,B3,BINF]"]
    surv = [s for i in range(spec.period) for s in neumann.block_survivors(spec, i)]
    got = [(s.order, neumann.eval_sigma_word(spec, s.word)) for s in surv]
    (o2, g2), (o3, g3), (oi, gi) = got
    ok = (
        o2 == 2 and g2.entries() == oracles.canon(((-1, -2), (1, 1))) and g2.trace == 0
        and (g2 * g2).is_identity()
        and o3 == 3 and g3.entries() == oracles.canon(((0, -1), (1, -1))) and (g3 ** 3).is_identity()
        and oi == float("inf") and gi.det == -1
    )
    elapsed = time.perf_counter() - t
    verdict(4, ok, elapsed, None, f"orders {[o2, o3, oi]}, infinite survivor det {gi.det}")


def test_05_rewriting_round_trip(verdict):
    rng = random.Random(20240521)
    t = time.perf_counter()
    bad = members = 0
    for i in range(1000):
        spec = SPECS["[BINF]"] if i % 2 else SPECS["[B2,B3,BINF]"]
        if i % 4 == 3:
            # a product of sigma generators, spelled in letters: must land on the base node
            word = ""
            while True:
                piece = neumann.sigma_word_letters(spec, rng.randint(-6, 6))
                if len(word) + len(piece) > 30:
                    break
                word += piece
        else:
            word = "".join(rng.choice("wfFvtT") for _ in range(rng.randint(0, 30)))
        d = neumann.decompose(spec, word)
        n, e = d.node
        lhs = eval_word(word)
        rhs = neumann.eval_sigma_word(spec, d.sigma_word) * pgl2.tau_power(n) * (pgl2.NU if e else pgl2.IDENTITY)
        in_s = d.transversal().is_identity()
        bad += lhs != rhs or in_s != (d.node == (0, 0)) or d.in_subgroup != in_s
        members += in_s
    elapsed = time.perf_counter() - t
    verdict(5, bad == 0, elapsed, 5, f"{bad} mismatches over 1000 words, {members} in the subgroup")


def test_06_two_orbits(verdict):
    t = time.perf_counter()
    details, ok = [], True
    for name, spec in SPECS.items():
        g = graph232.build_window(spec, 100)
        r = graph232.c_orbits(g)
        conn = graph232.is_connected(g)
        ok &= len(r.orbits) == 2 and r.open_orbits == 2 and r.neumann and conn
        details.append(f"{name}: {len(r.orbits)} orbits, {r.open_orbits} open, V exchanges {r.neumann}, "
                       f"connected {conn}")
    elapsed = time.perf_counter() - t
    verdict(6, ok, elapsed, 1, "; ".join(details))


def test_07_structure_betti(verdict):
    t = time.perf_counter()
    bad = []
    for name, spec in SPECS.items():
        n_inf = sum(b is invospec.BINF for b in spec.blocks)
        for m in range(1, 11):
            blocks = m * spec.period
            res = graph232.extract_generators(spec, blocks)
            if not len(res.infinite) == res.beta == n_inf * m:
                bad.append(f"{name} m={m}: |L_inf|={len(res.infinite)} betti={res.beta}")
            hat = [s.word for s in res.finite + res.infinite]
            r = {2: 0, 3: 0, float("inf"): 0}
            for s in res.finite + res.infinite:
                r[s.order] += 1
            e = next(w for w in hat if neumann.eval_sigma_word(spec, w).det == -1)
            S = neumann.modular_independent_set(spec, hat, e)
            rs = {2: 0, 3: 0, float("inf"): 0}
            for w in S:
                rs[classify(neumann.eval_sigma_word(spec, w)).order] += 1
            want = {2: 2 * r[2], 3: 2 * r[3], float("inf"): 2 * r[float("inf")] - 1}
            if rs != want:
                bad.append(f"{name} m={m}: S counts {rs}, want {want}")
    elapsed = time.perf_counter() - t
    verdict(7, not bad, elapsed, 2, "; ".join(bad) or "m = 1..10 on both specs consistent")


def test_08_modular_part(verdict):
    t = time.perf_counter()
    bad = 0
    n_gens = 0
    for spec in SPECS.values():
        for w in neumann.modular_generators(spec, range(-10, 11)):
            g = neumann.eval_sigma_word(spec, w)
            n_gens += 1
            bad += g.det != 1 or neumann.decompose(spec, neumann.matrix_to_word(g)).node != (0, 0)
    spec = SPECS["[BINF]"]
    hat = [s.word for i in range(2) for s in neumann.block_survivors(spec, i)]
    S = neumann.modular_independent_set(spec, hat, hat[0])
    v = oracle.freeness_scan(sigma_factors(spec, S), 8)
    orders = [classify(neumann.eval_sigma_word(spec, w)).order for w in S]
    formula = sum(oracle.free_product_count(orders, k) for k in range(1, 9))
    elapsed = time.perf_counter() - t
    ok = bad == 0 and v.passed and v.words == v.expected == formula
    verdict(8, ok, elapsed, 10, f"{n_gens} modular generators, {bad} bad; independent set "
            f"{[neumann.format_sigma_word(w) for w in S]} L=8: {str(v).splitlines()[0]}, formula {formula}")


def test_09_anisotropy(verdict):
    t = time.perf_counter()
    results = {name: oracle.anisotropy_scan(spec, range(-5, 10), 6) for name, spec in SPECS.items()}
    letters, allowed = oracle.full_group_letters()
    control = oracle.isotropy_scan(letters, allowed, 2)
    elapsed = time.perf_counter() - t
    ok = all(v.passed for v in results.values()) and not control.passed and "A B" in control.witnesses
    detail = "; ".join(f"{k}: {str(v).splitlines()[0]}" for k, v in results.items())
    verdict(9, ok, elapsed, 10, f"{detail}; full group L=2 fails with A B: {'A B' in control.witnesses}")


def test_10_maximality(verdict):
    t = time.perf_counter()
    reports = {name: oracle.maximality_identity_scan(spec, range(-50, 51)) for name, spec in SPECS.items()}
    checked = all(spec.iota(k) + spec.iota(n - k) != n
                  for name, spec in SPECS.items() for n, k in reports[name].witnesses.items())
    n0 = 7
    control = oracle.maximality_identity_scan(lambda k: n0 - k, [n0], range(-50, 51))
    elapsed = time.perf_counter() - t
    ok = all(r.passed and len(r.witnesses) == 101 for r in reports.values()) and checked and not control.witnesses
    verdict(10, ok, elapsed, 1, f"witnesses {[len(r.witnesses) for r in reports.values()]}, "
            f"negative control {len(control.witnesses)} witnesses")


def test_11_fig1_fixture(verdict):
    t = time.perf_counter()
    gens = graph232.fig1_generators(1)
    mats = [(name, eval_word(w)) for name, w in gens]
    involutions = all((g * g).is_identity() and not g.is_identity() for _, g in mats)
    v = oracle.freeness_scan([oracle.Factor(name, g, 2) for name, g in mats], 6)
    elapsed = time.perf_counter() - t
    first = v.witnesses[0] if v.witnesses else "none"
    verdict(11, involutions and v.passed, elapsed, 5,
            f"{len(gens)} generators, all involutions: {involutions}; freeness L=6: "
            f"{'PASS' if v.passed else 'FAIL'} ({v.words} words, first witness {first})")


def _cli(*argv):
    proc = subprocess.run([sys.executable, "-m", "pgl2neumann", *argv], capture_output=True, check=False)
    return proc.returncode, proc.stdout


def test_12_determinism(verdict, tmp_path):
    t = time.perf_counter()
    spec = str(DATA / "sbb.spec")
    same = []
    for argv in (["verify", "--spec", spec, "--window", "200"],
                 ["scan", "--spec", spec, "--check", "anisotropy", "--max-len", "5"],
                 ["scan", "--spec", spec, "--check", "freeness", "--max-len", "6"]):
        same.append(_cli(*argv) == _cli(*argv))
    dots = []
    for i in range(2):
        path = tmp_path / f"g{i}.dot"
        _cli("graph", "--spec", spec, "--stage", "bar0", "--window", "20", "--dot", str(path))
        dots.append(path.read_bytes())
    same.append(dots[0] == dots[1] and dots[0].startswith(b"digraph G {"))
    elapsed = time.perf_counter() - t
    verdict(12, all(same), elapsed, None, f"identical outputs: {same}")
