"""Command-line front end.

Every subcommand prints a plain-text report and ends with a line
``RESULT <subcommand> <PASS|FAIL|INFO>``.  Exit status: 0 on success,
1 when a verification fails, 2 on bad input.
"""
from __future__ import annotations

import argparse
import sys
import warnings

from . import graph232, invospec, neumann, oracle, pgl2

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
MAX_LISTED = 20


class InputError(Exception):
    pass


def _load(args):
    if not args.spec:
        raise InputError("--spec is required")
    try:
        return invospec.load_spec(args.spec)
    except OSError as exc:
        raise InputError(f"cannot read spec: {exc}") from exc


def _window(args, default):
    n = default if args.window is None else args.window
    if n < 0:
        raise InputError("--window must be >= 0")
    return n


def _max_len(args, default):
    n = default if args.max_len is None else args.max_len
    if n < 1:
        raise InputError("--max-len must be >= 1")
    return n


def _list(out, items):
    items = list(items)
    for x in items[:MAX_LISTED]:
        print(f"  {x}", file=out)
    if len(items) > MAX_LISTED:
        print(f"  ... {len(items) - MAX_LISTED} more", file=out)


def cmd_verify(args, out):
    spec = _load(args)
    n = _window(args, 50)
    window = range(-n, n + 1)
    ok = True
    violations = invospec.validate(spec, window)
    print(f"involution data on [{-n}, {n}]: {len(violations)} violations", file=out)
    _list(out, violations)
    ok &= not violations
    relations = neumann.verify_relations(spec, window)
    print(f"generator relations on [{-n}, {n}]: {len(relations)} violations", file=out)
    _list(out, relations)
    ok &= not relations
    g = graph232.build_window(spec, n)
    axioms = graph232.validate_axioms(g)
    print(f"graph axioms on {len(g.vertices)} nodes: {len(axioms)} violations", file=out)
    _list(out, axioms)
    ok &= not axioms
    report = graph232.c_orbits(g)
    print(report, file=out)
    ok &= report.neumann
    return ok


def cmd_sigma(args, out):
    spec = _load(args)
    if args.n is not None:
        indices = [args.n]
    else:
        n = _window(args, 3)
        indices = range(-n, n + 1)
    for k in indices:
        print(neumann.sigma(spec, k), file=out)
    return None


def cmd_structure(args, out):
    spec = _load(args)
    if not spec.cyclic:
        raise InputError("structure needs a cyclic spec")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        st = neumann.structure(spec)
    print(f"per period: {st.per_period}", file=out)
    print(f"full subgroup: {st.hat}", file=out)
    print(f"modular part: {st.modular}", file=out)
    for w in caught:
        if issubclass(w.category, neumann.NotNeumannOverM):
            print(f"note: {w.message}; modular part equals the full subgroup", file=out)
    return None


def cmd_graph(args, out):
    spec = _load(args)
    n = _window(args, 6)
    g = graph232.build_window(spec, n)
    stage_name = args.stage or "gamma"
    h = graph232.stage(g, stage_name)
    if stage_name == "gamma":
        n_a = sum(1 for x, y in h.a.items() if x <= y)
        print(f"stage gamma: {len(h.vertices)} nodes, {n_a} A-edges, {len(h.b)} B-edges, "
              f"{len(h.boundary)} boundary", file=out)
        print(graph232.c_orbits(h), file=out)
    else:
        print(f"stage {stage_name}: {len(h.members)} vertices, {len(h.edges)} edges, "
              f"{len(h.boundary)} boundary, betti {graph232.betti(h)}", file=out)
        if h.removed:
            labels = sorted(set(h.removed))
            print("pruned labels: " + ", ".join("{" + ", ".join(f"S{i}" for i in l) + "}"
                                                 for l in labels), file=out)
    if args.dot:
        try:
            graph232.export_dot(h, args.dot)
        except OSError as exc:
            raise InputError(f"cannot write {args.dot}: {exc}") from exc
        print(f"wrote {args.dot}", file=out)
    return None


def cmd_rewrite(args, out):
    spec = _load(args)
    if args.word is None:
        raise InputError("--word is required")
    word = pgl2.parse_word(args.word)
    dec = neumann.decompose(spec, word)
    lhs = pgl2.eval_word(word)
    rhs = neumann.eval_sigma_word(spec, dec.sigma_word) * dec.transversal()
    n, e = dec.node
    print(f"word: {pgl2.format_word(word) or '(empty)'}", file=out)
    print(f"sigma word: {neumann.format_sigma_word(dec.sigma_word) or '(empty)'}", file=out)
    print(f"node: ({n},{e})", file=out)
    print(f"in subgroup: {'yes' if dec.in_subgroup else 'no'}", file=out)
    print(f"value: {lhs}", file=out)
    print(f"check: word = sigma word * tau^{n} nu^{e}: {'ok' if lhs == rhs else 'MISMATCH'}", file=out)
    return lhs == rhs


def cmd_reach(args, out):
    spec = _load(args)
    if args.target is None:
        raise InputError("--target is required")
    try:
        x = pgl2.RationalPoint.parse(args.target)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    word = neumann.reach_rational(spec, x)
    image = pgl2.moebius_image(neumann.eval_sigma_word(spec, word), pgl2.INFINITY)
    print(f"target: {x}", file=out)
    print(f"sigma word: {neumann.format_sigma_word(word) or '(empty)'}", file=out)
    print(f"image of inf: {image}", file=out)
    return image == x


def _factors(spec, words):
    out = []
    for w in words:
        g = neumann.eval_sigma_word(spec, w)
        inv = tuple(spec.iota(n) for n in reversed(w))
        out.append(oracle.Factor(neumann.format_sigma_word(w), g, pgl2.classify(g).order,
                                 neumann.format_sigma_word(inv)))
    return out


def cmd_scan(args, out):
    spec = _load(args)
    check = args.check or "anisotropy"
    if check == "freeness":
        length = _max_len(args, 8)
        blocks = args.window if args.window is not None else spec.period
        if blocks < 1:
            raise InputError("--window (number of blocks) must be >= 1 for freeness")
        words = [s.word for i in range(blocks) for s in neumann.block_survivors(spec, i)]
        print(f"generators from the first {blocks} blocks: "
              + ", ".join(neumann.format_sigma_word(w) for w in words), file=out)
        verdict = oracle.freeness_scan(_factors(spec, words), length)
    elif check == "anisotropy":
        length = _max_len(args, 6)
        n = _window(args, 5)
        print(f"letters S_n for n in [{-n}, {n}], length <= {length}", file=out)
        verdict = oracle.anisotropy_scan(spec, range(-n, n + 1), length)
    else:
        n = _window(args, 50)
        report = oracle.maximality_identity_scan(spec, range(-n, n + 1))
        print(report, file=out)
        return report.passed
    print(verdict, file=out)
    return verdict.passed


def cmd_fixture(args, out):
    if args.name != "fig1":
        raise InputError(f"unknown fixture {args.name!r}")
    length = _max_len(args, 6)
    gens = graph232.fig1_generators(1)
    ok = True
    for name, word in gens:
        g = pgl2.eval_word(word)
        inv = (g * g).is_identity() and not g.is_identity()
        fixed = graph232.fig1_walk(word) == (0, 0)
        ok &= inv and fixed
        print(f"{name}: {g} {pgl2.classify(g).value}, involution {'yes' if inv else 'no'}, "
              f"fixes base {'yes' if fixed else 'no'}", file=out)
    w = graph232.fig1_window(12)
    print(f"axiom violations: {len(graph232.validate_axioms(w))}", file=out)
    print(graph232.c_orbits(w), file=out)
    try:
        print(graph232.quasi_eulerian(graph232.contract_b(w)), file=out)
    except graph232.NotQuasiEulerian as exc:
        print(f"not quasi-Eulerian: {exc}", file=out)
        ok = False
    factors = [oracle.Factor(name, pgl2.eval_word(word), 2) for name, word in gens]
    verdict = oracle.freeness_scan(factors, length)
    print(f"freeness up to length {length}: {verdict}", file=out)
    return ok and verdict.passed


COMMANDS = {
    "verify": cmd_verify,
    "sigma": cmd_sigma,
    "structure": cmd_structure,
    "graph": cmd_graph,
    "rewrite": cmd_rewrite,
    "reach": cmd_reach,
    "scan": cmd_scan,
    "fixture": cmd_fixture,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pgl2neumann", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        if name == "fixture":
            s.add_argument("name", nargs="?", default="fig1")
        s.add_argument("--spec")
        s.add_argument("--window", type=int)
        s.add_argument("--n", type=int)
        s.add_argument("--word")
        s.add_argument("--max-len", type=int)
        s.add_argument("--check", choices=("freeness", "anisotropy", "maximality"))
        s.add_argument("--stage", choices=graph232.STAGES)
        s.add_argument("--dot")
        s.add_argument("--target")
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        ok = COMMANDS[args.command](args, out)
    except (InputError, invospec.SpecError, invospec.OutOfRange, pgl2.WordSyntaxError,
            graph232.StageError) as exc:
        print(f"error: {exc}", file=out)
        print(f"RESULT {args.command} FAIL", file=out)
        return EXIT_INPUT
    status = "INFO" if ok is None else ("PASS" if ok else "FAIL")
    print(f"RESULT {args.command} {status}", file=out)
    return EXIT_FAIL if ok is False else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
