"""Command-line entry point.

Exit codes: 0 success (an EMPTY verdict is a success), 1 a check or
validation failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bounds, engine, examples, formats, oracle, realizer, runcheck
from .calculus import Profile, derivation_size, validate_derivation
from .core import AutomatonError, Multiset, validate_automaton


class UsageError(Exception):
    pass


def _load_automaton(path: str):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror}") from None
    a = formats.parse_automaton(text, path)
    problems = validate_automaton(a)
    if problems:
        raise UsageError(f"{path}: " + "; ".join(problems))
    return a


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise formats.FormatError(f"invalid JSON: {e}", path) from None


def _write(path: str, text: str) -> None:
    Path(path).write_text(text)


def _state(a, name):
    try:
        return a.state_id(name)
    except AutomatonError as e:
        raise UsageError(str(e)) from None


def _ports(a, spec: str) -> Multiset:
    names = [x for x in spec.replace(",", " ").split() if x]
    return Multiset(_state(a, x) for x in names)


def cmd_validate(args) -> int:
    try:
        a = formats.parse_automaton(Path(args.file).read_text(), args.file)
    except OSError as e:
        raise UsageError(f"{args.file}: {e.strerror}") from None
    problems = validate_automaton(a)
    for p in problems:
        print(p, file=sys.stderr)
    print("ok" if not problems else "invalid")
    return 0 if not problems else 1


def cmd_decide(args) -> int:
    a = _load_automaton(args.file)
    if args.state is not None:
        starts = [_state(a, args.state)]
    elif a.start is not None:
        starts = [a.start]
    else:
        starts = list(range(a.size))
    chosen = None
    for q in starts:
        v = engine.decide_regular_emptiness(a, q, args.cap)
        print(f"{a.states[q]}: {v}", file=sys.stderr)
        if v.nonempty and chosen is None:
            chosen = v
    if chosen is None:
        print("EMPTY")
        return 0
    print("NONEMPTY")
    d = chosen.witness
    print(f"witness from {a.states[chosen.state]}: {d.conclusion.fmt(a)}, size {derivation_size(d)}", file=sys.stderr)
    if args.witness:
        _write(args.witness, formats.dumps(formats.derivation_to_obj(a, d)))
    if args.witness_dot:
        _write(args.witness_dot, formats.derivation_to_dot(a, d))
    if args.run or args.run_dot:
        g = realizer.realize(a, d)
        if args.run:
            _write(args.run, formats.dumps(formats.rungraph_to_obj(a, g)))
        if args.run_dot:
            _write(args.run_dot, formats.rungraph_to_dot(a, g))
    return 0


def cmd_derivable(args) -> int:
    a = _load_automaton(args.file)
    target = Profile(_state(a, args.root), _state(a, args.bound), _ports(a, args.ports))
    ok = engine.derivable(a, target, args.cap)
    print("DERIVABLE" if ok else "NOT DERIVABLE")
    return 0


def cmd_realize(args) -> int:
    a = _load_automaton(args.file)
    d = formats.derivation_from_obj(a, _load_json(args.derivation), args.derivation)
    problems = validate_derivation(a, d)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return 1
    g = realizer.realize(a, d)
    _write(args.output, formats.dumps(formats.rungraph_to_obj(a, g)))
    if args.dot:
        _write(args.dot, formats.rungraph_to_dot(a, g))
    print(f"{len(g)} nodes, profile {realizer.graph_profile(a, g).fmt(a)}")
    return 0


def _read_graph(a, path):
    g = formats.rungraph_from_obj(a, _load_json(path), path)
    try:
        g.check_structure()
    except realizer.StructureError as e:
        raise formats.FormatError(str(e), path) from None
    return g


def cmd_check_run(args) -> int:
    a = _load_automaton(args.file)
    g = _read_graph(a, args.run)
    rep = runcheck.check_partial_run(a, g)
    print("transitions: " + ("ok" if rep.transitions_ok else "FAILED"))
    for e in rep.transition_errors:
        print("  " + e)
    if rep.all_ok:
        print("all-condition: ok")
    else:
        print("all-condition: FAILED cycle " + " ".join(map(str, rep.all_counterexample)))
    print(f"zero-measure: {rep.zero_measure.numerator}/{rep.zero_measure.denominator}")
    print("zero-condition: " + ("ok" if rep.zero_ok else "FAILED"))
    print(f"ports: {rep.port_count}")
    print("accepting run: " + ("yes" if rep.ok and rep.port_count == 0 else "no"))
    return 0 if rep.ok else 1


def cmd_measure(args) -> int:
    a = _load_automaton(args.file)
    g = _read_graph(a, args.run)
    m = runcheck.zero_measure_exact(a, g)
    print(f"{m.numerator}/{m.denominator}")
    if args.mc:
        est = oracle.mc_zero_measure(a, g, args.mc, args.horizon, args.seed)
        print(f"monte-carlo: {est:.6f} (N={args.mc}, horizon={args.horizon}, seed={args.seed})")
    return 0


def cmd_bound(args) -> int:
    try:
        params = bounds.BoundParams(args.c1, args.c2, args.size_q, args.max_bits)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.q < 0 or args.n < 0:
        raise UsageError("q and n must be natural numbers")
    try:
        print(bounds.bound_f(params, args.q, args.n))
    except bounds.BoundOverflow as e:
        print(str(e))
    return 0


def cmd_example(args) -> int:
    a = examples.NAMED[args.name]()
    _write(args.output, formats.serialize_automaton(a))
    return 0


def cmd_oracle(args) -> int:
    a = _load_automaton(args.file)
    if args.oracle_cmd == "enumerate":
        caps = oracle.EnumerationCaps(size=args.size_cap, multiplicity=args.mult_cap)
        bound = None if args.bound is None else _state(a, args.bound)
        target = Profile(_state(a, args.root), bound, _ports(a, args.ports))
        d = oracle.enumerate_derivations(a, target, caps)
        if d is None:
            print("NOT FOUND WITHIN CAPS")
            return 0
        print(f"FOUND size {derivation_size(d)}: {d.conclusion.fmt(a)}")
        if args.output:
            _write(args.output, formats.dumps(formats.derivation_to_obj(a, d)))
        return 0
    profiles = oracle.enumerate_finite_runs(a, _state(a, args.root), args.depth)
    for p in sorted(profiles, key=lambda p: (p.bound, len(p.ports), p.ports.items())):
        print(p.fmt(a))
    return 0


def cmd_l3_witness(args) -> int:
    if args.blocks < 1:
        raise UsageError("--blocks must be >= 1")
    sched = examples.l3_block_schedule(args.blocks)
    print("schedule: " + " ".join(map(str, sched.boundaries)))
    prefix = examples.l3_witness_prefix(sched)
    if args.levels:
        for d in range(min(prefix.depth, args.levels) + 1):
            print("".join(prefix.label(format(i, f"0{d}b") if d else "") for i in range(2**d)))
    if args.sum:
        total, ok = examples.l3_measure_bound(sched)
        print(f"sum: {total.numerator}/{total.denominator} " + ("<= 1" if ok else "> 1"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="subzero", description="Subzero tree automata: regular emptiness and run checking.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("validate", help="check an automaton file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("decide", help="decide regular emptiness")
    p.add_argument("file")
    p.add_argument("--state")
    p.add_argument("--witness", help="write the witness derivation as JSON")
    p.add_argument("--witness-dot", help="write the witness derivation as DOT")
    p.add_argument("--run", help="write the realized run graph as JSON")
    p.add_argument("--run-dot", help="write the realized run graph as DOT")
    p.add_argument("--cap", type=int, default=engine.DEFAULT_CAP, help="port multiplicity cap")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("derivable", help="is a profile derivable (after deduplication)")
    p.add_argument("file")
    p.add_argument("--root", required=True)
    p.add_argument("--bound", required=True)
    p.add_argument("--ports", default="", help="comma or space separated states")
    p.add_argument("--cap", type=int, default=engine.DEFAULT_CAP)
    p.set_defaults(func=cmd_derivable)

    p = sub.add_parser("realize", help="compile a derivation into a run graph")
    p.add_argument("file")
    p.add_argument("derivation")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--dot")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("check-run", help="acceptance report for a run graph")
    p.add_argument("file")
    p.add_argument("run")
    p.set_defaults(func=cmd_check_run)

    p = sub.add_parser("measure", help="exact Q_zero branch measure of a run graph")
    p.add_argument("file")
    p.add_argument("run")
    p.add_argument("--mc", type=int, default=0, help="also estimate with N Monte Carlo samples")
    p.add_argument("--horizon", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("bound", help="evaluate the derivation size bound f(q, n)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--size-q", type=int, required=True)
    p.add_argument("--c1", type=int, default=8)
    p.add_argument("--c2", type=int, default=8)
    p.add_argument("--max-bits", type=int, default=1 << 22)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("example", help="write a named automaton")
    p.add_argument("name", choices=sorted(examples.NAMED))
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("oracle", help="brute-force cross-checks")
    osub = p.add_subparsers(dest="oracle_cmd", required=True)
    e = osub.add_parser("enumerate", help="search derivations within caps")
    e.add_argument("file")
    e.add_argument("--root", required=True)
    e.add_argument("--bound", help="omit to accept any bound")
    e.add_argument("--ports", default="")
    e.add_argument("--size-cap", type=int, default=12)
    e.add_argument("--mult-cap", type=int, default=3)
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_oracle)
    r = osub.add_parser("runs", help="profiles of finite runs up to a depth")
    r.add_argument("file")
    r.add_argument("--root", required=True)
    r.add_argument("--depth", type=int, default=3)
    r.set_defaults(func=cmd_oracle)

    p = sub.add_parser("l3-witness", help="block schedule of the non-regular L3 tree")
    p.add_argument("--blocks", type=int, required=True)
    p.add_argument("--sum", action="store_true", help="print the exact measure partial sum")
    p.add_argument("--levels", type=int, default=0, help="print labels of the first levels")
    p.set_defaults(func=cmd_l3_witness)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, formats.FormatError, AutomatonError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
