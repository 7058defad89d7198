"""Text, JSON and DOT formats for automata, derivations and run graphs.

Automaton files are line based::

    # comment
    states bot q          # ascending priority
    alphabet a b
    all bot q
    zero q
    start q               # optional
    trans q a bot bot     # repeated

JSON documents carry ``"format_version": 1`` at top level and name states
and letters by identifier.
"""

from __future__ import annotations

import json
import re
from typing import Any

from .calculus import Derivation, Profile
from .core import AutomatonError, Multiset, SubzeroAutomaton, Transition
from .realizer import Inner, Port, RunGraph

FORMAT_VERSION = 1
_IDENT = re.compile(r"^[A-Za-z0-9_]+$")


class FormatError(ValueError):
    def __init__(self, message: str, source: str = "<input>", line: int | None = None):
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)
        self.line = line


def parse_automaton(text: str, source: str = "<input>") -> SubzeroAutomaton:
    fields: dict[str, Any] = {}
    trans: list[tuple[int, tuple[str, ...]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *args = line.split()
        for x in args:
            if not _IDENT.match(x):
                raise FormatError(f"bad identifier {x!r}", source, lineno)
        if head in ("states", "alphabet", "all", "zero", "start"):
            if head in fields:
                raise FormatError(f"duplicate directive {head!r}", source, lineno)
            if head in ("states", "alphabet") and not args:
                raise FormatError(f"{head} needs at least one identifier", source, lineno)
            if head == "start" and len(args) != 1:
                raise FormatError("start takes exactly one state", source, lineno)
            if len(set(args)) != len(args):
                raise FormatError(f"repeated identifier in {head}", source, lineno)
            fields[head] = (lineno, args)
        elif head == "trans":
            if len(args) != 4:
                raise FormatError("trans takes: source letter left right", source, lineno)
            trans.append((lineno, tuple(args)))
        else:
            raise FormatError(f"unknown directive {head!r}", source, lineno)
    for req in ("states", "alphabet"):
        if req not in fields:
            raise FormatError(f"missing {req!r} directive", source)
    states = fields["states"][1]
    alphabet = fields["alphabet"][1]

    def known(names, pool, what, lineno):
        for x in names:
            if x not in pool:
                raise FormatError(f"unknown {what} {x!r}", source, lineno)

    for key in ("all", "zero", "start"):
        if key in fields:
            known(fields[key][1], states, "state", fields[key][0])
    seen = set()
    for lineno, (s, a, l, r) in trans:
        known((s, l, r), states, "state", lineno)
        known((a,), alphabet, "letter", lineno)
        if (s, a, l, r) in seen:
            raise FormatError("duplicate transition", source, lineno)
        seen.add((s, a, l, r))
    start = fields["start"][1][0] if "start" in fields else None
    return SubzeroAutomaton.from_names(
        states, alphabet, [t for _, t in trans],
        fields.get("all", (0, []))[1], fields.get("zero", (0, []))[1], start,
    )


def serialize_automaton(a: SubzeroAutomaton) -> str:
    lines = [
        "states " + " ".join(a.states),
        "alphabet " + " ".join(a.alphabet),
        ("all " + " ".join(a.states[q] for q in sorted(a.q_all))).rstrip(),
        ("zero " + " ".join(a.states[q] for q in sorted(a.q_zero))).rstrip(),
    ]
    if a.start is not None:
        lines.append("start " + a.states[a.start])
    for t in a.sorted_transitions():
        lines.append(f"trans {a.states[t.source]} {a.alphabet[t.letter]} {a.states[t.left]} {a.states[t.right]}")
    return "\n".join(lines) + "\n"


# -- derivations -----------------------------------------------------------

def derivation_to_obj(a: SubzeroAutomaton, d: Derivation) -> dict:
    def conv(x: Derivation) -> dict:
        root, bound, ports = x.conclusion
        obj: dict[str, Any] = {
            "rule": x.rule,
            "conclusion": {
                "root": a.states[root],
                "bound": a.states[bound],
                "ports": [a.states[q] for q in ports.elements()],
            },
        }
        if x.transition is not None:
            t = x.transition
            obj["transition"] = [a.states[t.source], a.alphabet[t.letter], a.states[t.left], a.states[t.right]]
        if x.port is not None:
            obj["port"] = a.states[x.port]
        obj["premises"] = [conv(p) for p in x.premises]
        return obj

    out = conv(d)
    return {"format_version": FORMAT_VERSION, **out}


def derivation_from_obj(a: SubzeroAutomaton, obj: dict, source: str = "<input>") -> Derivation:
    if obj.get("format_version") != FORMAT_VERSION:
        raise FormatError(f"unsupported format_version {obj.get('format_version')!r}", source)

    def state(name):
        try:
            return a.state_id(name)
        except AutomatonError as e:
            raise FormatError(str(e), source) from None

    def conv(o: dict) -> Derivation:
        try:
            c = o["conclusion"]
            concl = Profile(state(c["root"]), state(c["bound"]), Multiset(state(q) for q in c["ports"]))
            t = None
            if "transition" in o:
                s, l, x, y = o["transition"]
                t = Transition(state(s), a.letter_id(l), state(x), state(y))
            port = state(o["port"]) if "port" in o else None
            return Derivation(o["rule"], concl, tuple(conv(p) for p in o.get("premises", [])), t, port)
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, FormatError):
                raise
            raise FormatError(f"malformed derivation node: {e}", source) from None

    return conv(obj)


# -- run graphs ------------------------------------------------------------

def rungraph_to_obj(a: SubzeroAutomaton, g: RunGraph) -> dict:
    nodes = []
    for v in sorted(g.nodes):
        n = g.nodes[v]
        if isinstance(n, Inner):
            nodes.append({"id": v, "state": a.states[n.state], "kind": "inner",
                          "letter": a.alphabet[n.letter], "left": n.left, "right": n.right})
        else:
            nodes.append({"id": v, "state": a.states[n.state], "kind": "port"})
    return {"format_version": FORMAT_VERSION, "root": g.root, "nodes": nodes}


def rungraph_from_obj(a: SubzeroAutomaton, obj: dict, source: str = "<input>") -> RunGraph:
    if obj.get("format_version") != FORMAT_VERSION:
        raise FormatError(f"unsupported format_version {obj.get('format_version')!r}", source)
    nodes: dict[int, Any] = {}
    try:
        for o in obj["nodes"]:
            v = o["id"]
            if not isinstance(v, int) or v in nodes:
                raise FormatError(f"bad or duplicate node id {v!r}", source)
            if o["kind"] == "inner":
                for k in ("left", "right"):
                    if not isinstance(o[k], int):
                        raise FormatError(f"node {v}: {k} must be an integer id", source)
                nodes[v] = Inner(a.state_id(o["state"]), a.letter_id(o["letter"]), o["left"], o["right"])
            elif o["kind"] == "port":
                nodes[v] = Port(a.state_id(o["state"]))
            else:
                raise FormatError(f"node {v}: unknown kind {o['kind']!r}", source)
        root = obj["root"]
    except (KeyError, TypeError, AutomatonError) as e:
        raise FormatError(f"malformed run graph: {e}", source) from None
    return RunGraph(nodes, root)


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


# -- DOT -------------------------------------------------------------------

def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def rungraph_to_dot(a: SubzeroAutomaton, g: RunGraph, name: str = "run") -> str:
    out = [f"digraph {_q(name)} {{", "  // format_version 1"]
    for v in sorted(g.nodes):
        n = g.nodes[v]
        st = a.states[n.state]
        if isinstance(n, Inner):
            peri = 2 if v == g.root else 1
            out.append(f"  n{v} [label={_q(f'{st} / {a.alphabet[n.letter]}')}, shape=circle, peripheries={peri}];")
        else:
            out.append(f"  n{v} [label={_q(st)}, shape=box];")
    for v in sorted(g.nodes):
        n = g.nodes[v]
        if isinstance(n, Inner):
            out.append(f"  n{v} -> n{n.left} [label=\"0\", style=dashed];")
            out.append(f"  n{v} -> n{n.right} [label=\"1\", style=solid];")
    out.append("}")
    return "\n".join(out) + "\n"


def derivation_to_dot(a: SubzeroAutomaton, d: Derivation, name: str = "derivation") -> str:
    out = [f"digraph {_q(name)} {{", "  // format_version 1", "  rankdir=BT;"]
    counter = 0
    stack = [(d, None)]
    while stack:
        x, parent = stack.pop()
        me = counter
        counter += 1
        out.append(f"  d{me} [label={_q(x.rule + ': ' + x.conclusion.fmt(a))}, shape=box];")
        if parent is not None:
            out.append(f"  d{me} -> d{parent};")
        stack.extend((p, me) for p in reversed(x.premises))
    out.append("}")
    return "\n".join(out) + "\n"
