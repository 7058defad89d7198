import json
import random
import re

import pytest

from subzero import examples, formats, oracle
from subzero.engine import decide_regular_emptiness
from subzero.realizer import realize

from conftest import random_corpus


def test_automaton_round_trip():
    for a in [m() for m in examples.NAMED.values()] + random_corpus(30):
        assert formats.parse_automaton(formats.serialize_automaton(a)) == a


@pytest.mark.parametrize("text,line,msg", [
    ("states p\nalphabet a\ntrans p a p\n", 3, "trans takes"),
    ("states p\nalphabet a\ntrans p a p x\n", 3, "unknown state"),
    ("states p\nalphabet a\nzero y\n", 3, "unknown state"),
    ("states p\nalphabet a\nfoo\n", 3, "unknown directive"),
    ("states p\nstates q\n", 2, "duplicate directive"),
    ("states p p\n", 1, "repeated identifier"),
    ("states p-1\n", 1, "bad identifier"),
    ("states p\nalphabet a\ntrans p a p p\ntrans p a p p\n", 4, "duplicate transition"),
])
def test_parse_errors(text, line, msg):
    with pytest.raises(formats.FormatError) as e:
        formats.parse_automaton(text, "t.aut")
    assert e.value.line == line and msg in str(e.value) and str(e.value).startswith(f"t.aut:{line}:")


def test_missing_alphabet():
    with pytest.raises(formats.FormatError, match="missing 'alphabet'"):
        formats.parse_automaton("states p\n")


def test_comments_and_blank_lines():
    a = formats.parse_automaton("# hi\n\nstates p q  # order\nalphabet a\nall q\nstart p\ntrans p a q q\n")
    assert a.start == 0 and a.q_all == {1}


def test_derivation_round_trip(ex12, frag):
    for a, d in ((ex12, decide_regular_emptiness(ex12, 1).witness), (frag, examples.plug_fragment_derivation(frag))):
        obj = json.loads(formats.dumps(formats.derivation_to_obj(a, d)))
        assert obj["format_version"] == 1
        assert formats.derivation_from_obj(a, obj) == d


def test_derivation_bad_version(ex12):
    with pytest.raises(formats.FormatError):
        formats.derivation_from_obj(ex12, {"format_version": 2})
    with pytest.raises(formats.FormatError):
        formats.derivation_from_obj(ex12, {"format_version": 1, "rule": "A"})


def test_rungraph_round_trip():
    for seed in range(20):
        a, g = oracle.random_run_graph(random.Random(seed))
        obj = json.loads(formats.dumps(formats.rungraph_to_obj(a, g)))
        h = formats.rungraph_from_obj(a, obj)
        assert h.root == g.root and dict(h.nodes) == dict(g.nodes)


def test_rungraph_errors(ex12):
    with pytest.raises(formats.FormatError):
        formats.rungraph_from_obj(ex12, {"format_version": 1, "root": 0, "nodes": [{"id": 0, "state": "zz", "kind": "port"}]})
    with pytest.raises(formats.FormatError):
        formats.rungraph_from_obj(ex12, {"format_version": 1, "root": 0, "nodes": [{"id": 0, "state": "q", "kind": "leaf"}]})
    with pytest.raises(formats.FormatError):
        formats.rungraph_from_obj(ex12, {"format_version": 1, "nodes": []})


_STMT = re.compile(
    r'^\s*(?:'
    r'//.*'
    r'|rankdir=\w+;'
    r'|[nd]\d+ \[(?:\w+=(?:"(?:[^"\\]|\\.)*"|\w+)(?:, )?)+\];'
    r'|[nd]\d+ -> [nd]\d+(?: \[(?:\w+=(?:"(?:[^"\\]|\\.)*"|\w+)(?:, )?)+\])?;'
    r')$'
)


def _check_dot(text):
    lines = text.strip().splitlines()
    assert re.match(r'^digraph "(?:[^"\\]|\\.)*" \{$', lines[0])
    assert lines[-1] == "}"
    for line in lines[1:-1]:
        assert _STMT.match(line), line
    declared = set(re.findall(r"^\s*([nd]\d+) \[", text, re.M))
    for src, dst in re.findall(r"([nd]\d+) -> ([nd]\d+)", text):
        assert src in declared and dst in declared


def test_dot_exports(ex12, frag):
    d = examples.plug_fragment_derivation(frag)
    _check_dot(formats.derivation_to_dot(frag, d))
    _check_dot(formats.rungraph_to_dot(frag, realize(frag, d)))
    w = decide_regular_emptiness(ex12, 1).witness
    _check_dot(formats.rungraph_to_dot(ex12, realize(ex12, w), name='a "quoted" name'))
    assert len(re.findall(r"^  d\d+ -> d\d+;$", formats.derivation_to_dot(frag, d), re.M)) == 10
