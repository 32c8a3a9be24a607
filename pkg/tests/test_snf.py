import random

import pytest

from core.grammar import SCFG, parse_grammar
from core.parse_dag import DagBuilder, validate
from core.poe import PoE, equals
from core.snf import TYPE_L, TYPE_Q, TYPE_T, is_snf, to_snf
from oracles import all_derivations, random_grammar

MIXED = """\
%start S
S -> A 'b' A   # 1/2
S ->           # 1/4
S -> 'a'       # 1/4
A -> S         # 2/3
A -> 'a'       # 1/3
"""


def test_conversion_produces_snf():
    snf = to_snf(parse_grammar(MIXED))
    assert is_snf(snf.grammar)
    assert not is_snf(snf.original)
    assert snf.start == "S"
    assert snf.types["S"] == TYPE_L
    assert snf.types["A"] == TYPE_L
    assert snf.types["X_b"] == TYPE_T
    assert all(t in (TYPE_L, TYPE_Q, TYPE_T) for t in snf.types.values())
    # new nonterminals derive their body with probability one
    for r in snf.grammar.rules:
        if r.left in snf.auxiliary:
            assert r.weight.is_one()


def test_snf_grammar_is_left_alone():
    g = parse_grammar("S -> A B # 1\nA -> 'a' # 1\nB -> 'b' # 1\n")
    assert is_snf(g)
    snf = to_snf(g)
    assert len(snf.grammar.rules) == 3
    assert snf.auxiliary == frozenset()
    assert snf.types == {"S": TYPE_Q, "A": TYPE_T, "B": TYPE_T}


def test_long_rules_become_chains():
    g = parse_grammar("S -> 'a' B 'c' B # 1/2\nS -> # 1/2\nB -> 'b' # 1\n")
    snf = to_snf(g)
    g2 = snf.grammar
    assert all(len(r.right) <= 2 for r in g2.rules)
    assert {"S_r0", "S_r0_1", "S_r0_2", "X_a", "X_c"} <= set(g2.nonterminals)
    # conversion is linear: every right-side symbol costs a bounded number of rules
    assert g2.size() <= 6 * g.size()


def test_fresh_names_avoid_collisions():
    g = parse_grammar("S -> 'a' S # 1/2\nS -> # 1/4\nS -> X_a # 1/4\nX_a -> 'x' # 1\n")
    snf = to_snf(g)
    assert "X_a'" in snf.grammar.nonterminals


def _example_dag(g: SCFG):
    b = DagBuilder()
    a, lb = b.leaf("a"), b.leaf("b")
    na = b.internal("A", 4, [a])
    root = b.internal("S", 0, [na, lb, na])
    return b.build(root, g)


def test_lift_and_lower_are_inverse():
    snf = to_snf(parse_grammar(MIXED))
    d = _example_dag(snf.original)
    validate(d)
    lifted = snf.lift(d)
    validate(lifted)
    assert lifted.internal_count() > d.internal_count()
    assert lifted.prob == d.prob == PoE((2, 3), (-1, -2))
    assert snf.lower(lifted) == d


def test_lift_of_empty_rule():
    g = parse_grammar(MIXED)
    snf = to_snf(g)
    b = DagBuilder()
    d = b.build(b.internal("S", 1, [b.leaf("")]), g)
    lifted = snf.lift(d)
    validate(lifted)
    assert [n.label for n in lifted.nodes] == ["", "S_r1", "S"]
    assert snf.lower(lifted) == d


def test_lower_rejects_auxiliary_roots():
    snf = to_snf(parse_grammar(MIXED))
    lifted = snf.lift(_example_dag(snf.original))
    inner = snf.grammar.rules[lifted.nodes[-1].rule]
    assert inner.left == "S"
    b = DagBuilder()
    x = b.internal("X_b", [r.index for r in snf.grammar.rules if r.left == "X_b"][0], [b.leaf("b")])
    with pytest.raises(ValueError):
        snf.lower(b.build(x, snf.grammar))


def test_random_grammars_convert_with_probability_preserved():
    rng = random.Random(21)
    for _ in range(40):
        g = random_grammar(rng)
        snf = to_snf(g)
        assert is_snf(snf.grammar)
        for k, rule in enumerate(g.rules):
            # a single-rule derivation lifted through its template keeps its probability
            b = DagBuilder()
            children = []
            for s in rule.right:
                children.append(b.leaf(s) if g.is_terminal(s) else None)
            if any(c is None for c in children):
                continue
            if not children:
                children = [b.leaf("")]
            d = b.build(b.internal(rule.left, k, children), g)
            lifted = snf.lift(d)
            validate(lifted)
            assert equals(lifted.prob, d.prob)
            assert snf.lower(lifted) == d


NESTED = """\
S -> 'a' B 'c' B   # 1/2
S ->               # 1/2
B -> 'b'           # 1/2
B -> S             # 1/2
"""

TRIPLE = """\
S -> A A A   # 1/3
S -> 'a'     # 2/3
A -> S 'b'   # 1/2
A ->         # 1/2
"""


@pytest.mark.parametrize("text", [MIXED, NESTED, TRIPLE])
def test_conversion_keeps_every_derivation(text):
    g = parse_grammar(text)
    before = all_derivations(g, 4)
    assert before
    assert all_derivations(to_snf(g).grammar, 4) == before
