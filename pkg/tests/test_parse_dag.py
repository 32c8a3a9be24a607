from fractions import Fraction

import pytest

from core.grammar import SCFG
from core.parse_dag import (DagBuilder, DagError, Internal, Leaf, ParseDAG, YieldTooLong, dag_lines, dag_unfold_prob,
                            dag_yield, node_multiplicities, rule_multiplicities, subdag_probs, unfold, validate)
from core.poe import BudgetExceeded, PoE
from oracles import gadget_rules, to_fraction


def _gadget(n: int):
    g = SCFG(gadget_rules(n), f"A{n}")
    b = DagBuilder()
    ref = b.internal("A0", 0, [b.leaf("")])
    for i in range(1, n + 1):
        ref = b.internal(f"A{i}", i, [ref, ref])
    return g, b.build(ref, g)


def _ab_grammar():
    return SCFG([("S", ("A", "A"), 1), ("A", ("a",), "1/2"), ("A", ("b",), "1/2")], "S")


def test_hash_consing():
    b = DagBuilder()
    assert b.leaf("a") == b.leaf("a")
    x = b.internal("A", 1, [0])
    assert b.internal("A", 1, [0]) == x
    assert b.node(x) == Internal("A", 1, (0,))
    with pytest.raises(DagError):
        b.internal("A", 1, [5])


def test_build_keeps_only_reachable_nodes():
    g = _ab_grammar()
    b = DagBuilder()
    la, lb = b.leaf("a"), b.leaf("b")
    b.internal("A", 2, [lb])
    na = b.internal("A", 1, [la])
    d = b.build(b.internal("S", 0, [na, na]), g)
    assert d.nodes == (Leaf("a"), Internal("A", 1, (0,)), Internal("S", 0, (1, 1)))
    assert d.root == 2
    assert d.prob == PoE((2,), (-2,))
    validate(d)


def test_gadget_probability_is_doubly_exponential():
    g, d = _gadget(60)
    assert len(d.nodes) == 62
    assert d.prob == PoE((2,), (-(2**60),))
    assert node_multiplicities(d.nodes, d.root)[1] == 2**60
    assert rule_multiplicities(d.nodes, d.root) == {i: 2**(60 - i) for i in range(61)}
    assert dag_yield(d) == ()
    validate(d)


def test_subdag_probs():
    _, d = _gadget(4)
    probs = subdag_probs(d)
    assert probs[0].is_one()
    assert probs[d.root] == d.prob


def test_unfold_prob_budget():
    _, d = _gadget(3)
    assert to_fraction(dag_unfold_prob(d, 64)) == Fraction(1, 2**8)
    _, big = _gadget(20)
    with pytest.raises(BudgetExceeded):
        dag_unfold_prob(big, 10**4)


def test_yield_cap():
    g = SCFG([("S", ("T", "T"), 1)] + [("T", ("a",), 1)], "S")
    b = DagBuilder()
    t = b.internal("T", 1, [b.leaf("a")])
    d = b.build(b.internal("S", 0, [t, t]), g)
    assert dag_yield(d) == ("a", "a")
    with pytest.raises(YieldTooLong):
        dag_yield(d, cap=1)


def test_validate_errors():
    g = _ab_grammar()
    bad_label = ParseDAG((Leaf("a"), Internal("S", 1, (0,))), 1, PoE.one(), g)
    with pytest.raises(DagError, match="does not match rule"):
        validate(bad_label)
    bad_children = ParseDAG((Leaf("b"), Internal("A", 1, (0,))), 1, PoE.one(), g)
    with pytest.raises(DagError, match="do not spell"):
        validate(bad_children)
    two_roots = ParseDAG((Leaf("a"), Internal("A", 1, (0,)), Internal("A", 1, (0,))), 2, PoE.one(), g)
    with pytest.raises(DagError, match="only source"):
        validate(two_roots)
    unknown_leaf = ParseDAG((Leaf("z"), Internal("A", 1, (0,))), 1, PoE.one(), g)
    with pytest.raises(DagError, match="not a terminal"):
        validate(unknown_leaf)
    cycle = ParseDAG((Internal("S", 0, (1, 1)), Internal("S", 0, (0, 0))), 1, PoE.one(),
                     SCFG([("S", ("S", "S"), "1/2")], "S"))
    with pytest.raises(DagError, match="cycle"):
        validate(cycle)


def test_dag_lines_and_unfold():
    g = _ab_grammar()
    b = DagBuilder()
    na = b.internal("A", 1, [b.leaf("a")])
    d = b.build(b.internal("S", 0, [na, na]), g)
    assert dag_lines(d) == ["n0 := Leaf 'a'", "n1 := A [rule 1] (n0)", "n2 := S [rule 0] (n1, n1)"]
    assert unfold(d) == ("S", 0, (("A", 1, ("a",)), ("A", 1, ("a",))))
    _, big = _gadget(30)
    with pytest.raises(YieldTooLong):
        unfold(big)
