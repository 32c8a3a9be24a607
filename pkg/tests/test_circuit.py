import random
from fractions import Fraction

import pytest

from core.circuit import (ArithmeticCircuit, CircuitError, DivGate, InputGate, MulGate, evaluate, format_circuit,
                          from_circuit, parse_circuit, to_circuit)
from core.poe import PoE, equals, eval_exact, parse_poe
from oracles import to_fraction

SEVEN = """\
# 7 * 7 / 7
g0 = input 7
g1 = mul g0 g0
g2 = div g1 g0
output g2
"""


def test_cancellation():
    assert from_circuit(parse_circuit(SEVEN)) == PoE((7,), (1,))


def test_poe_to_circuit_evaluates():
    c = to_circuit(parse_poe("3^5"))
    assert to_fraction(evaluate(c, 64)) == 243
    assert _direct_value(c) == 243
    c = to_circuit(parse_poe("2^10 / 5^3 * 3"))
    assert to_fraction(evaluate(c, 64)) == Fraction(3 * 1024, 125)
    assert _direct_value(c) == Fraction(3 * 1024, 125)


def test_one_and_pure_reciprocal():
    assert to_circuit(PoE.one()).gates == (InputGate(1),)
    c = to_circuit(parse_poe("/ 7^2"))
    assert to_fraction(evaluate(c, 64)) == Fraction(1, 49)
    assert _direct_value(c) == Fraction(1, 49)


def test_square_and_multiply_size():
    c = to_circuit(PoE((3,), (2**40 + 1,)))
    # one input, 40 squarings and one multiplication
    assert len(c.gates) == 42
    assert from_circuit(c) == PoE((3,), (2**40 + 1,))


def test_format_parse():
    c = parse_circuit(SEVEN)
    assert parse_circuit(format_circuit(c)) == c
    assert format_circuit(c).splitlines()[-1] == "output g2"
    assert c.depth() == 2


@pytest.mark.parametrize("text, message", [
    ("g0 = input 2\ng1 = mul g0 g2\noutput g1", "later gate"),
    ("g0 = input 2\noutput g0\ng1 = mul g0 g0", "after the output"),
    ("g0 = input 2\n", "missing 'output'"),
    ("g0 = input 2\ng2 = mul g0 g0\noutput g2", "expected gate g1"),
    ("g0 = add g0 g0\noutput g0", "cannot parse"),
    ("g0 = input 0\noutput g0", "positive"),
    ("g0 = input 2\noutput g5", "does not exist"),
])
def test_malformed_circuits(text, message):
    with pytest.raises(CircuitError) as e:
        parse_circuit(text)
    assert message in str(e.value)


def test_unreachable_gates_are_ignored():
    c = ArithmeticCircuit((InputGate(2), InputGate(3), MulGate(0, 0), DivGate(1, 1)), 2)
    assert from_circuit(c) == PoE((2,), (2,))


def _random_circuit(rng: random.Random, size: int, linear: bool) -> ArithmeticCircuit:
    gates = [InputGate(rng.randint(1, 12)) for _ in range(3)]
    while len(gates) < size:
        k = len(gates)
        if rng.random() < 0.2:
            gates.append(InputGate(rng.randint(1, 12)))
            continue
        left = rng.randrange(k)
        right = rng.randrange(3) if linear else rng.randrange(k)
        gates.append(MulGate(left, right) if rng.random() < 0.6 else DivGate(left, right))
    return ArithmeticCircuit(tuple(gates), len(gates) - 1)


def _direct_value(c: ArithmeticCircuit) -> Fraction:
    values = []
    for gate in c.gates:
        if isinstance(gate, InputGate):
            values.append(Fraction(gate.value))
        elif isinstance(gate, MulGate):
            values.append(values[gate.left] * values[gate.right])
        else:
            values.append(values[gate.left] / values[gate.right])
    return values[c.output]


def test_from_circuit_matches_direct_evaluation():
    rng = random.Random(11)
    for _ in range(50):
        c = _random_circuit(rng, 20, linear=True)
        assert to_fraction(evaluate(c, 10**5)) == _direct_value(c)


def test_round_trip_of_random_circuits():
    rng = random.Random(3)
    for _ in range(20):
        c = _random_circuit(rng, 50, linear=False)
        x = from_circuit(c)
        assert equals(from_circuit(to_circuit(x)), x)


def test_emitted_gates_compute_the_value():
    rng = random.Random(23)
    for _ in range(40):
        x = PoE.from_pairs([(rng.randint(2, 30), rng.randint(-9, 9)) for _ in range(rng.randint(0, 4))])
        assert _direct_value(to_circuit(x)) == to_fraction(eval_exact(x, 10**4))
