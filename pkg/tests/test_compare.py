import random

import pytest

from core.circuit import to_circuit
from core.compare import (Adaptive, BakerABC, LangWaldschmidt, Ordering, Unconditional, compare, compare_circuit,
                          compare_rational, create_mode)
from core.logform import OverflowGuard, convergents
from core.poe import PoE, eval_exact, parse_poe
from settings import CompareSettings, GlobalSettings, apply_global_settings


def _deep_convergent(min_q: int):
    for k, (q, p) in enumerate(convergents(3, 2, 80)):
        if q > min_q:
            return k, q, p
    raise AssertionError("no convergent deep enough")


@pytest.mark.parametrize("lhs, rhs, expected", [
    ("2^10", "3^6", Ordering.GREATER),
    ("3^6", "2^10", Ordering.LESS),
    ("2^1024", "3^648", Ordering.LESS),
    ("2^6 * 3^3", "12^3", Ordering.EQUAL),
    ("1 / 2", "1 / 3", Ordering.GREATER),
    ("", "7 / 8", Ordering.GREATER),
])
def test_adaptive_examples(lhs, rhs, expected):
    outcome = compare(parse_poe(lhs), parse_poe(rhs))
    assert outcome.ordering == expected
    assert outcome.certificate.mode == "adaptive"


def test_equal_uses_no_log_precision():
    x = parse_poe("2^6 * 3^3")
    outcome = compare(x, parse_poe("12^3"))
    assert outcome.ordering == Ordering.EQUAL
    assert outcome.certificate.precision_bits == 0
    assert outcome.certificate.escalation == []
    assert compare(x, x).certificate.precision_bits == 0


def test_agrees_with_exact_values():
    rng = random.Random(1)
    bases = [2, 3, 5, 6, 7, 10, 12]
    for _ in range(200):
        x = PoE.from_pairs([(rng.choice(bases), rng.randint(-20, 20)) for _ in range(rng.randint(0, 3))])
        y = PoE.from_pairs([(rng.choice(bases), rng.randint(-20, 20)) for _ in range(rng.randint(0, 3))])
        vx, vy = eval_exact(x, 10**4), eval_exact(y, 10**4)
        expected = Ordering.GREATER if vx > vy else Ordering.LESS if vx < vy else Ordering.EQUAL
        outcome = compare(x, y)
        assert outcome.ordering == expected
        assert compare(y, x).ordering == expected.flipped()


def test_deep_convergent_escalates():
    k, q, p = _deep_convergent(2**70)
    outcome = compare(PoE((3,), (q,)), PoE((2,), (p,)))
    assert outcome.ordering == (Ordering.GREATER if k % 2 == 0 else Ordering.LESS)
    assert len(outcome.certificate.escalation) > 1
    assert outcome.certificate.escalation == sorted(outcome.certificate.escalation)


def test_unresolved_below_the_cap():
    _, q, p = _deep_convergent(2**70)
    outcome = compare(PoE((3,), (q,)), PoE((2,), (p,)), Adaptive(max_bits=64))
    assert outcome.ordering == Ordering.UNRESOLVED
    assert outcome.certificate.precision_bits == 64


def test_unconditional_with_escalation():
    mode = Unconditional(cap_bits=2**40)
    outcome = compare(parse_poe("2^10"), parse_poe("3^6"), mode)
    assert outcome.ordering == Ordering.GREATER
    cert = outcome.certificate
    assert cert.mode == "unconditional"
    assert cert.gap_bits > 10**6
    # certified long before the gap precision
    assert cert.precision_bits == 64


def test_unconditional_overflow():
    with pytest.raises(OverflowGuard):
        compare(parse_poe("2^10"), parse_poe("3^6"), Unconditional(bound="bw"))


def test_named_bounds():
    assert Unconditional(bound="bw").name == "bw"
    assert Unconditional(bound="matveev").name == "matveev"
    with pytest.raises(ValueError):
        Unconditional(bound="other")


def test_lw_without_escalation_uses_the_gap_precision():
    mode = LangWaldschmidt(eps=1, c=1, escalate=False)
    outcome = compare(parse_poe("2^10"), parse_poe("3^6"), mode)
    cert = outcome.certificate
    assert outcome.ordering == Ordering.GREATER
    assert cert.precision_bits == cert.gap_bits + 1
    assert cert.escalation == [cert.gap_bits + 1]
    assert cert.params == {"eps": 1, "C": 1}
    assert cert.regime == "LangWaldschmidt"


def test_abc_mode_echoes_constant():
    outcome = compare(parse_poe("2^4"), parse_poe("3^4"), BakerABC(k2=2))
    assert outcome.ordering == Ordering.LESS
    assert outcome.certificate.params == {"K2": 2}


def test_gap_modes_agree_with_adaptive():
    rng = random.Random(9)
    modes = [LangWaldschmidt(eps=1, c=1), BakerABC(k2=1), Unconditional(cap_bits=2**50)]
    for _ in range(30):
        x = PoE.from_pairs([(rng.choice([2, 3, 5]), rng.randint(-30, 30)) for _ in range(2)])
        y = PoE.from_pairs([(rng.choice([7, 11]), rng.randint(-30, 30))])
        expected = compare(x, y).ordering
        for mode in modes:
            assert compare(x, y, mode).ordering == expected


def test_circuit_and_rational_front_ends():
    assert compare_circuit(to_circuit(parse_poe("2^10")), to_circuit(parse_poe("3^6"))).ordering == Ordering.GREATER
    assert compare_rational(parse_poe("1 / 4"), "1/4").ordering == Ordering.EQUAL
    assert compare_rational(parse_poe("1 / 4"), "1/3").ordering == Ordering.LESS


def test_create_mode():
    assert isinstance(create_mode(CompareSettings.from_dict({})), Adaptive)
    mode = create_mode(CompareSettings.from_dict({"mode": "lw", "eps": "1/2", "c_const": 3}))
    assert isinstance(mode, LangWaldschmidt)
    assert mode.params() == {"eps": 0.5, "C": 3}
    assert create_mode(CompareSettings.from_dict({"mode": "matveev"})).name == "matveev"
    assert create_mode(CompareSettings.from_dict({"mode": "abc", "k2_const": 5})).params() == {"K2": 5}


def test_modes_read_global_settings_when_built(monkeypatch):
    monkeypatch.setattr(GlobalSettings, "adaptive_start_bits", GlobalSettings.adaptive_start_bits)
    monkeypatch.setattr(GlobalSettings, "abc_k2", GlobalSettings.abc_k2)
    apply_global_settings({"adaptive_start_bits": 256, "abc_k2": "3"})
    assert Adaptive().start_bits == 256
    assert Unconditional().start_bits == 256
    assert BakerABC().params() == {"K2": 3}
    outcome = compare(parse_poe("2^10"), parse_poe("3^6"))
    assert outcome.certificate.escalation[0] == 256
    with pytest.raises(ValueError):
        Adaptive(max_bits=128)


def test_certificate_value_is_dyadic():
    outcome = compare(parse_poe("2^10"), parse_poe("3^6"))
    den = int(outcome.certificate.value.denominator)
    assert den & (den - 1) == 0
