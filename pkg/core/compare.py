from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import toolbox.helper as h
from core.circuit import ArithmeticCircuit, from_circuit
from core.logform import (GapBound, LinearForm, OverflowGuard, baker_abc_gap, bw_gap, linear_form_approx, lw_gap,
                          matveev_gap)
from core.poe import PoE, equals, normalize
from settings import CompareRegime, CompareSettings, GlobalSettings
from toolbox.numeric import MPQ, pow2


class Ordering(Enum):
    LESS = "LESS"
    EQUAL = "EQUAL"
    GREATER = "GREATER"
    UNRESOLVED = "UNRESOLVED"

    def flipped(self) -> "Ordering":
        if self == Ordering.LESS:
            return Ordering.GREATER
        if self == Ordering.GREATER:
            return Ordering.LESS
        return self


class ComparisonUnresolved(Exception):
    pass


### comparison modes ###

@dataclass(frozen=True)
class Adaptive:
    max_bits: int = field(default_factory=lambda: GlobalSettings.adaptive_max_bits)
    start_bits: int = field(default_factory=lambda: GlobalSettings.adaptive_start_bits)

    def __post_init__(self):
        if self.max_bits < 64:
            raise ValueError(f"adaptive max_bits must be at least 64, got {self.max_bits}")
        if self.start_bits < 1:
            raise ValueError("adaptive start_bits must be positive")
        if self.start_bits > self.max_bits:
            raise ValueError(f"adaptive start_bits {self.start_bits} exceed max_bits {self.max_bits}")

    name = "adaptive"

    def params(self) -> dict:
        return {"max_bits": self.max_bits}


@dataclass(frozen=True)
class GapMode:
    """Base of the modes that certify the sign through a lower bound on |form|."""
    cap_bits: int = None
    start_bits: int = field(default_factory=lambda: GlobalSettings.adaptive_start_bits)
    escalate: bool = None

    name = "gap"

    def gap(self, f: LinearForm) -> GapBound:
        raise NotImplementedError()

    def params(self) -> dict:
        return {}

    def escalates(self) -> bool:
        return GlobalSettings.gap_escalation if self.escalate is None else self.escalate


@dataclass(frozen=True)
class Unconditional(GapMode):
    bound: str = "min"

    def __post_init__(self):
        if self.bound not in ("min", "bw", "matveev"):
            raise ValueError(f"unconditional bound '{self.bound}' not implemented")

    @property
    def name(self) -> str:
        return {"min": "unconditional", "bw": "bw", "matveev": "matveev"}[self.bound]

    def gap(self, f: LinearForm) -> GapBound:
        if self.bound == "bw":
            return bw_gap(f, self.cap_bits)
        if self.bound == "matveev":
            return matveev_gap(f, self.cap_bits)
        candidates = []
        errors = []
        for compute in (bw_gap, matveev_gap):
            try:
                candidates.append(compute(f, self.cap_bits))
            except OverflowGuard as e:
                errors.append(str(e))
        if not candidates:
            raise OverflowGuard("; ".join(errors))
        return min(candidates, key=lambda g: g.log2_gap)


@dataclass(frozen=True)
class LangWaldschmidt(GapMode):
    eps: object = field(default_factory=lambda: GlobalSettings.lw_eps)
    c: object = field(default_factory=lambda: GlobalSettings.lw_c)

    def __post_init__(self):
        if MPQ(self.eps) <= 0 or MPQ(self.c) <= 0:
            raise ValueError("lw mode needs eps > 0 and C > 0")

    name = "lw"

    def gap(self, f: LinearForm) -> GapBound:
        return lw_gap(f, self.eps, self.c)

    def params(self) -> dict:
        return {"eps": MPQ(self.eps), "C": MPQ(self.c)}


@dataclass(frozen=True)
class BakerABC(GapMode):
    k2: object = field(default_factory=lambda: GlobalSettings.abc_k2)

    def __post_init__(self):
        if MPQ(self.k2) <= 0:
            raise ValueError("abc mode needs K'' > 0")

    name = "abc"

    def gap(self, f: LinearForm) -> GapBound:
        return baker_abc_gap(f, self.k2)

    def params(self) -> dict:
        return {"K2": MPQ(self.k2)}


def create_mode(settings: CompareSettings):
    regime = settings.regime
    if regime == CompareRegime.ADAPTIVE:
        return Adaptive(settings.max_bits)
    if regime == CompareRegime.UNCONDITIONAL:
        return Unconditional(settings.cap_bits, bound="min")
    if regime == CompareRegime.BW:
        return Unconditional(settings.cap_bits, bound="bw")
    if regime == CompareRegime.MATVEEV:
        return Unconditional(settings.cap_bits, bound="matveev")
    if regime == CompareRegime.LW:
        return LangWaldschmidt(settings.cap_bits, eps=settings.eps, c=settings.c_const)
    if regime == CompareRegime.ABC:
        return BakerABC(settings.cap_bits, k2=settings.k2_const)
    raise NotImplementedError(f"compare mode '{regime}' not implemented")


### outcome ###

@dataclass
class Certificate:
    mode: str
    precision_bits: int = 0
    gap_bits: Optional[int] = None
    value: Optional["MPQ"] = None
    params: dict = field(default_factory=dict)
    escalation: List[int] = field(default_factory=list)
    clamped: bool = False
    regime: Optional[str] = None


@dataclass
class CompareOutcome:
    ordering: Ordering
    certificate: Certificate


def _certified(v, j: int) -> bool:
    # total error < 2^-j, so |v| > 2^(1-j) fixes the sign
    return abs(v) > pow2(1 - j)


def _sign(v) -> Ordering:
    return Ordering.GREATER if v > 0 else Ordering.LESS


def _compare_adaptive(f: LinearForm, mode: Adaptive, cert: Certificate) -> Ordering:
    j = mode.start_bits
    while j <= mode.max_bits:
        v = linear_form_approx(f, j).value
        cert.escalation.append(j)
        cert.precision_bits = j
        cert.value = v
        h.log(f"adaptive compare at {j} bits", h.LOG_LEVEL_4_DEBUG)
        if _certified(v, j):
            return _sign(v)
        j *= 2
    h.log(f"comparison unresolved at the precision cap of {mode.max_bits} bits")
    return Ordering.UNRESOLVED


def _compare_gap(f: LinearForm, mode: GapMode, cert: Certificate) -> Ordering:
    bound = mode.gap(f)
    cert.gap_bits = bound.log2_gap
    cert.regime = bound.regime
    cert.clamped = bound.clamped
    target = bound.log2_gap + 1
    if mode.escalates():
        j = mode.start_bits
        while j < target:
            v = linear_form_approx(f, j).value
            cert.escalation.append(j)
            cert.precision_bits = j
            cert.value = v
            if _certified(v, j):
                return _sign(v)
            j *= 2
    # at 2^-(gap+1) the sign of v is the sign of the form, v == 0 counts as positive
    v = linear_form_approx(f, target).value
    cert.escalation.append(target)
    cert.precision_bits = target
    cert.value = v
    return Ordering.GREATER if v >= 0 else Ordering.LESS


def compare(x: PoE, y: PoE, mode=None) -> CompareOutcome:
    """Three-way comparison of two PoE numbers.

    Equality is decided by gcd refinement only; otherwise the sign of
    ln(x) - ln(y) is certified by approximation, either adaptively or at the
    precision given by the mode's lower bound.
    """
    mode = mode or Adaptive()
    cert = Certificate(mode.name, params=mode.params())
    x, y = normalize(x), normalize(y)
    if equals(x, y):
        return CompareOutcome(Ordering.EQUAL, cert)
    f = LinearForm.from_difference(x, y)
    if isinstance(mode, Adaptive):
        ordering = _compare_adaptive(f, mode, cert)
    elif isinstance(mode, GapMode):
        ordering = _compare_gap(f, mode, cert)
    else:
        raise NotImplementedError(f"compare mode '{mode}' not implemented")
    return CompareOutcome(ordering, cert)


def compare_circuit(cx: ArithmeticCircuit, cy: ArithmeticCircuit, mode=None) -> CompareOutcome:
    return compare(from_circuit(cx), from_circuit(cy), mode)


def compare_rational(x: PoE, q, mode=None) -> CompareOutcome:
    return compare(x, PoE.from_rational(q), mode)
