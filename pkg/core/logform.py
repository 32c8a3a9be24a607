from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial
from typing import List, Tuple

import toolbox.helper as h
from core.poe import PoE, normalize
from settings import GlobalSettings
from toolbox.numeric import MPQ, MPQ_ONE, MPQ_ZERO, ceil_log2, ceil_q, floor_q, isqrt, pow2


class OverflowGuard(Exception):
    pass


@dataclass(frozen=True)
class ApproxReal:
    """value with |true - value| < 2^-error_exponent"""
    value: "MPQ"
    error_exponent: int

    def bounds(self) -> Tuple["MPQ", "MPQ"]:
        eps = pow2(-self.error_exponent)
        return self.value - eps, self.value + eps


@dataclass(frozen=True)
class LinearForm:
    """sum(b[i] * ln(a[i]))"""
    a: Tuple[int, ...]
    b: Tuple[int, ...]

    def __post_init__(self):
        if len(self.a) != len(self.b):
            raise ValueError("linear form needs as many coefficients as logarithms")
        if len(self.a) == 0:
            raise ValueError("linear form needs at least one term")
        if any(int(x) < 2 for x in self.a):
            raise ValueError(f"linear form logarithms must be of integers >= 2, got {list(self.a)}")
        if any(int(x) == 0 for x in self.b):
            raise ValueError("linear form coefficients must be nonzero")

    @property
    def n(self) -> int:
        return len(self.a)

    def max_coefficient(self) -> int:
        return max(abs(int(x)) for x in self.b)

    @staticmethod
    def from_poe(x: PoE) -> "LinearForm":
        x = normalize(x)
        return LinearForm(x.bases, x.exponents)

    @staticmethod
    def from_difference(x: PoE, y: PoE) -> "LinearForm":
        """ln(x) - ln(y) as a single form"""
        return LinearForm.from_poe(normalize(PoE(x.bases + y.bases, x.exponents + tuple(-e for e in y.exponents))))


@dataclass(frozen=True)
class GapBound:
    """|form| >= 2^-log2_gap whenever the form is nonzero"""
    log2_gap: int
    regime: str
    params: dict = field(default_factory=dict, compare=False)
    clamped: bool = False


### natural logarithms ###

@lru_cache(maxsize=256)
def _ln2_fixed(t: int) -> Tuple[int, int]:
    """Returns (s, prec) with |ln 2 - s/2^prec| < 2^-t, from ln 2 = sum 1/(i 2^i)."""
    terms = t + 1
    prec = t + 2 + terms.bit_length()
    one = 1 << prec
    s = 0
    for i in range(1, terms + 1):
        s += (one >> i) // i
    return s, prec


def ln2_approx(j: int) -> ApproxReal:
    s, prec = _ln2_fixed(j)
    return ApproxReal(MPQ(s, 1 << prec), j)


def _ln_reduced_fixed(a: int, m: int, j: int) -> Tuple[int, int]:
    """Returns (s, prec) with |ln(a / 2^(m+1)) + s/2^prec| < 2^-(j+1), 2^m <= a < 2^(m+1)."""
    # ln(1 - r) = -sum r^i / i with r = u / 2^(m+1) <= 1/2
    u = (1 << (m + 1)) - a
    shift = max(1, m + 1 - u.bit_length())          # r < 2^-shift
    terms = max(1, -(-(j + 4) // shift) - 1)        # tail < 2^-(j+3)
    prec = j + 4 + (3 * terms).bit_length()         # rounding < 2^-(j+3)
    pw = 1 << prec
    s = 0
    for i in range(1, terms + 1):
        pw = (pw * u) >> (m + 1)
        if pw == 0:
            break
        s += pw // i
    return s, prec


@lru_cache(maxsize=4096)
def log_int(a: int, j: int) -> ApproxReal:
    """Takes in an integer a >= 1 and returns ln(a) within 2^-j.

    Writes a = 2^(m+1) * (1 - r) with r <= 1/2, sums the series of ln(1 - r)
    to error 2^-(j+1) and adds (m+1) ln 2, where ln 2 is computed to
    2^-(j+1)/(m+1).
    """
    a, j = int(a), int(j)
    if a < 1:
        raise ValueError(f"log_int expects a >= 1, got {a}")
    if j < 1:
        raise ValueError(f"log_int expects a precision j >= 1, got {j}")
    if a == 1:
        return ApproxReal(MPQ_ZERO, j)
    m = a.bit_length() - 1
    s, prec = _ln_reduced_fixed(a, m, j)
    t = j + 1 + (m + 1).bit_length()
    s2, prec2 = _ln2_fixed(t)
    value = MPQ(-s, 1 << prec) + (m + 1) * MPQ(s2, 1 << prec2)
    return ApproxReal(value, j)


def ln_bounds(a: int, j: int = 64) -> Tuple["MPQ", "MPQ"]:
    """Certified enclosure lo < ln(a) < hi; exact for a == 1."""
    if int(a) == 1:
        return MPQ_ZERO, MPQ_ZERO
    return log_int(a, j).bounds()


def ln_rational_bounds(q, j: int = 64) -> Tuple["MPQ", "MPQ"]:
    q = MPQ(q)
    num_lo, num_hi = ln_bounds(int(q.numerator), j)
    den_lo, den_hi = ln_bounds(int(q.denominator), j)
    return num_lo - den_hi, num_hi - den_lo


def linear_form_approx(f: LinearForm, j: int) -> ApproxReal:
    """Approximates the form within 2^-j; term i gets j + ceil(log2 |b_i|) + ceil(log2 n) bits."""
    if j < 1:
        raise ValueError(f"precision must be at least 1 bit, got {j}")
    spread = ceil_log2(f.n)
    value = MPQ_ZERO
    for a, b in zip(f.a, f.b):
        prec = j + ceil_log2(abs(int(b))) + spread
        value += int(b) * log_int(int(a), prec).value
    return ApproxReal(value, j)


### continued fractions of log quotients ###

def convergents(a1: int, a2: int, count: int, precision: int = 256) -> List[Tuple[int, int]]:
    """Returns up to count convergents p/q of log(a1)/log(a2) as (q, p), so that
    a1^q / a2^p is close to 1."""
    if a1 < 2 or a2 < 2:
        raise ValueError("convergents need integers >= 2")
    lo1, hi1 = ln_bounds(a1, precision)
    lo2, hi2 = ln_bounds(a2, precision)
    lo, hi = lo1 / hi2, hi1 / lo2
    result = []
    p0, q0, p1, q1 = 0, 1, 1, 0
    while len(result) < count:
        t = floor_q(lo)
        if t != floor_q(hi):
            # enclosure too wide to fix the next partial quotient
            break
        p0, q0, p1, q1 = p1, q1, t * p1 + p0, t * q1 + q0
        if q1 > 0:
            result.append((q1, p1))
        lo, hi = lo - t, hi - t
        if lo <= 0:
            break
        lo, hi = 1 / hi, 1 / lo
    return result


### lower bounds for nonzero forms ###

E_UPPER = MPQ(2718281829, 10**9)
_CONST_PREC = 64


def _ln2_lower() -> "MPQ":
    return ln2_approx(_CONST_PREC).bounds()[0]


def _ln2_upper() -> "MPQ":
    return ln2_approx(_CONST_PREC).bounds()[1]


def _to_bits_upper(x) -> "MPQ":
    """upper bound of x / ln 2 for an upper bound x of some quantity"""
    return x / _ln2_lower() if x >= 0 else x / _ln2_upper()


def bw_constant(n: int) -> "MPQ":
    """upper bound of 18 (n+1)! n^(n+1) 32^(n+2) ln(2n)"""
    if n < 1:
        raise ValueError("the form needs at least one term")
    return 18 * factorial(n + 1) * n ** (n + 1) * 32 ** (n + 2) * ln_bounds(2 * n, _CONST_PREC)[1]


def matveev_constant(n: int) -> "MPQ":
    """upper bound of 2.9 (2e)^(2n+6) (n+2)^(9/2)"""
    if n < 1:
        raise ValueError("the form needs at least one term")
    scale = 1 << _CONST_PREC
    sqrt_up = MPQ(isqrt((n + 2) * scale * scale) + 1, scale)
    return MPQ(29, 10) * (2 * E_UPPER) ** (2 * n + 6) * (n + 2) ** 4 * sqrt_up


def _height_product(f: LinearForm) -> "MPQ":
    # prod max(ln a_i, 1), upward
    prod = MPQ_ONE
    for a in f.a:
        prod *= max(ln_bounds(int(a), _CONST_PREC)[1], MPQ_ONE)
    return prod


def _ln_big_b(f: LinearForm) -> "MPQ":
    # B = max(|b_i|, e); every integer >= 3 exceeds e, below that ln B = 1
    top = f.max_coefficient()
    if top >= 3:
        return ln_bounds(top, _CONST_PREC)[1]
    return MPQ_ONE


def _unconditional_gap(f: LinearForm, constant, regime: str, cap_bits: int) -> GapBound:
    cap = GlobalSettings.gap_cap_bits if cap_bits is None else cap_bits
    if _to_bits_upper(constant) > cap:
        raise OverflowGuard(f"{regime} constant for n={f.n} exceeds the cap of {cap} bits")
    gap = ceil_q(_to_bits_upper(constant * _height_product(f) * _ln_big_b(f)))
    if gap > cap:
        raise OverflowGuard(f"{regime} gap of {gap} bits exceeds the cap of {cap} bits")
    h.log(f"{regime} gap for n={f.n}: {gap} bits", h.LOG_LEVEL_4_DEBUG)
    return GapBound(max(gap, 0), regime, {"n": f.n})


def bw_gap(f: LinearForm, cap_bits: int = None) -> GapBound:
    return _unconditional_gap(f, bw_constant(f.n), "BakerWustholz", cap_bits)


def matveev_gap(f: LinearForm, cap_bits: int = None) -> GapBound:
    return _unconditional_gap(f, matveev_constant(f.n), "Matveev", cap_bits)


def lw_gap(f: LinearForm, eps, c) -> GapBound:
    """Gap from the conjectured bound C^n B / (|b_1|...|b_n| a_1...a_n)^(1+eps)."""
    eps, c = MPQ(eps), MPQ(c)
    if eps <= 0 or c <= 0:
        raise ValueError("lw_gap needs eps > 0 and C > 0")
    ln_size = MPQ_ZERO
    for a, b in zip(f.a, f.b):
        ln_size += ln_bounds(int(a), _CONST_PREC)[1] + ln_bounds(abs(int(b)), _CONST_PREC)[1]
    top = f.max_coefficient()
    ln_b_low = ln_bounds(top, _CONST_PREC)[0] if top >= 3 else MPQ_ONE
    ln_c_low = ln_rational_bounds(c, _CONST_PREC)[0]
    upper = (1 + eps) * ln_size - f.n * ln_c_low - ln_b_low
    gap = ceil_q(_to_bits_upper(upper))
    return GapBound(max(gap, 0), "LangWaldschmidt", {"eps": eps, "C": c})


def baker_abc_gap(f: LinearForm, k2) -> GapBound:
    """Gap from exp(-K'' (sum ln a_i) ln max|b_i|); the log factor is clamped to >= 1."""
    k2 = MPQ(k2)
    if k2 <= 0:
        raise ValueError("baker_abc_gap needs K'' > 0")
    ln_sum = sum((ln_bounds(int(a), _CONST_PREC)[1] for a in f.a), MPQ_ZERO)
    factor = ln_bounds(f.max_coefficient(), _CONST_PREC)[1]
    clamped = factor < 1
    if clamped:
        factor = MPQ_ONE
    gap = ceil_q(_to_bits_upper(k2 * ln_sum * factor))
    return GapBound(max(gap, 0), "BakerABC", {"K2": k2}, clamped)
