import fractions
import math
import os
import re

#----------------------------------------------------------------------------#
# Big-number backend.                                                        #
#                                                                            #
# gmpy2 is used for large integer and rational arithmetic when it is         #
# installed; otherwise plain int / fractions.Fraction are used. MPQ is the   #
# rational type used for every exact probability and approximation value.  #
# Set POE_NOGMPY to force the pure python backend.                           #
#----------------------------------------------------------------------------#

BACKEND = 'python'
MPZ = int
MPQ = fractions.Fraction
_gcd = math.gcd
_isqrt = math.isqrt

if 'POE_NOGMPY' not in os.environ:
    try:
        import gmpy2
        BACKEND = 'gmpy'
        MPZ = gmpy2.mpz
        MPQ = gmpy2.mpq
        _gcd = gmpy2.gcd
        _isqrt = gmpy2.isqrt
    except ImportError:
        pass

MPQ_ZERO = MPQ(0)
MPQ_ONE = MPQ(1)


def gcd(a: int, b: int) -> int:
    return int(_gcd(a, b))


def isqrt(a: int) -> int:
    return int(_isqrt(a))


def ceil_log2(x: int) -> int:
    """Smallest t >= 0 with 2^t >= x (x >= 1)."""
    if x < 1:
        raise ValueError(f"ceil_log2 expects a positive integer, got {x}")
    return int(x - 1).bit_length()


def ceil_log2_rational(q) -> int:
    """Smallest integer t with 2^t >= q for a positive rational q."""
    num, den = int(q.numerator), int(q.denominator)
    if num <= 0:
        raise ValueError(f"ceil_log2_rational expects a positive value, got {q}")
    t = num.bit_length() - den.bit_length()
    # adjust the estimate, it is off by at most one
    while _pow2_ge(t - 1, num, den):
        t -= 1
    while not _pow2_ge(t, num, den):
        t += 1
    return t


def _pow2_ge(t: int, num: int, den: int) -> bool:
    # 2^t >= num/den
    if t >= 0:
        return den << t >= num
    return den >= num << -t


def floor_q(q) -> int:
    return int(q.numerator) // int(q.denominator)


def ceil_q(q) -> int:
    return -(-int(q.numerator) // int(q.denominator))


def pow2(k: int):
    """Exact 2^k as rational (k may be negative)."""
    if k >= 0:
        return MPQ(1 << k)
    return MPQ(1, 1 << -k)


def to_rational(value) -> "MPQ":
    """Takes in an int, a rational or a string ('3/10', '0.3', '1e-2') and returns the exact MPQ value."""
    if isinstance(value, str):
        text = value.strip()
        if not re.fullmatch(r"[+-]?(\d+(/\d+)?|\d*\.\d+([eE][+-]?\d+)?|\d+[eE][+-]?\d+|\d+\.\d*)", text):
            raise ValueError(f"'{value}' is not an exact rational literal")
        try:
            f = fractions.Fraction(text)
        except ZeroDivisionError:
            raise ValueError(f"'{value}' has a zero denominator")
        return MPQ(f.numerator, f.denominator)
    if isinstance(value, float):
        # floats only come from yaml settings files: take the decimal literal the user wrote
        f = fractions.Fraction(repr(value))
        return MPQ(f.numerator, f.denominator)
    return MPQ(value)


def format_rational(q) -> str:
    num, den = int(q.numerator), int(q.denominator)
    if den == 1:
        return str(num)
    return f"{num}/{den}"


def format_dyadic(q) -> str:
    """Renders a dyadic rational as 'n / 2^k' (or an integer)."""
    num, den = int(q.numerator), int(q.denominator)
    if den == 1:
        return str(num)
    if den & (den - 1):
        return format_rational(q)
    return f"{num} / 2^{den.bit_length() - 1}"


def approx_str(q, digits: int = 12) -> str:
    # display only, never used for decisions
    try:
        return f"{float(q):.{digits}g}"
    except OverflowError:
        return "inf" if q > 0 else "-inf"
