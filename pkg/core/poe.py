import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, Tuple

import toolbox.helper as h
from toolbox.numeric import MPQ, MPZ, gcd


class PoESyntaxError(Exception):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class BudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class PoE:
    """Positive rational stored as prod(bases[i] ** exponents[i])."""
    bases: Tuple[int, ...] = ()
    exponents: Tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.bases) != len(self.exponents):
            raise ValueError(f"PoE needs as many exponents as bases ({len(self.bases)} != {len(self.exponents)})")

    @staticmethod
    def one() -> "PoE":
        return _ONE

    @staticmethod
    def from_pairs(pairs: Iterable[Tuple[int, int]]) -> "PoE":
        pairs = list(pairs)
        return normalize(PoE(tuple(b for b, _ in pairs), tuple(e for _, e in pairs)))

    @staticmethod
    def from_rational(q) -> "PoE":
        q = MPQ(q)
        if q <= 0:
            raise ValueError(f"only positive rationals have a PoE representation, got {q}")
        return PoE.from_pairs([(int(q.numerator), 1), (int(q.denominator), -1)])

    @staticmethod
    def parse(text: str) -> "PoE":
        return parse_poe(text)

    def format(self) -> str:
        return format_poe(self)

    def __str__(self) -> str:
        return format_poe(self)

    def pairs(self) -> List[Tuple[int, int]]:
        return list(zip(self.bases, self.exponents))

    def is_one(self) -> bool:
        return len(self.bases) == 0

    def is_normalized(self) -> bool:
        if any(b < 2 for b in self.bases) or any(e == 0 for e in self.exponents):
            return False
        return all(self.bases[i] < self.bases[i + 1] for i in range(len(self.bases) - 1))

    def exponent_sum(self) -> int:
        return sum(abs(e) for e in self.exponents)

    def mul(self, other: "PoE") -> "PoE":
        return mul(self, other)

    def div(self, other: "PoE") -> "PoE":
        return div(self, other)

    def pow(self, k: int) -> "PoE":
        return power(self, k)

    def inverse(self) -> "PoE":
        return PoE(self.bases, tuple(-e for e in self.exponents))

    __mul__ = mul
    __truediv__ = div
    __pow__ = pow


_ONE = PoE()


def normalize(x: PoE) -> PoE:
    merged = {}
    for base, exp in zip(x.bases, x.exponents):
        base, exp = int(base), int(exp)
        if base <= 0:
            raise ValueError(f"PoE bases must be positive, got {base}")
        if base == 1 or exp == 0:
            continue
        merged[base] = merged.get(base, 0) + exp
    items = sorted((b, e) for b, e in merged.items() if e != 0)
    return PoE(tuple(b for b, _ in items), tuple(e for _, e in items))


def mul(x: PoE, y: PoE) -> PoE:
    if x.is_one():
        return y
    if y.is_one():
        return x
    return normalize(PoE(x.bases + y.bases, x.exponents + y.exponents))


def div(x: PoE, y: PoE) -> PoE:
    return mul(x, y.inverse())


def power(x: PoE, k: int) -> PoE:
    k = int(k)
    if k == 0:
        return _ONE
    return PoE(x.bases, tuple(e * k for e in x.exponents))


def product(factors: Iterable[PoE]) -> PoE:
    bases, exps = [], []
    for f in factors:
        bases.extend(f.bases)
        exps.extend(f.exponents)
    return normalize(PoE(tuple(bases), tuple(exps)))


def _split_sides(x: PoE) -> Tuple[List[Tuple[int, int]], List[Tuple[int, int]]]:
    pos = [(b, e) for b, e in zip(x.bases, x.exponents) if e > 0]
    neg = [(b, -e) for b, e in zip(x.bases, x.exponents) if e < 0]
    return pos, neg


def eval_exact(x: PoE, bit_budget: int) -> "MPQ":
    """Takes in a PoE and returns its exact rational value, provided numerator and
    denominator together fit in bit_budget bits."""
    if bit_budget <= 0:
        raise ValueError("bit_budget must be positive")
    pos, neg = _split_sides(x)
    # cheap lower bound of log2(P*Q) first
    lower = sum(e * (int(b).bit_length() - 1) for b, e in pos + neg)
    if lower > bit_budget:
        raise BudgetExceeded(f"PoE value needs more than {bit_budget} bits (at least {lower})")
    p = MPZ(1)
    for b, e in pos:
        p *= MPZ(b) ** e
    q = MPZ(1)
    for b, e in neg:
        q *= MPZ(b) ** e
    size = int(p).bit_length() + int(q).bit_length()
    if size > bit_budget:
        raise BudgetExceeded(f"PoE value needs {size} bits, budget is {bit_budget}")
    return MPQ(p, q)


### equality by gcd refinement ###

@dataclass
class RefinementResult:
    equal: bool
    iterations: int
    a: List[int] = field(default_factory=list)
    b: List[int] = field(default_factory=list)
    c: List[int] = field(default_factory=list)
    d: List[int] = field(default_factory=list)


def _first_common_pair(a: List[int], c: List[int], start_row: int) -> Optional[Tuple[int, int, int]]:
    for i in range(start_row, len(a)):
        ai = a[i]
        for j, cj in enumerate(c):
            g = gcd(ai, cj)
            if g > 1:
                return i, j, g
    return None


def refine(a: List[int], b: List[int], c: List[int], d: List[int],
           on_iteration: Callable[[List[int], List[int], List[int], List[int]], None] = None) -> RefinementResult:
    """Decides a^b == c^d for lists of integers >= 2 and positive exponents.

    Repeatedly picks the first pair (i, j) in lexicographic order with
    g = gcd(a_i, c_j) > 1, divides both by g, removes entries that became 1
    and moves g with the exponent difference to the side with the larger
    exponent. Entries appended this way take part in later scans.
    """
    if len(a) != len(b) or len(c) != len(d):
        raise ValueError("refine expects matching base and exponent lists")
    a, b, c, d = list(a), list(b), list(c), list(d)
    if any(x < 2 for x in a + c) or any(e <= 0 for e in b + d):
        raise ValueError("refine expects bases >= 2 and positive exponents")
    iterations = 0
    row = 0
    while True:
        found = _first_common_pair(a, c, row)
        if found is None:
            break
        i, j, g = found
        iterations += 1
        bi, dj = b[i], d[j]
        a[i] //= g
        c[j] //= g
        # rows before i stay coprime to every c entry: resume the scan at row i
        row = i
        if a[i] == 1:
            del a[i]
            del b[i]
        if c[j] == 1:
            del c[j]
            del d[j]
        if bi > dj:
            a.append(g)
            b.append(bi - dj)
        elif dj > bi:
            c.append(g)
            d.append(dj - bi)
        if h.verbose_level >= h.LOG_LEVEL_4_DEBUG:
            h.debugLog(f"refine #{iterations}: g={g} sizes a={len(a)} c={len(c)}")
        if on_iteration is not None:
            on_iteration(a, b, c, d)
    equal = len(a) == 0 and len(c) == 0
    return RefinementResult(equal, iterations, a, b, c, d)


def four_lists(x: PoE, y: PoE) -> Tuple[List[int], List[int], List[int], List[int]]:
    """Rearranges x == y into a^b == c^d with positive exponents on both sides."""
    x_pos, x_neg = _split_sides(x)
    y_pos, y_neg = _split_sides(y)
    left = x_pos + y_neg
    right = y_pos + x_neg
    return [b for b, _ in left], [e for _, e in left], [b for b, _ in right], [e for _, e in right]


def equals(x: PoE, y: PoE) -> bool:
    x, y = normalize(x), normalize(y)
    if x == y:
        return True
    a, b, c, d = four_lists(x, y)
    return refine(a, b, c, d).equal


### text format ###
# 2^6 * 3^3 / 5^2 - '/' flips the sign of the following factor, empty text is 1

_TOKEN = re.compile(r"\s*(?:(\d+)|(\^)|(\*)|(/)|([+-]))")


def _position(text: str, offset: int) -> Tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PoESyntaxError(f"unexpected character '{text[start]}'", *_position(text, start))
        kinds = ("int", "^", "*", "/", "sign")
        for kind, value in zip(kinds, m.groups()):
            if value is not None:
                tokens.append((kind, value, m.start(m.lastindex)))
        pos = m.end()
    return tokens


def parse_poe(text: str) -> PoE:
    tokens = _tokenize(text)
    pairs = []
    k = 0

    def fail(msg: str, index: int):
        offset = tokens[index][2] if index < len(tokens) else len(text)
        raise PoESyntaxError(msg, *_position(text, offset))

    sign = 1
    if k < len(tokens) and tokens[k][0] in ("*", "/"):
        # leading '/' denotes a reciprocal, leading '*' is tolerated
        sign = -1 if tokens[k][0] == "/" else 1
        k += 1
        if k >= len(tokens):
            fail("expected a factor", k)
    while k < len(tokens):
        if tokens[k][0] != "int":
            fail(f"expected a base, found '{tokens[k][1]}'", k)
        base = int(tokens[k][1])
        if base == 0:
            fail("base must be positive", k)
        k += 1
        exp = 1
        if k < len(tokens) and tokens[k][0] == "^":
            k += 1
            neg = False
            if k < len(tokens) and tokens[k][0] == "sign":
                neg = tokens[k][1] == "-"
                k += 1
            if k >= len(tokens) or tokens[k][0] != "int":
                fail("expected an exponent after '^'", k)
            exp = -int(tokens[k][1]) if neg else int(tokens[k][1])
            k += 1
        pairs.append((base, sign * exp))
        if k < len(tokens):
            if tokens[k][0] not in ("*", "/"):
                fail(f"expected '*' or '/', found '{tokens[k][1]}'", k)
            sign = -1 if tokens[k][0] == "/" else 1
            k += 1
            if k >= len(tokens):
                fail("expected a factor", k)
    return PoE.from_pairs(pairs)


def _factor(base: int, exp: int) -> str:
    return str(base) if exp == 1 else f"{base}^{exp}"


def format_poe(x: PoE) -> str:
    pos, neg = _split_sides(x)
    if not pos and not neg:
        return "1"
    text = " * ".join(_factor(b, e) for b, e in pos) if pos else "1"
    for b, e in neg:
        text += " / " + _factor(b, e)
    return text
