"""Reference computations over plain fractions, independent of the library's algorithms."""
import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from core.grammar import SCFG


def to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _span_value(g: SCFG, w: Sequence[str], best: dict, symbols: Tuple, i: int, j: int) -> Optional[Fraction]:
    if not symbols:
        return Fraction(1) if i == j else None
    head, rest = symbols[0], symbols[1:]
    result = None
    for m in range(i, j + 1):
        if g.is_terminal(head):
            if m != i + 1 or w[i] != head:
                continue
            value = Fraction(1)
        else:
            value = best.get((head, i, m))
            if value is None:
                continue
        tail = _span_value(g, w, best, rest, m, j)
        if tail is None:
            continue
        candidate = value * tail
        if result is None or candidate > result:
            result = candidate
    return result


def viterbi_oracle(g: SCFG, w: Sequence[str]) -> Optional[Fraction]:
    """Max parse probability by relaxing every (A, i, j) item until nothing improves."""
    w = tuple(w)
    n = len(w)
    best: Dict[Tuple, Fraction] = {}
    rounds = len(g.nonterminals) * (n + 1) * (n + 2) // 2 + 2
    for _ in range(rounds):
        changed = False
        for r in g.rules:
            p = to_fraction(r.prob)
            for i in range(n + 1):
                for j in range(i, n + 1):
                    v = _span_value(g, w, best, r.right, i, j)
                    if v is None:
                        continue
                    v *= p
                    key = (r.left, i, j)
                    if key not in best or v > best[key]:
                        best[key] = v
                        changed = True
        if not changed:
            break
    return best.get((g.start, 0, n))


def cyk_oracle(g: SCFG, w: Sequence[str]) -> Optional[Fraction]:
    """Textbook probabilistic CYK for grammars in Chomsky normal form."""
    w = tuple(w)
    n = len(w)
    if n == 0:
        eps = [to_fraction(r.prob) for r in g.rules_for(g.start) if r.is_epsilon()]
        return max(eps) if eps else None
    table: Dict[Tuple, Fraction] = {}
    for i, a in enumerate(w):
        for r in g.rules:
            if r.right == (a,):
                p = to_fraction(r.prob)
                if table.get((r.left, i, i + 1), 0) < p:
                    table[(r.left, i, i + 1)] = p
    for length in range(2, n + 1):
        for i in range(0, n - length + 1):
            j = i + length
            for r in g.rules:
                if len(r.right) != 2:
                    continue
                b, c = r.right
                for m in range(i + 1, j):
                    if (b, i, m) in table and (c, m, j) in table:
                        p = to_fraction(r.prob) * table[(b, i, m)] * table[(c, m, j)]
                        if table.get((r.left, i, j), 0) < p:
                            table[(r.left, i, j)] = p
    return table.get((g.start, 0, n))


def random_grammar(rng: random.Random, nonterminals=("S", "A", "B"), terminals=("a", "b"),
                   max_rules: int = 3, max_len: int = 3) -> SCFG:
    rules = []
    symbols = list(nonterminals) + list(terminals)
    for nt in nonterminals:
        k = rng.randint(1, max_rules)
        for _ in range(k):
            length = rng.choices(range(max_len + 1), weights=[1, 3, 3, 1][:max_len + 1])[0]
            right = tuple(rng.choice(symbols) for _ in range(length))
            rules.append((nt, right, Fraction(rng.randint(1, 3), 3 * k)))
    return SCFG(rules, nonterminals[0], nonterminals=list(nonterminals), terminals=set(terminals))


def random_cnf_grammar(rng: random.Random, nonterminals=("S", "A", "B"), terminals=("a", "b")) -> SCFG:
    rules = []
    for nt in nonterminals:
        k = rng.randint(2, 4)
        for index in range(k):
            if index == 0 or rng.random() < 0.4:
                right = (rng.choice(terminals),)
            else:
                right = (rng.choice(nonterminals[1:]), rng.choice(nonterminals[1:]))
            rules.append((nt, right, Fraction(rng.randint(1, 3), 3 * k)))
    return SCFG(rules, nonterminals[0], nonterminals=list(nonterminals), terminals=set(terminals))


def all_strings(terminals: Sequence[str], max_len: int) -> List[Tuple[str, ...]]:
    result = [()]
    layer = [()]
    for _ in range(max_len):
        layer = [s + (t,) for s in layer for t in terminals]
        result.extend(layer)
    return result


def gadget_rules(n: int) -> list:
    """A0 -> eps (1/2), Ai -> A(i-1) A(i-1) (1): A_n derives eps with probability 2^-(2^n)."""
    return [("A0", (), Fraction(1, 2))] + [(f"A{i}", (f"A{i - 1}", f"A{i - 1}"), 1) for i in range(1, n + 1)]


def _min_yield(g: SCFG) -> Dict[str, float]:
    best = {nt: float("inf") for nt in g.nonterminals}
    changed = True
    while changed:
        changed = False
        for r in g.rules:
            total = sum(1 if g.is_terminal(s) else best[s] for s in r.right)
            if total < best[r.left]:
                best[r.left] = total
                changed = True
    return best


def all_derivations(g: SCFG, max_len: int) -> List[Tuple[Tuple[str, ...], Fraction]]:
    """(yield, probability) of every parse tree from the start symbol with a yield of at most max_len
    terminals, sorted. Needs a grammar without unit or empty cycles."""
    low = _min_yield(g)
    memo: Dict[Tuple[str, int], list] = {}

    def length(s) -> float:
        return 1 if g.is_terminal(s) else low[s]

    def trees(symbol, budget: float) -> list:
        if length(symbol) > budget:
            return []
        if g.is_terminal(symbol):
            return [((symbol,), Fraction(1))]
        key = (symbol, budget)
        if key not in memo:
            found = []
            for r in g.by_left[symbol]:
                partial = [((), to_fraction(r.prob))]
                for k, s in enumerate(r.right):
                    rest = sum(length(t) for t in r.right[k + 1:])
                    partial = [(y + y2, p * p2) for y, p in partial
                               for y2, p2 in trees(s, budget - len(y) - rest)]
                found.extend(partial)
            memo[key] = found
        return memo[key]

    return sorted(trees(g.start, max_len))
