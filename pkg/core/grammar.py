import re
from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

import toolbox.helper as h
from core.poe import PoE
from toolbox.numeric import MPQ, MPQ_ONE, MPQ_ZERO, format_rational, to_rational

Symbol = Hashable
EPSILON = ""


class GrammarError(Exception):
    pass


@dataclass(frozen=True)
class Rule:
    index: int
    left: Symbol
    right: Tuple[Symbol, ...]
    prob: "MPQ"
    line: Optional[int] = field(default=None, compare=False)

    @property
    def weight(self) -> PoE:
        return PoE.from_rational(self.prob)

    def is_epsilon(self) -> bool:
        return len(self.right) == 0

    def where(self) -> str:
        return f"rule {self.index}" + (f" (line {self.line})" if self.line is not None else "")


class SCFG:
    """Stochastic context-free grammar; rule indices are positions in `rules`.

    Nonterminals keep first-appearance order with the start symbol first; that
    order is the tie-break order of every maximization.
    """

    def __init__(self, rules: Iterable, start: Symbol, nonterminals: Sequence[Symbol] = None,
                 terminals: Iterable[Symbol] = None, check_proper: bool = True):
        self.start = start
        self.rules: Tuple[Rule, ...] = tuple(self._make_rule(k, r) for k, r in enumerate(rules))

        order: List[Symbol] = [start]
        seen = {start}
        for nt in list(nonterminals or []) + [r.left for r in self.rules]:
            if nt not in seen:
                seen.add(nt)
                order.append(nt)
        if terminals is None:
            # undeclared right-side symbols without rules are terminals
            terminals = {s for r in self.rules for s in r.right if s not in seen}
        self.nonterminals: Tuple[Symbol, ...] = tuple(order)
        self.terminals = frozenset(terminals)
        self._nt_index: Dict[Symbol, int] = {nt: k for k, nt in enumerate(self.nonterminals)}
        self.by_left: Dict[Symbol, List[Rule]] = {nt: [] for nt in self.nonterminals}
        for r in self.rules:
            self.by_left[r.left].append(r)
        self._validate(check_proper)

    @staticmethod
    def _make_rule(index: int, r) -> Rule:
        if isinstance(r, Rule):
            return Rule(index, r.left, tuple(r.right), MPQ(r.prob), r.line)
        left, right, prob = r[0], r[1], r[2]
        line = r[3] if len(r) > 3 else None
        return Rule(index, left, tuple(right), to_rational(prob), line)

    def _validate(self, check_proper: bool):
        overlap = self.terminals & set(self.nonterminals)
        if overlap:
            raise GrammarError(f"symbols used as terminal and nonterminal: {sorted(map(str, overlap))}")
        for r in self.rules:
            if not (MPQ_ZERO < r.prob <= MPQ_ONE):
                raise GrammarError(f"{r.where()}: probability {format_rational(r.prob)} is not in (0, 1]")
            for s in r.right:
                if s not in self._nt_index and s not in self.terminals:
                    raise GrammarError(f"{r.where()}: unknown symbol '{s}'")
                if s == EPSILON:
                    raise GrammarError(f"{r.where()}: the empty string is not a symbol, write an empty right side")
        if not check_proper:
            return
        for nt, rules in self.by_left.items():
            total = sum((r.prob for r in rules), MPQ_ZERO)
            if total > 1:
                where = ", ".join(r.where() for r in rules)
                raise GrammarError(f"probabilities of '{nt}' sum to {format_rational(total)} > 1 ({where})")

    def is_nonterminal(self, symbol: Symbol) -> bool:
        return symbol in self._nt_index

    def is_terminal(self, symbol: Symbol) -> bool:
        return symbol in self.terminals

    def nt_index(self, symbol: Symbol) -> int:
        return self._nt_index[symbol]

    def rules_for(self, nt: Symbol) -> List[Rule]:
        return self.by_left.get(nt, [])

    def size(self) -> int:
        return sum(1 + len(r.right) for r in self.rules)

    def is_cnf(self) -> bool:
        """Chomsky normal form: A -> B C or A -> a, plus S -> eps when S never occurs on a right side."""
        start_on_right = any(self.start in r.right for r in self.rules)
        for r in self.rules:
            if len(r.right) == 0:
                if r.left != self.start or start_on_right:
                    return False
            elif len(r.right) == 1:
                if not self.is_terminal(r.right[0]):
                    return False
            elif len(r.right) == 2:
                if not all(self.is_nonterminal(s) for s in r.right):
                    return False
            else:
                return False
        return True

    def has_epsilon_rules(self) -> bool:
        return any(r.is_epsilon() for r in self.rules)

    def __repr__(self) -> str:
        return f"SCFG(start={self.start!r}, nonterminals={len(self.nonterminals)}, rules={len(self.rules)})"


### grammar file format ###
# %start S
# S -> A 'b' B   # 1/2
# A ->           # 0.3     (epsilon rule)

_RULE_LINE = re.compile(r"(?P<left>[^\s'\"#]+)\s*->(?P<right>[^#]*)#\s*(?P<prob>\S+)\s*")
_START_LINE = re.compile(r"%start\s+(?P<start>[^\s'\"#]+)\s*")
_RIGHT_TOKEN = re.compile(r"\s*(?:'(?P<sq>[^']+)'|\"(?P<dq>[^\"]+)\"|(?P<nt>[^\s'\"]+))")


def _parse_right(text: str, number: int) -> List[Tuple[str, bool]]:
    symbols = []
    pos = 0
    while text[pos:].strip():
        m = _RIGHT_TOKEN.match(text, pos)
        if not m:
            raise GrammarError(f"line {number}: cannot parse right side '{text.strip()}'")
        if m.group("nt") is not None:
            symbols.append((m.group("nt"), False))
        else:
            symbols.append((m.group("sq") if m.group("sq") is not None else m.group("dq"), True))
        pos = m.end()
    return symbols


def parse_grammar(text: str) -> SCFG:
    """Takes in grammar file text and returns the validated SCFG."""
    start = None
    raw_rules = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("//"):
            continue
        m = _START_LINE.fullmatch(line)
        if m:
            if start is not None:
                raise GrammarError(f"line {number}: start symbol declared twice")
            if raw_rules:
                raise GrammarError(f"line {number}: %start must precede the rules")
            start = m.group("start")
            continue
        m = _RULE_LINE.fullmatch(line)
        if not m:
            if "->" in line and "#" not in line:
                raise GrammarError(f"line {number}: rule without probability, expected '... # p'")
            raise GrammarError(f"line {number}: cannot parse '{line}'")
        try:
            prob = to_rational(m.group("prob"))
        except ValueError as e:
            raise GrammarError(f"line {number}: {e}")
        raw_rules.append((m.group("left"), _parse_right(m.group("right"), number), prob, number))

    if not raw_rules:
        raise GrammarError("grammar has no rules")
    if start is None:
        start = raw_rules[0][0]
    lefts = {left for left, _, _, _ in raw_rules}
    nonterminals = [start] + [left for left, _, _, _ in raw_rules]
    terminals = set()
    for left, right, _, number in raw_rules:
        for symbol, quoted in right:
            if quoted:
                if symbol in lefts or symbol == start:
                    raise GrammarError(f"line {number}: terminal '{symbol}' is also a nonterminal")
                terminals.add(symbol)
            elif symbol not in lefts:
                h.log(f"line {number}: nonterminal '{symbol}' has no rules")
                nonterminals.append(symbol)
    rules = [(left, tuple(s for s, _ in right), prob, number) for left, right, prob, number in raw_rules]
    return SCFG(rules, start, nonterminals=nonterminals, terminals=terminals)


def load_grammar(path: str) -> SCFG:
    h.log(f"loading grammar from '{path}'")
    with open(path, "r", encoding="utf-8") as f:
        return parse_grammar(f.read())


def _format_symbol(g: SCFG, symbol: Symbol) -> str:
    return f"'{symbol}'" if g.is_terminal(symbol) else str(symbol)


def format_grammar(g: SCFG) -> str:
    lines = [f"%start {g.start}"]
    for r in g.rules:
        right = " ".join(_format_symbol(g, s) for s in r.right)
        lines.append(f"{r.left} -> {right + ' ' if right else ''}# {format_rational(r.prob)}")
    return "\n".join(lines) + "\n"
