import heapq
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import toolbox.helper as h
from core.compare import (Adaptive, Certificate, CompareOutcome, ComparisonUnresolved, Ordering, compare)
from core.grammar import EPSILON, SCFG, GrammarError, Rule, Symbol
from core.logform import LinearForm, linear_form_approx, ln2_approx
from core.parse_dag import DagBuilder, ParseDAG, rule_multiplicities
from core.poe import PoE, mul
from core.snf import SNFGrammar, to_snf
from settings import GlobalSettings
from toolbox.numeric import MPQ, MPQ_ONE, ceil_log2, ceil_log2_rational, floor_q


class ExponentBoundViolation(AssertionError):
    pass


### value algebras ###

class ExactWeighting:
    """Probabilities as PoE numbers, larger is better; comparisons by certified sign determination."""
    name = "exact"

    def __init__(self, max_bits: int = None):
        self.mode = Adaptive(max_bits or GlobalSettings.adaptive_max_bits)
        self.one = PoE.one()
        self._cache: Dict[Tuple[PoE, PoE], int] = {}
        self.comparisons = 0

    def rule_value(self, rule: Rule) -> PoE:
        return rule.weight

    def times(self, x: PoE, y: PoE) -> PoE:
        return mul(x, y)

    def cmp(self, x: PoE, y: PoE) -> int:
        """1 if x is the better (larger) value, -1 if y is, 0 if equal."""
        if x == y:
            return 0
        cached = self._cache.get((x, y))
        if cached is not None:
            return cached
        self.comparisons += 1
        outcome = compare(x, y, self.mode)
        if outcome.ordering == Ordering.UNRESOLVED:
            raise ComparisonUnresolved(f"cannot order {x} and {y} within {self.mode.max_bits} bits")
        result = {Ordering.GREATER: 1, Ordering.LESS: -1, Ordering.EQUAL: 0}[outcome.ordering]
        self._cache[(x, y)] = result
        self._cache[(y, x)] = -result
        return result


class TropicalWeighting:
    """Costs -ln p as integers in units of 2^-scale_bits, smaller is better."""
    name = "approx"

    def __init__(self, costs: Dict[int, int], scale_bits: int):
        self.costs = costs
        self.scale_bits = scale_bits
        self.one = 0

    def rule_value(self, rule: Rule) -> int:
        return self.costs[rule.index]

    def times(self, x: int, y: int) -> int:
        return x + y

    def cmp(self, x: int, y: int) -> int:
        return (x < y) - (x > y)


class _Entry:
    """heap entry, the best value pops first, ties by key"""
    __slots__ = ("value", "key", "item", "payload", "weighting")

    def __init__(self, value, key, item, payload, weighting):
        self.value = value
        self.key = key
        self.item = item
        self.payload = payload
        self.weighting = weighting

    def __lt__(self, other: "_Entry") -> bool:
        c = self.weighting.cmp(self.value, other.value)
        if c != 0:
            return c > 0
        return self.key < other.key


### best derivations of the empty string ###

@dataclass
class KnuthResult:
    best: Dict[Symbol, object]
    best_rule: Dict[Symbol, Rule]
    order: List[Symbol]


def knuth(grammar: SCFG, weighting, rules: Sequence[Rule] = None) -> KnuthResult:
    """Knuth's generalization of Dijkstra to grammars.

    A nonterminal becomes a candidate once every nonterminal on the right side
    of one of its rules is settled; the candidate with the best value is
    settled next (ties: lowest nonterminal index, then lowest rule index).
    Settled values are final because no rule improves on its right side.
    """
    rules = grammar.rules if rules is None else rules
    best: Dict[Symbol, object] = {}
    best_rule: Dict[Symbol, Rule] = {}
    order: List[Symbol] = []
    pending: Dict[int, int] = {}
    watchers: Dict[Symbol, List[Rule]] = defaultdict(list)
    heap: List[_Entry] = []

    def push(r: Rule):
        value = weighting.rule_value(r)
        for s in r.right:
            if grammar.is_nonterminal(s):
                value = weighting.times(value, best[s])
        heapq.heappush(heap, _Entry(value, (grammar.nt_index(r.left), r.index), r.left, r, weighting))

    for r in rules:
        nts = [s for s in r.right if grammar.is_nonterminal(s)]
        pending[r.index] = len(nts)
        for s in nts:
            watchers[s].append(r)
        if not nts:
            push(r)
    while heap:
        entry = heapq.heappop(heap)
        if entry.item in best:
            continue
        best[entry.item] = entry.value
        best_rule[entry.item] = entry.payload
        order.append(entry.item)
        h.log(f"settled {entry.item} by rule {entry.payload.index}", h.LOG_LEVEL_4_DEBUG)
        for r in watchers[entry.item]:
            pending[r.index] -= 1
            if pending[r.index] == 0 and r.left not in best:
                push(r)
    return KnuthResult(best, best_rule, order)


def _knuth_nodes(result: KnuthResult, grammar: SCFG, builder: DagBuilder,
                 label_of=lambda item: item, rule_ref=lambda r: r.index) -> Dict[Symbol, int]:
    nodes: Dict[Symbol, int] = {}
    for item in result.order:
        r = result.best_rule[item]
        children = [nodes[s] if grammar.is_nonterminal(s) else builder.leaf(s) for s in r.right]
        if not children:
            children = [builder.leaf(EPSILON)]
        nodes[item] = builder.internal(label_of(item), rule_ref(r), children)
    return nodes


class EpsTable:
    """Maximum probability of deriving the empty string, per nonterminal, with witness nodes."""

    def __init__(self, grammar: SCFG, result: KnuthResult, builder: DagBuilder, weighting):
        self.grammar = grammar
        self.weighting = weighting
        self.result = result
        self.builder = builder
        self._nodes = _knuth_nodes(result, grammar, builder)

    def prob(self, nt: Symbol):
        return self.result.best.get(nt)

    def node(self, nt: Symbol) -> Optional[int]:
        return self._nodes.get(nt)

    def dag(self, nt: Symbol) -> Optional[ParseDAG]:
        ref = self._nodes.get(nt)
        return None if ref is None else self.builder.build(ref, self.grammar)

    def __getitem__(self, nt: Symbol) -> Tuple[object, Optional[ParseDAG]]:
        return self.prob(nt), self.dag(nt)

    def __contains__(self, nt: Symbol) -> bool:
        return nt in self.result.best

    def items(self):
        return dict(self.result.best).items()


def max_eps_probs(g: SCFG, weighting=None, builder: DagBuilder = None) -> EpsTable:
    """Runs Knuth's algorithm on the rules without terminals (the rest cannot derive the empty string)."""
    weighting = weighting or ExactWeighting()
    builder = builder or DagBuilder()
    rules = [r for r in g.rules if all(g.is_nonterminal(s) for s in r.right)]
    h.logBeginTask("empty-string probabilities")
    result = knuth(g, weighting, rules)
    h.logEndTask()
    h.log(f"{len(result.best)} of {len(g.nonterminals)} nonterminals derive the empty string")
    return EpsTable(g, result, builder, weighting)


### best unary derivations A =>* B ###

@dataclass(frozen=True)
class UnaryEdge:
    rule: Rule
    kept: int       # position of the kept child, the other one derives the empty string


class UnaryReach:
    """Best derivations of a single nonterminal B from A, by Dijkstra over the unit graph."""

    def __init__(self, grammar: SCFG, eps: EpsTable, weighting):
        self.grammar = grammar
        self.eps = eps
        self.weighting = weighting
        self.edges: Dict[Symbol, Dict[Symbol, Tuple[object, UnaryEdge]]] = {nt: {} for nt in grammar.nonterminals}
        self._build_graph()
        self.dist: Dict[Symbol, Dict[Symbol, object]] = {}
        self.pred: Dict[Symbol, Dict[Symbol, Tuple[Symbol, UnaryEdge]]] = {}
        for source in grammar.nonterminals:
            self._dijkstra(source)

    def _offer(self, a: Symbol, b: Symbol, value, edge: UnaryEdge):
        current = self.edges[a].get(b)
        if current is None or self.weighting.cmp(value, current[0]) > 0:
            self.edges[a][b] = (value, edge)

    def _build_graph(self):
        g, w = self.grammar, self.weighting
        for r in g.rules:
            if len(r.right) == 1 and g.is_nonterminal(r.right[0]):
                self._offer(r.left, r.right[0], w.rule_value(r), UnaryEdge(r, 0))
            elif len(r.right) == 2 and all(g.is_nonterminal(s) for s in r.right):
                left, right = r.right
                if right in self.eps:
                    self._offer(r.left, left, w.times(w.rule_value(r), self.eps.prob(right)), UnaryEdge(r, 0))
                if left in self.eps:
                    self._offer(r.left, right, w.times(w.rule_value(r), self.eps.prob(left)), UnaryEdge(r, 1))
            elif len(r.right) > 2:
                raise GrammarError(f"{r.where()}: unary reachability needs a grammar in simple normal form")

    def _dijkstra(self, source: Symbol):
        g, w = self.grammar, self.weighting
        dist: Dict[Symbol, object] = {}
        pred: Dict[Symbol, Tuple[Symbol, UnaryEdge]] = {}
        seen = {source: w.one}
        heap = [_Entry(w.one, g.nt_index(source), source, None, w)]
        while heap:
            entry = heapq.heappop(heap)
            if entry.item in dist:
                continue
            dist[entry.item] = entry.value
            if entry.payload is not None:
                pred[entry.item] = entry.payload
            for b, (value, edge) in self.edges[entry.item].items():
                if b in dist:
                    continue
                candidate = w.times(entry.value, value)
                if b not in seen or w.cmp(candidate, seen[b]) > 0:
                    seen[b] = candidate
                    heapq.heappush(heap, _Entry(candidate, g.nt_index(b), b, (entry.item, edge), w))
        self.dist[source] = dist
        self.pred[source] = pred

    def prob(self, a: Symbol, b: Symbol):
        return self.dist[a].get(b)

    def reachable(self, a: Symbol) -> Dict[Symbol, object]:
        return self.dist[a]

    def path(self, a: Symbol, b: Symbol) -> List[Tuple[Symbol, UnaryEdge]]:
        """Edges from a down to b as (upper nonterminal, edge)."""
        if b not in self.dist[a]:
            raise KeyError(f"{b} is not reachable from {a}")
        edges = []
        node = b
        while node != a:
            upper, edge = self.pred[a][node]
            edges.append((upper, edge))
            node = upper
        edges.reverse()
        return edges

    def splice(self, builder: DagBuilder, a: Symbol, b: Symbol, bottom: int) -> int:
        """Node for a whose unary path ends in the given node for b."""
        current = bottom
        for upper, edge in reversed(self.path(a, b)):
            r = edge.rule
            if len(r.right) == 1:
                children = [current]
            elif edge.kept == 0:
                children = [current, self.eps.node(r.right[1])]
            else:
                children = [self.eps.node(r.right[0]), current]
            current = builder.internal(upper, r.index, children)
        return current

    def dag(self, a: Symbol, b: Symbol, builder: DagBuilder = None) -> Optional[ParseDAG]:
        """Parse DAG of the best a =>* b derivation, with b as a leaf."""
        if b not in self.dist[a]:
            return None
        builder = builder or self.eps.builder
        return builder.build(self.splice(builder, a, b, builder.leaf(str(b))), self.grammar)

    def __getitem__(self, pair: Tuple[Symbol, Symbol]):
        a, b = pair
        return self.prob(a, b), self.dag(a, b)


def max_unary_reach(g: Union[SNFGrammar, SCFG], eps: EpsTable, weighting=None) -> UnaryReach:
    grammar = g.grammar if isinstance(g, SNFGrammar) else g
    h.logBeginTask("unary reachability")
    reach = UnaryReach(grammar, eps, weighting or eps.weighting)
    h.logEndTask()
    return reach


### chart over spans ###

@dataclass
class MaxParseTables:
    eps: Dict[Symbol, object] = field(default_factory=dict)
    unary: Dict[Tuple[Symbol, Symbol], object] = field(default_factory=dict)
    p: Dict[Tuple[Symbol, int, int], object] = field(default_factory=dict)
    q: Dict[Tuple[Symbol, int, int], object] = field(default_factory=dict)


@dataclass
class MaxParseResult:
    prob: Optional[PoE]                 # None when the string has no parse
    dag: Optional[ParseDAG] = None      # over the original grammar
    snf_dag: Optional[ParseDAG] = None
    tables: Optional[MaxParseTables] = None
    value: object = None                # the raw weighting value (PoE or scaled cost)

    @property
    def member(self) -> bool:
        return self.value is not None


def _as_tokens(w) -> Tuple[str, ...]:
    # a plain string is a sequence of one-character terminals
    return tuple(w)


def _chart(grammar: SCFG, w: Tuple[str, ...], reach: UnaryReach, weighting, builder: DagBuilder,
           tables: MaxParseTables) -> Tuple[object, Optional[int]]:
    nts = grammar.nonterminals
    n = len(w)
    term_rules: Dict[Tuple[Symbol, str], List[Rule]] = defaultdict(list)
    bin_rules: Dict[Symbol, List[Rule]] = defaultdict(list)
    for r in grammar.rules:
        if len(r.right) == 1 and grammar.is_terminal(r.right[0]):
            term_rules[(r.left, r.right[0])].append(r)
        elif len(r.right) == 2 and all(grammar.is_nonterminal(s) for s in r.right):
            bin_rules[r.left].append(r)
    # reverse unary map: for every B, the nonterminals A with A =>* B
    reached_by: Dict[Symbol, List[Symbol]] = defaultdict(list)
    for a in nts:
        for b in reach.reachable(a):
            reached_by[b].append(a)

    q: Dict[Tuple[Symbol, int, int], object] = {}
    q_back: Dict[Tuple[Symbol, int, int], tuple] = {}
    p: Dict[Tuple[Symbol, int, int], object] = {}
    p_back: Dict[Tuple[Symbol, int, int], Symbol] = {}

    for j in range(1, n + 1):
        h.log(f"chart layer {j} of {n}", h.LOG_LEVEL_4_DEBUG)
        for i in range(0, n - j + 1):
            for a in nts:
                best, back = None, None
                if j == 1:
                    for r in term_rules.get((a, w[i]), ()):
                        value = weighting.rule_value(r)
                        if best is None or weighting.cmp(value, best) > 0:
                            best, back = value, ("term", r)
                else:
                    for r in bin_rules.get(a, ()):
                        left, right = r.right
                        for m in range(1, j):
                            pl = p.get((left, i, m))
                            if pl is None:
                                continue
                            pr = p.get((right, i + m, j - m))
                            if pr is None:
                                continue
                            value = weighting.times(weighting.times(weighting.rule_value(r), pl), pr)
                            if best is None or weighting.cmp(value, best) > 0:
                                best, back = value, ("bin", r, m)
                if best is not None:
                    q[(a, i, j)] = best
                    q_back[(a, i, j)] = back
            # p(A, i, j) = max over B of reach(A, B) * q(B, i, j), lowest B index on ties
            for b in nts:
                qb = q.get((b, i, j))
                if qb is None:
                    continue
                for a in reached_by[b]:
                    value = weighting.times(reach.prob(a, b), qb)
                    key = (a, i, j)
                    current = p.get(key)
                    if current is None or weighting.cmp(value, current) > 0:
                        p[key] = value
                        p_back[key] = b

    tables.p.update(p)
    tables.q.update(q)
    root_key = (grammar.start, 0, n)
    if root_key not in p:
        return None, None

    q_nodes: Dict[Tuple[Symbol, int, int], int] = {}
    p_nodes: Dict[Tuple[Symbol, int, int], int] = {}

    def q_node(key) -> int:
        if key in q_nodes:
            return q_nodes[key]
        b, i, j = key
        back = q_back[key]
        if back[0] == "term":
            ref = builder.internal(b, back[1].index, [builder.leaf(w[i])])
        else:
            r, m = back[1], back[2]
            left, right = r.right
            ref = builder.internal(b, r.index, [p_node((left, i, m)), p_node((right, i + m, j - m))])
        q_nodes[key] = ref
        return ref

    def p_node(key) -> int:
        if key in p_nodes:
            return p_nodes[key]
        a, i, j = key
        b = p_back[key]
        ref = reach.splice(builder, a, b, q_node((b, i, j)))
        p_nodes[key] = ref
        return ref

    return p[root_key], p_node(root_key)


def exponent_sum_bound(n: int, length: int) -> int:
    """Bound on the rule count (rules with probability below 1) of the trees the pipeline returns."""
    bound = 2 * n * n * 2 ** n
    if length > n:
        bound = max(bound, (2 * length - 1) * ((n - 1) * 2 ** n + 1))
    return bound


def check_exponent_bound(snf_dag: ParseDAG, n: int, length: int):
    counts = rule_multiplicities(snf_dag.nodes, snf_dag.root)
    total = sum(c for r, c in counts.items() if snf_dag.grammar.rules[r].prob != MPQ_ONE)
    bound = exponent_sum_bound(n, length)
    if total >= bound:
        raise ExponentBoundViolation(f"parse uses {total} rule applications, bound is {bound}")
    h.log(f"rule count {total} below bound {bound}", h.LOG_LEVEL_4_DEBUG)


def _run_pipeline(snf: SNFGrammar, w: Sequence[str], weighting, debug_asserts: bool = None) -> MaxParseResult:
    g = snf.grammar
    w = _as_tokens(w)
    debug_asserts = GlobalSettings.debug_asserts if debug_asserts is None else debug_asserts
    unknown = [t for t in w if not g.is_terminal(t)]
    if unknown:
        h.info(f"input contains symbols that are not terminals of the grammar: {unknown}")
        return MaxParseResult(None)

    builder = DagBuilder()
    tables = MaxParseTables()
    eps = max_eps_probs(g, weighting, builder)
    tables.eps.update(eps.result.best)
    if len(w) == 0:
        value, root = eps.prob(g.start), eps.node(g.start)
    else:
        reach = max_unary_reach(g, eps, weighting)
        for a in g.nonterminals:
            for b, v in reach.reachable(a).items():
                tables.unary[(a, b)] = v
        h.logBeginTask(f"chart for a string of length {len(w)}")
        value, root = _chart(g, w, reach, weighting, builder, tables)
        h.logEndTask()
    if value is None:
        return MaxParseResult(None, tables=tables)

    snf_dag = builder.build(root, g)
    if debug_asserts:
        check_exponent_bound(snf_dag, len(g.nonterminals), len(w))
    dag = snf.lower(snf_dag)
    prob = value if isinstance(weighting, ExactWeighting) else dag.prob
    return MaxParseResult(prob, dag, snf_dag, tables, value)


def max_parse(g: Union[SNFGrammar, SCFG], w: Sequence[str], weighting=None, debug_asserts: bool = None) -> MaxParseResult:
    """Exact maximum parse probability of w and a parse DAG attaining it.

    The empty string is answered by the empty-string table of the start
    symbol; longer strings by the span chart, where q(A, i, j) uses a
    non-unit rule at the top and p(A, i, j) prefixes the best unary path.
    """
    snf = g if isinstance(g, SNFGrammar) else to_snf(g)
    return _run_pipeline(snf, w, weighting or ExactWeighting(), debug_asserts)


### product with the string automaton ###

@dataclass
class ProductResult:
    grammar: SCFG
    prob: Optional[PoE]
    snf_dag: Optional[ParseDAG] = None
    dag: Optional[ParseDAG] = None


def product_grammar(snf: SNFGrammar, w: Sequence[str]) -> Tuple[SCFG, List[int]]:
    """Intersection with the linear automaton of w; nonterminals are (s, A, s') with s <= s'.

    Returns the weighted grammar and, per product rule, the SNF rule it copies.
    """
    g = snf.grammar
    w = _as_tokens(w)
    n = len(w)
    rules = []
    origin: List[int] = []
    for r in g.rules:
        if len(r.right) == 2 and all(g.is_nonterminal(s) for s in r.right):
            left, right = r.right
            for s in range(n + 1):
                for s1 in range(s, n + 1):
                    for s2 in range(s1, n + 1):
                        rules.append(((s, r.left, s2), ((s, left, s1), (s1, right, s2)), r.prob))
                        origin.append(r.index)
        elif len(r.right) == 1 and g.is_nonterminal(r.right[0]):
            for s in range(n + 1):
                for s2 in range(s, n + 1):
                    rules.append(((s, r.left, s2), ((s, r.right[0], s2),), r.prob))
                    origin.append(r.index)
        elif len(r.right) == 1:
            for s in range(n):
                if w[s] == r.right[0]:
                    rules.append(((s, r.left, s + 1), (r.right[0],), r.prob))
                    origin.append(r.index)
        elif len(r.right) == 0:
            for s in range(n + 1):
                rules.append(((s, r.left, s), (), r.prob))
                origin.append(r.index)
        else:
            raise GrammarError(f"{r.where()}: the product construction needs a grammar in simple normal form")
    order = [(s, a, s2) for a in g.nonterminals for s in range(n + 1) for s2 in range(s, n + 1)]
    product = SCFG(rules, (0, g.start, n), nonterminals=order, terminals=set(w), check_proper=False)
    return product, origin


def product_construction(g: Union[SNFGrammar, SCFG], w: Sequence[str], weighting=None) -> ProductResult:
    snf = g if isinstance(g, SNFGrammar) else to_snf(g)
    weighting = weighting or ExactWeighting()
    h.logBeginTask("product construction")
    product, origin = product_grammar(snf, w)
    h.log(f"product grammar: {len(product.nonterminals)} nonterminals, {len(product.rules)} rules")
    result = knuth(product, weighting)
    h.logEndTask()
    root = product.start
    if root not in result.best:
        return ProductResult(product, None)
    builder = DagBuilder()
    nodes = _knuth_nodes(result, product, builder, label_of=lambda item: item[1], rule_ref=lambda r: origin[r.index])
    snf_dag = builder.build(nodes[root], snf.grammar)
    return ProductResult(product, result.best[root], snf_dag, snf.lower(snf_dag))


### approximation in the log domain ###

@dataclass
class ApproxParseResult:
    value: Optional["MPQ"]              # log2 of the probability, dyadic; None without a parse
    dag: Optional[ParseDAG]
    member: bool
    precision_bits: int
    snf_dag: Optional[ParseDAG] = None


def approx_precision(n: int, length: int, eps, guard_bits: int = None) -> int:
    guard = GlobalSettings.approx_guard_bits if guard_bits is None else guard_bits
    spread = max(2 * n, ceil_log2(exponent_sum_bound(n, length)))
    return spread + ceil_log2_rational(1 / MPQ(eps)) + guard


def rule_costs(g: SCFG, scale_bits: int) -> Dict[int, int]:
    """-ln p(r) per rule, rounded down to a multiple of 2^-scale_bits (within 2^(1-scale_bits))."""
    costs = {}
    for r in g.rules:
        if r.prob == MPQ_ONE:
            costs[r.index] = 0
            continue
        num, den = int(r.prob.numerator), int(r.prob.denominator)
        form = LinearForm((den, num), (1, -1)) if num > 1 else LinearForm((den,), (1,))
        v = linear_form_approx(form, scale_bits).value
        costs[r.index] = max(0, floor_q(v * (1 << scale_bits)))
    return costs


def approx_max_parse(g: SCFG, w: Sequence[str], eps, guard_bits: int = None,
                     debug_asserts: bool = None) -> ApproxParseResult:
    """log2 of the maximum parse probability within eps, in time polynomial in log(1/eps).

    Rule weights -ln p are approximated to k + 2 bits and the same pipeline
    runs with integer addition and native comparisons.
    """
    eps = MPQ(eps)
    if not (0 < eps < 1):
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    snf = g if isinstance(g, SNFGrammar) else to_snf(g)
    w = _as_tokens(w)
    k = approx_precision(len(snf.grammar.nonterminals), len(w), eps, guard_bits)
    scale = k + 2
    h.log(f"approximating rule weights to {scale} bits")
    weighting = TropicalWeighting(rule_costs(snf.grammar, scale), scale)
    result = _run_pipeline(snf, w, weighting, debug_asserts)
    if not result.member:
        return ApproxParseResult(None, None, False, k)
    cost = result.value
    if cost == 0:
        return ApproxParseResult(MPQ(0), result.dag, True, k, result.snf_dag)
    ln2 = ln2_approx(scale + int(cost).bit_length() + 4).value
    value = -MPQ(cost, 1 << scale) / ln2
    snap = scale + 2
    value = MPQ(floor_q(value * (1 << snap) + MPQ(1, 2)), 1 << snap)
    return ApproxParseResult(value, result.dag, True, k, result.snf_dag)


### decisions on maximum parse probabilities ###

def _no_parse(mode_name: str, ordering: Ordering) -> CompareOutcome:
    return CompareOutcome(ordering, Certificate("no-parse", params={"mode": mode_name}))


def _decision_weighting(mode, weighting):
    # the parse phase shares the precision cap of an adaptive comparison
    if weighting is not None:
        return weighting
    return ExactWeighting(mode.max_bits if isinstance(mode, Adaptive) else None)


def threshold_decision(g: SCFG, w: Sequence[str], q, mode=None, weighting=None) -> CompareOutcome:
    """Orders the maximum parse probability of w against a threshold (GREATER or EQUAL: at least q)."""
    mode = mode or Adaptive()
    threshold = q if isinstance(q, PoE) else PoE.from_rational(q)
    result = max_parse(g, w, _decision_weighting(mode, weighting))
    if result.prob is None:
        return _no_parse(mode.name, Ordering.LESS)
    return compare(result.prob, threshold, mode)


def compare_strings(g: SCFG, w1: Sequence[str], w2: Sequence[str], mode=None, weighting=None) -> CompareOutcome:
    """Orders the maximum parse probabilities of two strings; no parse sorts below every parse."""
    mode = mode or Adaptive()
    weighting = _decision_weighting(mode, weighting)
    snf = g if isinstance(g, SNFGrammar) else to_snf(g)
    p1 = max_parse(snf, w1, weighting).prob
    p2 = max_parse(snf, w2, weighting).prob
    if p1 is None and p2 is None:
        return _no_parse(mode.name, Ordering.EQUAL)
    if p1 is None:
        return _no_parse(mode.name, Ordering.LESS)
    if p2 is None:
        return _no_parse(mode.name, Ordering.GREATER)
    return compare(p1, p2, mode)
