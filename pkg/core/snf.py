from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

import toolbox.helper as h
from core.grammar import SCFG, Rule, Symbol
from core.parse_dag import DagBuilder, Internal, Leaf, ParseDAG
from toolbox.numeric import MPQ_ONE

TYPE_L = "L"
TYPE_Q = "Q"
TYPE_T = "T"


@dataclass(frozen=True)
class Template:
    """Shape of an original rule inside the SNF grammar.

    rule is an SNF rule index; each child is either a nested Template
    (auxiliary nonterminal) or an int, the position of the original node's
    child that is placed there.
    """
    rule: int
    children: Tuple[Union["Template", int], ...]


class SNFGrammar:
    """Grammar in simple normal form plus the maps between original and SNF parse trees."""

    def __init__(self, grammar: SCFG, original: SCFG, types: Dict[Symbol, str],
                 templates: Tuple[Template, ...], auxiliary: frozenset):
        self.grammar = grammar
        self.original = original
        self.types = types
        self.templates = templates
        self.auxiliary = auxiliary
        # SNF rules whose left side is an original nonterminal start exactly one template
        self.origin: Dict[int, int] = {t.rule: k for k, t in enumerate(templates)}

    @property
    def start(self) -> Symbol:
        return self.grammar.start

    def lift(self, dag: ParseDAG) -> ParseDAG:
        """Maps a parse DAG of the original grammar to the corresponding SNF parse DAG."""
        builder = DagBuilder()
        mapped: List[int] = []
        for node in dag.nodes:
            if isinstance(node, Leaf):
                mapped.append(builder.leaf(node.label))
                continue
            children = [mapped[c] for c in node.children]
            mapped.append(self._instantiate(builder, self.templates[node.rule], children))
        return builder.build(mapped[dag.root], self.grammar)

    def _instantiate(self, builder: DagBuilder, template: Template, children: List[int]) -> int:
        refs = []
        for child in template.children:
            if isinstance(child, Template):
                refs.append(self._instantiate(builder, child, children))
            else:
                refs.append(children[child])
        rule = self.grammar.rules[template.rule]
        return builder.internal(rule.left, rule.index, refs)

    def lower(self, dag: ParseDAG) -> ParseDAG:
        """Maps an SNF parse DAG back to the parse DAG of the original grammar."""
        builder = DagBuilder()
        memo: Dict[int, int] = {}

        def lower_node(ref: int) -> int:
            if ref in memo:
                return memo[ref]
            node = dag.nodes[ref]
            if isinstance(node, Leaf):
                result = builder.leaf(node.label)
            else:
                if node.rule not in self.origin:
                    raise ValueError(f"SNF node n{ref} ({node.label}) does not start an original rule")
                k = self.origin[node.rule]
                holes: Dict[int, int] = {}
                self._match(dag, ref, self.templates[k], holes)
                children = [lower_node(holes[pos]) for pos in range(len(holes))]
                result = builder.internal(self.original.rules[k].left, k, children)
            memo[ref] = result
            return result

        # children come first in topological order, so lowering bottom-up never recurses deeply
        for ref, node in enumerate(dag.nodes):
            if isinstance(node, Leaf) or node.rule in self.origin:
                lower_node(ref)
        return builder.build(lower_node(dag.root), self.original)

    def _match(self, dag: ParseDAG, ref: int, template: Template, holes: Dict[int, int]):
        node = dag.nodes[ref]
        if not isinstance(node, Internal) or node.rule != template.rule:
            raise ValueError(f"SNF node n{ref} does not match the expected rule {template.rule}")
        for child_template, child_ref in zip(template.children, node.children):
            if isinstance(child_template, Template):
                self._match(dag, child_ref, child_template, holes)
            else:
                holes[child_template] = child_ref


class _SnfBuilder:

    def __init__(self, g: SCFG):
        self.g = g
        self.rules: List[Tuple[Symbol, Tuple[Symbol, ...], object]] = []
        self.types: Dict[Symbol, str] = {}
        self.aux: List[Symbol] = []
        self.names = set(str(nt) for nt in g.nonterminals) | set(str(t) for t in g.terminals)
        self.terminal_nts: Dict[Symbol, Symbol] = {}

    def fresh(self, base: str) -> str:
        name = base
        while name in self.names:
            name += "'"
        self.names.add(name)
        self.aux.append(name)
        return name

    def add(self, left: Symbol, right: Tuple[Symbol, ...], prob) -> int:
        self.rules.append((left, right, prob))
        return len(self.rules) - 1

    def slot(self, symbol: Symbol, position: int):
        """Nonterminal standing for a right-side symbol in a binary rule."""
        if self.g.is_nonterminal(symbol):
            return symbol, position
        if symbol not in self.terminal_nts:
            name = self.fresh(f"X_{symbol}")
            rule = self.add(name, (symbol,), MPQ_ONE)
            self.types[name] = TYPE_T
            self.terminal_nts[symbol] = (name, rule)
        name, rule = self.terminal_nts[symbol]
        return name, Template(rule, (position,))

    def body(self, r: Rule) -> Tuple[Symbol, Template]:
        """Auxiliary nonterminal deriving the right side of r with probability 1."""
        base = f"{r.left}_r{r.index}"
        if len(r.right) <= 1:
            name = self.fresh(base)
            rule = self.add(name, r.right, MPQ_ONE)
            self.types[name] = TYPE_T
            return name, Template(rule, (0,))
        return self.chain(base, r.right, 0)

    def chain(self, base: str, symbols: Tuple[Symbol, ...], offset: int) -> Tuple[Symbol, Template]:
        name = self.fresh(base if offset == 0 else f"{base}_{offset}")
        first, first_t = self.slot(symbols[0], offset)
        if len(symbols) == 2:
            second, second_t = self.slot(symbols[1], offset + 1)
        else:
            second, second_t = self.chain(base, symbols[1:], offset + 1)
        rule = self.add(name, (first, second), MPQ_ONE)
        self.types[name] = TYPE_Q
        return name, Template(rule, (first_t, second_t))


def _kept_type(g: SCFG, nt: Symbol) -> Optional[str]:
    rules = g.rules_for(nt)
    if all(len(r.right) == 1 and g.is_nonterminal(r.right[0]) for r in rules):
        return TYPE_L
    if len(rules) == 1 and rules[0].prob == MPQ_ONE:
        right = rules[0].right
        if len(right) == 2 and all(g.is_nonterminal(s) for s in right):
            return TYPE_Q
        if len(right) == 0 or (len(right) == 1 and g.is_terminal(right[0])):
            return TYPE_T
    return None


def to_snf(g: SCFG) -> SNFGrammar:
    """Converts an SCFG to simple normal form in linear time.

    Every nonterminal of the result has unit rules only (L), a single binary
    rule of probability 1 (Q) or a single terminal or empty rule of
    probability 1 (T). Nonterminals that already qualify are kept unchanged;
    any other A gets A ->p N for each non-unit rule, where the fresh N derives
    the old right side with probability 1.
    """
    builder = _SnfBuilder(g)
    kept = {nt: _kept_type(g, nt) for nt in g.nonterminals}
    templates: List[Optional[Template]] = [None] * len(g.rules)
    for nt in g.nonterminals:
        builder.types[nt] = kept[nt] or TYPE_L
    for r in g.rules:
        if kept[r.left] is not None or (len(r.right) == 1 and g.is_nonterminal(r.right[0])):
            rule = builder.add(r.left, r.right, r.prob)
            templates[r.index] = Template(rule, tuple(range(max(1, len(r.right)))))
            continue
        top = builder.add(r.left, (None,), r.prob)
        name, body = builder.body(r)
        builder.rules[top] = (r.left, (name,), r.prob)
        templates[r.index] = Template(top, (body,))
    snf = SCFG(builder.rules, g.start, nonterminals=list(g.nonterminals) + builder.aux, terminals=g.terminals)
    h.log(f"SNF conversion: {len(g.nonterminals)} -> {len(snf.nonterminals)} nonterminals, "
          f"{len(g.rules)} -> {len(snf.rules)} rules")
    return SNFGrammar(snf, g, builder.types, tuple(templates), frozenset(builder.aux))


def is_snf(g: SCFG) -> bool:
    return all(_kept_type(g, nt) is not None for nt in g.nonterminals)
