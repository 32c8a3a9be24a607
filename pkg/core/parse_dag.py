from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Sequence, Tuple, Union

import igraph as ig

import toolbox.helper as h
from core.grammar import EPSILON, SCFG
from core.poe import PoE, eval_exact, mul, normalize


class DagError(Exception):
    pass


class YieldTooLong(Exception):
    pass


@dataclass(frozen=True)
class Leaf:
    label: str      # terminal, or '' for the empty string


@dataclass(frozen=True)
class Internal:
    label: Hashable
    rule: int
    children: Tuple[int, ...]


Node = Union[Leaf, Internal]


@dataclass(frozen=True)
class ParseDAG:
    """Ordered DAG sharing repeated subtrees of a parse tree.

    Nodes are topologically ordered (children before parents) and the
    root is the only node without parents.
    """
    nodes: Tuple[Node, ...]
    root: int
    prob: PoE
    grammar: SCFG = field(compare=False, repr=False)

    def internal_count(self) -> int:
        return sum(1 for n in self.nodes if isinstance(n, Internal))


class DagBuilder:
    """Hash-consing node store; build() extracts the part reachable from a root."""

    def __init__(self):
        self._nodes: List[Node] = []
        self._index: Dict[Node, int] = {}

    def _add(self, node: Node) -> int:
        ref = self._index.get(node)
        if ref is None:
            ref = len(self._nodes)
            self._nodes.append(node)
            self._index[node] = ref
        return ref

    def leaf(self, label: str) -> int:
        return self._add(Leaf(label))

    def internal(self, label: Hashable, rule: int, children: Sequence[int]) -> int:
        if any(c >= len(self._nodes) for c in children):
            raise DagError("children must be created before their parent")
        return self._add(Internal(label, rule, tuple(children)))

    def node(self, ref: int) -> Node:
        return self._nodes[ref]

    def build(self, root: int, grammar: SCFG) -> ParseDAG:
        keep = [False] * (root + 1)
        keep[root] = True
        for ref in range(root, -1, -1):
            node = self._nodes[ref]
            if keep[ref] and isinstance(node, Internal):
                for c in node.children:
                    keep[c] = True
        renumber: Dict[int, int] = {}
        nodes: List[Node] = []
        for ref in range(root + 1):
            if not keep[ref]:
                continue
            node = self._nodes[ref]
            if isinstance(node, Internal):
                node = Internal(node.label, node.rule, tuple(renumber[c] for c in node.children))
            renumber[ref] = len(nodes)
            nodes.append(node)
        counts = rule_multiplicities(nodes, len(nodes) - 1)
        prob = prob_from_multiplicities(counts, grammar)
        return ParseDAG(tuple(nodes), len(nodes) - 1, prob, grammar)


def node_multiplicities(nodes: Sequence[Node], root: int) -> List[int]:
    """How often each node occurs in the unfolded tree."""
    counts = [0] * len(nodes)
    counts[root] = 1
    for ref in range(root, -1, -1):
        node = nodes[ref]
        if counts[ref] and isinstance(node, Internal):
            for c in node.children:
                counts[c] += counts[ref]
    return counts


def rule_multiplicities(nodes: Sequence[Node], root: int) -> Dict[int, int]:
    counts = node_multiplicities(nodes, root)
    rules: Dict[int, int] = {}
    for ref, node in enumerate(nodes):
        if isinstance(node, Internal) and counts[ref]:
            rules[node.rule] = rules.get(node.rule, 0) + counts[ref]
    return rules


def prob_from_multiplicities(counts: Dict[int, int], grammar: SCFG) -> PoE:
    bases, exps = [], []
    for rule, count in counts.items():
        weight = grammar.rules[rule].weight
        bases.extend(weight.bases)
        exps.extend(e * count for e in weight.exponents)
    return normalize(PoE(tuple(bases), tuple(exps)))


def subdag_probs(d: ParseDAG) -> List[PoE]:
    """Probability of every subDAG, bottom-up: rule probability times the children's."""
    probs: List[PoE] = []
    for node in d.nodes:
        if isinstance(node, Leaf):
            probs.append(PoE.one())
            continue
        p = d.grammar.rules[node.rule].weight
        for c in node.children:
            p = mul(p, probs[c])
        probs.append(p)
    return probs


def dag_unfold_prob(d: ParseDAG, bit_budget: int):
    """Exact probability of the unfolded parse tree; BudgetExceeded when it does not fit."""
    return eval_exact(subdag_probs(d)[d.root], bit_budget)


def dag_yield(d: ParseDAG, cap: int = 10**6) -> Tuple[str, ...]:
    yields: List[Tuple[str, ...]] = []
    for ref, node in enumerate(d.nodes):
        if isinstance(node, Leaf):
            yields.append(() if node.label == EPSILON else (node.label,))
            continue
        y: Tuple[str, ...] = ()
        for c in node.children:
            y += yields[c]
            if len(y) > cap:
                raise YieldTooLong(f"yield of node n{ref} exceeds {cap} symbols")
        yields.append(y)
    return yields[d.root]


def validate(d: ParseDAG):
    """Raises DagError unless d is a single-source ordered DAG whose nodes match their rules."""
    g = d.grammar
    edges = []
    for ref, node in enumerate(d.nodes):
        if isinstance(node, Leaf):
            if node.label != EPSILON and not g.is_terminal(node.label):
                raise DagError(f"n{ref}: leaf '{node.label}' is not a terminal")
            continue
        if not 0 <= node.rule < len(g.rules):
            raise DagError(f"n{ref}: rule {node.rule} does not exist")
        rule = g.rules[node.rule]
        if rule.left != node.label:
            raise DagError(f"n{ref}: label {node.label} does not match rule {node.rule} ({rule.left})")
        labels = []
        for c in node.children:
            if not 0 <= c < len(d.nodes):
                raise DagError(f"n{ref}: child n{c} does not exist")
            edges.append((ref, c))
            labels.append(d.nodes[c].label)
        if rule.is_epsilon():
            if labels != [EPSILON]:
                raise DagError(f"n{ref}: empty rule {node.rule} needs a single empty leaf")
        elif tuple(labels) != rule.right:
            raise DagError(f"n{ref}: children {labels} do not spell the right side of rule {node.rule}")

    graph = ig.Graph(n=len(d.nodes), edges=edges, directed=True)
    if not graph.is_dag():
        raise DagError("parse DAG has a cycle")
    sources = [v for v, deg in enumerate(graph.indegree()) if deg == 0]
    if sources != [d.root]:
        raise DagError(f"parse DAG must have the root n{d.root} as its only source, found {sources}")
    if any(c >= ref for ref, c in edges):
        raise DagError("nodes are not in topological order")
    h.log(f"parse DAG with {len(d.nodes)} nodes validated", h.LOG_LEVEL_4_DEBUG)


### text format ###

def _label(node: Node) -> str:
    return f"'{node.label}'" if isinstance(node, Leaf) else str(node.label)


def dag_lines(d: ParseDAG) -> List[str]:
    lines = []
    for ref, node in enumerate(d.nodes):
        if isinstance(node, Leaf):
            lines.append(f"n{ref} := Leaf {_label(node)}")
        else:
            children = ", ".join(f"n{c}" for c in node.children)
            lines.append(f"n{ref} := {node.label} [rule {node.rule}] ({children})")
    return lines


def unfold(d: ParseDAG, ref: int = None, limit: int = 10**5):
    """Nested tuple form of the parse tree (label, rule, children); leaves are their label string."""
    memo: Dict[int, object] = {}
    ref = d.root if ref is None else ref
    if sum(node_multiplicities(d.nodes, d.root)) > limit:
        raise YieldTooLong(f"unfolded tree has more than {limit} nodes")
    for k, node in enumerate(d.nodes[:ref + 1]):
        if isinstance(node, Leaf):
            memo[k] = node.label
        else:
            memo[k] = (node.label, node.rule, tuple(memo[c] for c in node.children))
    return memo[ref]
