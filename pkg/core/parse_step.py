import shlex
from typing import Tuple

import toolbox.helper as h
from core.compare import Ordering, create_mode
from core.compare_step import report
from core.grammar import SCFG, load_grammar
from core.maxparse import (ExactWeighting, MaxParseResult, approx_max_parse, compare_strings, max_parse,
                           threshold_decision)
from core.parse_dag import DagError, ParseDAG, dag_lines, dag_yield, validate
from core.poe import format_poe
from core.snf import to_snf
from core.step import Step
from settings import CompareSettings, OutputFormat, ParseMethod, ParseSettings
from toolbox.numeric import approx_str, format_dyadic, format_rational
from toolbox.textio import render_template, write_text

EXIT_PARSED = 0
EXIT_NO_PARSE = 1
EXIT_UNRESOLVED = 3


def tokenize_input(text: str, g: SCFG) -> Tuple[str, ...]:
    """Whitespace-separated terminals, optionally quoted; a single token made of
    one-character terminals is read as a string of characters."""
    tokens = tuple(shlex.split(text))
    if len(tokens) == 1 and tokens[0] not in g.terminals and all(c in g.terminals for c in tokens[0]):
        return tuple(tokens[0])
    return tokens


def render_dag(dag: ParseDAG) -> str:
    return render_template("parse_dag", {
        "nodes": dag_lines(dag),
        "root": dag.root,
        "prob": format_poe(dag.prob),
    })


class ParseStep(Step):
    def __init__(self, parse_settings: ParseSettings, compare_settings: CompareSettings,
                 output_format: OutputFormat = OutputFormat.TEXT, dag_out: str = None):
        super().__init__(output_format)
        self.parse_settings = parse_settings
        self.compare_settings = compare_settings
        self.dag_out = dag_out

    def run_step(self, params: dict) -> int:
        h.require_keys(params, ["grammar", "string"], "parse: missing argument:")
        g = load_grammar(params["grammar"])
        h.info(f"grammar: {len(g.nonterminals)} nonterminals, {len(g.rules)} rules, size {g.size()}")
        w = tokenize_input(params["string"], g)
        h.info(f"input: {len(w)} tokens")

        if self.parse_settings.at_least is not None:
            return self._threshold(g, w)
        if self.parse_settings.versus is not None:
            return self._versus(g, w, tokenize_input(self.parse_settings.versus, g))
        if self.parse_settings.method == ParseMethod.APPROX:
            return self._approx(g, w)
        return self._exact(g, w)

    def _check(self, dag: ParseDAG, w: Tuple[str, ...]):
        if not self.parse_settings.debug_asserts:
            return
        validate(dag)
        if dag_yield(dag, self.parse_settings.yield_cap) != w:
            raise DagError("parse DAG does not yield the input string")

    def _write_dag(self, dag: ParseDAG):
        text = render_dag(dag)
        if self.dag_out:
            write_text(self.dag_out, text)
        elif self.output_format == OutputFormat.TEXT:
            self.emit(text.rstrip("\n"))

    def _no_parse(self) -> int:
        if self.output_format == OutputFormat.LINES:
            self.emit_lines({"verdict": "NO-PARSE"})
        else:
            self.emit("NO-PARSE")
        return EXIT_NO_PARSE

    def _exact(self, g: SCFG, w: Tuple[str, ...]) -> int:
        weighting = ExactWeighting(self.compare_settings.max_bits)
        h.logBeginTask("exact maximum parse")
        result: MaxParseResult = max_parse(to_snf(g), w, weighting, self.parse_settings.debug_asserts)
        h.logEndTask()
        h.info(f"{weighting.comparisons} certified comparisons")
        if result.prob is None:
            return self._no_parse()
        self._check(result.dag, w)
        if self.output_format == OutputFormat.LINES:
            self.emit_lines({"verdict": "PARSE", "prob": format_poe(result.prob),
                             "nodes": len(result.dag.nodes), "snf-nodes": len(result.snf_dag.nodes)})
        else:
            self.emit(f"prob = {format_poe(result.prob)}")
        self._write_dag(result.dag)
        return EXIT_PARSED

    def _approx(self, g: SCFG, w: Tuple[str, ...]) -> int:
        eps = self.parse_settings.approx_eps
        h.logBeginTask(f"approximate maximum parse, eps = {format_rational(eps)}")
        result = approx_max_parse(g, w, eps, debug_asserts=self.parse_settings.debug_asserts)
        h.logEndTask()
        if not result.member:
            return self._no_parse()
        self._check(result.dag, w)
        if self.output_format == OutputFormat.LINES:
            self.emit_lines({"verdict": "PARSE", "log2prob": format_dyadic(result.value),
                             "eps": format_rational(eps), "bits": result.precision_bits})
        else:
            self.emit(f"log2 prob = {format_dyadic(result.value)} (~ {approx_str(result.value)}, "
                      f"within {format_rational(eps)}, {result.precision_bits} bits)")
        self._write_dag(result.dag)
        return EXIT_PARSED

    def _threshold(self, g: SCFG, w: Tuple[str, ...]) -> int:
        q = self.parse_settings.at_least
        outcome = threshold_decision(g, w, q, create_mode(self.compare_settings),
                                     ExactWeighting(self.compare_settings.max_bits))
        if outcome.ordering == Ordering.UNRESOLVED:
            report(self, outcome)
            return EXIT_UNRESOLVED
        at_least = outcome.ordering in (Ordering.GREATER, Ordering.EQUAL)
        report(self, outcome, "AT-LEAST" if at_least else "BELOW")
        return EXIT_PARSED if at_least else EXIT_NO_PARSE

    def _versus(self, g: SCFG, w: Tuple[str, ...], w2: Tuple[str, ...]) -> int:
        outcome = compare_strings(g, w, w2, create_mode(self.compare_settings),
                                  ExactWeighting(self.compare_settings.max_bits))
        report(self, outcome)
        return EXIT_UNRESOLVED if outcome.ordering == Ordering.UNRESOLVED else EXIT_PARSED


def create_parse_step(parse_settings: ParseSettings, compare_settings: CompareSettings,
                      output_format: OutputFormat, dag_out: str = None) -> Step:
    return ParseStep(parse_settings, compare_settings, output_format, dag_out)
