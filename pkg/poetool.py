import argparse
import sys
from typing import List

import yaml

import toolbox.helper as h
from core.circuit import CircuitError
from core.compare import ComparisonUnresolved
from core.compare_step import create_compare_step
from core.convert_step import create_convert_step
from core.equal_step import create_equal_step
from core.grammar import GrammarError
from core.logform import OverflowGuard
from core.maxparse import ExponentBoundViolation
from core.parse_dag import DagError, YieldTooLong
from core.parse_step import create_parse_step
from core.poe import BudgetExceeded, PoESyntaxError
from core.step import Step
from settings import CompareSettings, OutputFormat, ParseSettings, apply_global_settings

EXIT_INPUT_ERROR = 2
EXIT_UNRESOLVED = 3
EXIT_OVERFLOW = 4


def _add_common(p: argparse.ArgumentParser):
    p.add_argument('--settings', type=argparse.FileType('r', encoding='utf-8'),
                   help='YAML settings file with optional "global", "compare" and "parse" sections')
    p.add_argument('--format', choices=[f.value for f in OutputFormat], default=None,
                   help='text (default) or machine-readable "tag: value" lines')
    p.add_argument('--loglevel', nargs=1, choices=["1", "2", "3", "4"],
                   help="Sets the level of debug outputs on stderr: 1=MajorInfo, 2=Info, 3=Detailed, 4=Debug")


def _add_compare_flags(p: argparse.ArgumentParser):
    p.add_argument('--mode', choices=['adaptive', 'unconditional', 'bw', 'matveev', 'lw', 'abc'],
                   help='sign determination regime; lw and abc rely on conjectures and need explicit constants')
    p.add_argument('--eps', help='epsilon of the Lang-Waldschmidt bound')
    p.add_argument('--c-const', help="constant C of the Lang-Waldschmidt bound")
    p.add_argument('--k2-const', help="constant K'' of the abc-based bound")
    p.add_argument('--max-bits', help='precision cap of adaptive mode, e.g. 2**20')
    p.add_argument('--cap-bits', help='largest gap (in bits) the gap regimes may use')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='poetool',
                                     description='Exact arithmetic on products of exponentials and '
                                                 'maximum-probability parsing of stochastic grammars.')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('equal', help='decide whether two PoE numbers are equal (exit 0 EQUAL, 1 NOT-EQUAL)')
    p.add_argument('lhs', help='PoE expression such as "2^6 * 3^3", or @file')
    p.add_argument('rhs')
    _add_common(p)

    p = sub.add_parser('compare', help='order two PoE numbers (exit 0 resolved, 3 UNRESOLVED, 4 gap too large)')
    p.add_argument('lhs')
    p.add_argument('rhs')
    _add_compare_flags(p)
    _add_common(p)

    p = sub.add_parser('parse', help='maximum parse probability of a string (exit 1 NO-PARSE)')
    p.add_argument('grammar', help='grammar file')
    p.add_argument('string', help='input string: space-separated (optionally quoted) terminals')
    method = p.add_mutually_exclusive_group()
    method.add_argument('--exact', action='store_true', help='exact PoE answer (default)')
    method.add_argument('--approx', metavar='EPS', help='log2 of the answer within EPS, e.g. 1/100')
    p.add_argument('--at-least', metavar='Q', help='only decide whether the maximum probability is at least Q')
    p.add_argument('--versus', metavar='STRING', help='only order the maximum probabilities of both strings')
    p.add_argument('--dag-out', metavar='PATH', help='write the parse DAG to PATH instead of stdout')
    p.add_argument('--debug-asserts', action='store_true', default=None,
                   help='validate the DAG and check the exponent-sum bound')
    _add_compare_flags(p)
    _add_common(p)

    p = sub.add_parser('convert', help='convert between arithmetic circuits and PoE form')
    direction = p.add_mutually_exclusive_group(required=True)
    direction.add_argument('--circuit-to-poe', action='store_const', dest='direction', const='circuit-to-poe')
    direction.add_argument('--poe-to-circuit', action='store_const', dest='direction', const='poe-to-circuit')
    p.add_argument('path', help="input file, '-' for stdin")
    _add_common(p)
    return parser


def _compare_overrides(args) -> dict:
    return {
        'mode': getattr(args, 'mode', None),
        'eps': getattr(args, 'eps', None),
        'c_const': getattr(args, 'c_const', None),
        'k2_const': getattr(args, 'k2_const', None),
        'max_bits': getattr(args, 'max_bits', None),
        'cap_bits': getattr(args, 'cap_bits', None),
    }


def _parse_overrides(args) -> dict:
    method = None
    if args.approx is not None:
        method = 'approx'
    elif args.exact:
        method = 'exact'
    return {
        'method': method,
        'eps': args.approx,
        'at_least': args.at_least,
        'versus': args.versus,
        'debug_asserts': args.debug_asserts,
    }


def create_step(args, settings: dict) -> Step:
    format_value = args.format or settings.get('format', OutputFormat.TEXT.value)
    h.require_allowed_value(format_value, 'format', [f.value for f in OutputFormat])
    output_format = OutputFormat(format_value)
    if args.command == 'equal':
        return create_equal_step(output_format)
    if args.command == 'convert':
        return create_convert_step(args.direction, output_format)
    compare_settings = CompareSettings.from_dict(h.overrideParams(settings.get('compare') or {},
                                                                  _compare_overrides(args)))
    if args.command == 'compare':
        return create_compare_step(compare_settings, output_format)
    if args.command == 'parse':
        parse_settings = ParseSettings.from_dict(h.overrideParams(settings.get('parse') or {}, _parse_overrides(args)))
        return create_parse_step(parse_settings, compare_settings, output_format, args.dag_out)
    raise NotImplementedError(f"command '{args.command}' not implemented")


def step_params(args) -> dict:
    if args.command in ('equal', 'compare'):
        return {'lhs': args.lhs, 'rhs': args.rhs}
    if args.command == 'parse':
        return {'grammar': args.grammar, 'string': args.string}
    return {'path': args.path}


def main(argv: List[str] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.loglevel:
        h.verbose_level = int(args.loglevel[0])
        h.majorInfo(f"using log level {h.verbose_level}")
    h.start_session()

    try:
        settings: dict = {}
        if args.settings:
            with args.settings:
                h.info(f'loading {args.settings.name}')
                settings = yaml.safe_load(args.settings) or {}
            if not isinstance(settings, dict):
                raise ValueError("settings file must contain a mapping")
            apply_global_settings(settings.get('global'))
        step = create_step(args, settings)
        return step.run_step(step_params(args))
    except OverflowGuard as e:
        h.majorInfo(f"error: {e}")
        h.majorInfo("the selected bound needs too many bits; use --mode adaptive for this input")
        return EXIT_OVERFLOW
    except ComparisonUnresolved as e:
        h.majorInfo(f"unresolved: {e}")
        h.majorInfo("raise --max-bits to allow more precision")
        return EXIT_UNRESOLVED
    except (ExponentBoundViolation, DagError) as e:
        h.majorInfo(f"internal check failed: {e}")
        return EXIT_INPUT_ERROR
    except (PoESyntaxError, GrammarError, CircuitError, BudgetExceeded, YieldTooLong,
            ValueError, KeyError, OSError, yaml.YAMLError) as e:
        h.majorInfo(f"error: {e}")
        return EXIT_INPUT_ERROR


if __name__ == '__main__':
    sys.exit(main())
