import os
from dataclasses import dataclass
from enum import Enum

from toolbox.numeric import MPQ, to_rational
import toolbox.helper as h


class CompareRegime(Enum):
    ADAPTIVE = "adaptive"
    UNCONDITIONAL = "unconditional"
    BW = "bw"
    MATVEEV = "matveev"
    LW = "lw"
    ABC = "abc"


class ParseMethod(Enum):
    EXACT = "exact"
    APPROX = "approx"


class OutputFormat(Enum):
    TEXT = "text"
    LINES = "lines"


class GlobalSettings:
    template_directory = os.path.join(os.path.dirname(os.path.abspath(__file__)), "templates")

    # adaptive sign determination
    adaptive_start_bits: int = 64
    adaptive_max_bits: int = 2**20

    # gap regimes: refuse bounds above this many bits, escalate precision from adaptive_start_bits
    gap_cap_bits: int = 2**31
    gap_escalation: bool = True

    # conjectural constants, never applied unless the regime is selected explicitly
    lw_eps = MPQ(1)
    lw_c = MPQ(1)
    abc_k2 = MPQ(1)

    # parsing
    eval_bit_budget: int = 2**16
    yield_cap: int = 10**6
    approx_guard_bits: int = 2
    debug_asserts: bool = h.str_to_bool(os.getenv('POE_DEBUG_ASSERTS', '0'))


@dataclass
class CompareSettings:
    regime: CompareRegime
    eps: MPQ
    c_const: MPQ
    k2_const: MPQ
    max_bits: int
    cap_bits: int

    @staticmethod
    def from_dict(settings_template: dict):
        settings_template = settings_template or {}
        regime = settings_template.get('mode', CompareRegime.ADAPTIVE.value)
        h.require_allowed_value(regime, 'mode', [r.value for r in CompareRegime])
        eps = to_rational(settings_template.get('eps', GlobalSettings.lw_eps))
        c_const = to_rational(settings_template.get('c_const', GlobalSettings.lw_c))
        k2_const = to_rational(settings_template.get('k2_const', GlobalSettings.abc_k2))
        max_bits = h.str_to_int(settings_template.get('max_bits', GlobalSettings.adaptive_max_bits), 'max_bits')
        cap_bits = h.str_to_int(settings_template.get('cap_bits', GlobalSettings.gap_cap_bits), 'cap_bits')

        if eps <= 0:
            raise ValueError(f"eps must be positive, got {eps}")
        if c_const <= 0:
            raise ValueError(f"c_const must be positive, got {c_const}")
        if k2_const <= 0:
            raise ValueError(f"k2_const must be positive, got {k2_const}")
        if max_bits < 64:
            raise ValueError(f"max_bits must be at least 64, got {max_bits}")
        if cap_bits < 1:
            raise ValueError(f"cap_bits must be positive, got {cap_bits}")

        return CompareSettings(CompareRegime(regime), eps, c_const, k2_const, max_bits, cap_bits)


@dataclass
class ParseSettings:
    method: ParseMethod
    approx_eps: MPQ
    debug_asserts: bool
    yield_cap: int
    at_least: MPQ = None
    versus: str = None

    @staticmethod
    def from_dict(settings_template: dict):
        settings_template = settings_template or {}
        method = settings_template.get('method', ParseMethod.EXACT.value)
        h.require_allowed_value(method, 'method', [m.value for m in ParseMethod])
        approx_eps = to_rational(settings_template.get('eps', '1/100'))
        debug_asserts = h.str_to_bool(settings_template.get('debug_asserts', GlobalSettings.debug_asserts))
        yield_cap = h.str_to_int(settings_template.get('yield_cap', GlobalSettings.yield_cap), 'yield_cap')
        at_least = settings_template.get('at_least')
        versus = settings_template.get('versus')

        if method == ParseMethod.APPROX.value and not (0 < approx_eps < 1):
            raise ValueError(f"approximation eps must lie in (0, 1), got {approx_eps}")
        if at_least is not None:
            at_least = to_rational(at_least)
            if not (0 < at_least <= 1):
                raise ValueError(f"threshold must lie in (0, 1], got {at_least}")
        if yield_cap < 1:
            raise ValueError(f"yield_cap must be positive, got {yield_cap}")

        return ParseSettings(ParseMethod(method), approx_eps, debug_asserts, yield_cap, at_least,
                             None if versus is None else str(versus))


def apply_global_settings(global_settings: dict):
    """Overrides GlobalSettings class attributes from the 'global' section of a settings file."""
    if not global_settings:
        return
    for key, value in global_settings.items():
        if not hasattr(GlobalSettings, key) or key.startswith('_'):
            raise KeyError(f"unknown global setting '{key}'")
        current = getattr(GlobalSettings, key)
        if isinstance(current, bool):
            value = h.str_to_bool(value)
        elif isinstance(current, int):
            value = h.str_to_int(value, key)
        elif isinstance(current, str):
            value = str(value)
        else:
            value = to_rational(value)
        setattr(GlobalSettings, key, value)
        h.info(f"global setting {key} = {value}")
