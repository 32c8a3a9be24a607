import pytest

import toolbox.helper as h
from settings import (CompareRegime, CompareSettings, GlobalSettings, ParseMethod, ParseSettings,
                      apply_global_settings)


def test_compare_defaults():
    s = CompareSettings.from_dict(None)
    assert s.regime == CompareRegime.ADAPTIVE
    assert s.max_bits == GlobalSettings.adaptive_max_bits
    assert s.cap_bits == GlobalSettings.gap_cap_bits
    assert s.eps == 1 and s.c_const == 1 and s.k2_const == 1


def test_compare_values():
    s = CompareSettings.from_dict({"mode": "lw", "eps": "1/3", "c_const": 0.5, "max_bits": "2**12"})
    assert s.regime == CompareRegime.LW
    assert s.eps * 3 == 1
    assert s.c_const * 2 == 1
    assert s.max_bits == 4096


@pytest.mark.parametrize("values", [
    {"mode": "fast"},
    {"eps": 0},
    {"c_const": "-1"},
    {"k2_const": "0"},
    {"max_bits": 10},
    {"max_bits": "lots"},
    {"cap_bits": 0},
])
def test_compare_rejects(values):
    with pytest.raises(ValueError):
        CompareSettings.from_dict(values)


def test_parse_settings():
    s = ParseSettings.from_dict({})
    assert s.method == ParseMethod.EXACT
    assert s.at_least is None and s.versus is None
    s = ParseSettings.from_dict({"method": "approx", "eps": "1/1000", "at_least": "1/2", "versus": "a b"})
    assert s.method == ParseMethod.APPROX
    assert s.approx_eps * 1000 == 1
    assert s.at_least * 2 == 1
    assert s.versus == "a b"


@pytest.mark.parametrize("values", [
    {"method": "guess"},
    {"method": "approx", "eps": 1},
    {"at_least": 0},
    {"at_least": "3/2"},
    {"yield_cap": 0},
])
def test_parse_settings_reject(values):
    with pytest.raises(ValueError):
        ParseSettings.from_dict(values)


def test_apply_global_settings(monkeypatch):
    monkeypatch.setattr(GlobalSettings, "yield_cap", GlobalSettings.yield_cap)
    monkeypatch.setattr(GlobalSettings, "gap_escalation", GlobalSettings.gap_escalation)
    monkeypatch.setattr(GlobalSettings, "lw_eps", GlobalSettings.lw_eps)
    apply_global_settings({"yield_cap": "1000", "gap_escalation": "false", "lw_eps": "1/2"})
    assert GlobalSettings.yield_cap == 1000
    assert GlobalSettings.gap_escalation is False
    assert GlobalSettings.lw_eps * 2 == 1
    with pytest.raises(KeyError):
        apply_global_settings({"no_such_setting": 1})
    apply_global_settings(None)


def test_override_params():
    merged = h.overrideParams({"mode": "adaptive", "eps": "1"}, {"mode": "lw", "eps": None})
    assert merged == {"mode": "lw", "eps": "1"}
    with pytest.raises(KeyError):
        h.require_keys({"a": 1}, ["a", "b"])
    assert h.str_to_int("2**20") == 2**20
    assert h.str_to_bool("yes") and not h.str_to_bool("0")
