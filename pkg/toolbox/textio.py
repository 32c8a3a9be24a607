import os
import sys

from jinja2 import Environment, FileSystemLoader, StrictUndefined

import toolbox.helper as h
from settings import GlobalSettings
from toolbox.numeric import approx_str, format_dyadic, format_rational

_env = None


def _environment() -> Environment:
    global _env
    if _env is None or _env.loader.searchpath != [GlobalSettings.template_directory]:
        _env = Environment(loader=FileSystemLoader(GlobalSettings.template_directory), undefined=StrictUndefined,
                           trim_blocks=True, lstrip_blocks=True, keep_trailing_newline=True)
        _env.filters["rational"] = format_rational
        _env.filters["dyadic"] = format_dyadic
        _env.filters["approx"] = approx_str
    return _env


def render_template(template_file_name: str, parameters: dict, override_parameters: dict = None) -> str:
    """Renders templates/<name>.txt.j2; keys of override_parameters replace those of parameters."""
    template_params = h.overrideParams(parameters, override_parameters)
    h.log(f"rendering template '{template_file_name}.txt.j2'", h.LOG_LEVEL_4_DEBUG)
    return _environment().get_template(f"{template_file_name}.txt.j2").render(**template_params)


def read_text(path: str) -> str:
    """Reads a file, '-' reads stdin."""
    if path == "-":
        return sys.stdin.read()
    h.log(f"reading '{path}'")
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def write_text(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    h.info(f"written '{path}'")
