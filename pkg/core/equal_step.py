import toolbox.helper as h
from core.poe import PoE, equals, parse_poe
from core.step import Step
from settings import OutputFormat
from toolbox.textio import read_text

EXIT_EQUAL = 0
EXIT_NOT_EQUAL = 1


def read_poe(arg: str) -> PoE:
    """PoE literal, or the contents of a file when the argument starts with '@'."""
    if arg.startswith("@"):
        return parse_poe(read_text(arg[1:]))
    return parse_poe(arg)


class EqualStep(Step):
    def run_step(self, params: dict) -> int:
        h.require_keys(params, ["lhs", "rhs"], "equal: missing operand:")
        x = read_poe(params["lhs"])
        y = read_poe(params["rhs"])
        h.info(f"testing {x} == {y}")
        h.logBeginTask("factor refinement")
        verdict = "EQUAL" if equals(x, y) else "NOT-EQUAL"
        h.logEndTask()
        if self.output_format == OutputFormat.LINES:
            self.emit_lines({"verdict": verdict})
        else:
            self.emit(verdict)
        return EXIT_EQUAL if verdict == "EQUAL" else EXIT_NOT_EQUAL


def create_equal_step(output_format: OutputFormat) -> Step:
    return EqualStep(output_format)
