import toolbox.helper as h
from core.compare import Certificate, CompareOutcome, Ordering, compare, create_mode
from core.equal_step import read_poe
from core.step import Step
from settings import CompareRegime, CompareSettings, OutputFormat
from toolbox.numeric import MPQ, format_dyadic, format_rational
from toolbox.textio import render_template

EXIT_RESOLVED = 0
EXIT_UNRESOLVED = 3


def _format_param(value) -> str:
    if isinstance(value, (int, str)):
        return str(value)
    return format_rational(MPQ(value))


def certificate_lines(outcome: CompareOutcome, verdict: str = None) -> dict:
    cert: Certificate = outcome.certificate
    lines = {"verdict": verdict or outcome.ordering.value, "mode": cert.mode, "bits": cert.precision_bits}
    if cert.gap_bits is not None:
        lines["gap"] = cert.gap_bits
    if cert.regime:
        lines["regime"] = cert.regime
    if cert.clamped:
        lines["clamped"] = "true"
    for key, value in cert.params.items():
        lines[f"param.{key}"] = _format_param(value)
    if cert.escalation:
        lines["precisions"] = ",".join(str(j) for j in cert.escalation)
    if cert.value is not None:
        lines["value"] = format_dyadic(cert.value)
    return lines


def render_certificate(outcome: CompareOutcome, verdict: str = None) -> str:
    params = {key: _format_param(value) for key, value in outcome.certificate.params.items()}
    return render_template("certificate", {
        "verdict": verdict or outcome.ordering.value,
        "certificate": outcome.certificate,
        "params": params,
    }).rstrip("\n")


def report(step: Step, outcome: CompareOutcome, verdict: str = None):
    if step.output_format == OutputFormat.LINES:
        step.emit_lines(certificate_lines(outcome, verdict))
    else:
        step.emit(render_certificate(outcome, verdict))


class CompareStep(Step):
    def __init__(self, compare_settings: CompareSettings, output_format: OutputFormat = OutputFormat.TEXT):
        super().__init__(output_format)
        self.compare_settings = compare_settings

    def run_step(self, params: dict) -> int:
        h.require_keys(params, ["lhs", "rhs"], "compare: missing operand:")
        x = read_poe(params["lhs"])
        y = read_poe(params["rhs"])
        mode = create_mode(self.compare_settings)
        if self.compare_settings.regime in (CompareRegime.LW, CompareRegime.ABC):
            h.majorInfo(f"using the conjectural '{mode.name}' bound with {mode.params()}")
        h.logBeginTask(f"comparing in {mode.name} mode")
        outcome = compare(x, y, mode)
        h.logEndTask()
        report(self, outcome)
        return EXIT_UNRESOLVED if outcome.ordering == Ordering.UNRESOLVED else EXIT_RESOLVED


def create_compare_step(compare_settings: CompareSettings, output_format: OutputFormat) -> Step:
    return CompareStep(compare_settings, output_format)
