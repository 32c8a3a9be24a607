import toolbox.helper as h
from core.circuit import from_circuit, format_circuit, parse_circuit, to_circuit
from core.poe import format_poe, parse_poe
from core.step import Step
from settings import OutputFormat
from toolbox.textio import read_text


class CircuitToPoE(Step):
    def run_step(self, params: dict) -> int:
        h.require_keys(params, ["path"], "convert: missing input:")
        circuit = parse_circuit(read_text(params["path"]))
        h.info(f"circuit with {len(circuit.gates)} gates, depth {circuit.depth()}")
        x = from_circuit(circuit)
        if self.output_format == OutputFormat.LINES:
            self.emit_lines({"poe": format_poe(x), "factors": len(x.bases)})
        else:
            self.emit(format_poe(x))
        return 0


class PoEToCircuit(Step):
    def run_step(self, params: dict) -> int:
        h.require_keys(params, ["path"], "convert: missing input:")
        x = parse_poe(read_text(params["path"]))
        circuit = to_circuit(x)
        h.info(f"{len(x.bases)} factors -> {len(circuit.gates)} gates")
        self.emit(format_circuit(circuit).rstrip("\n"))
        return 0


def create_convert_step(direction: str, output_format: OutputFormat) -> Step:
    if direction == "circuit-to-poe":
        return CircuitToPoE(output_format)
    if direction == "poe-to-circuit":
        return PoEToCircuit(output_format)
    raise NotImplementedError(f"conversion '{direction}' not implemented")
