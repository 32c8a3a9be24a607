import re
from dataclasses import dataclass
from typing import Dict, List, Tuple, Union

from core.poe import PoE, eval_exact, normalize


class CircuitError(Exception):
    pass


@dataclass(frozen=True)
class InputGate:
    value: int


@dataclass(frozen=True)
class MulGate:
    left: int
    right: int


@dataclass(frozen=True)
class DivGate:
    left: int
    right: int


Gate = Union[InputGate, MulGate, DivGate]


@dataclass(frozen=True)
class ArithmeticCircuit:
    """{*, /} circuit with positive integer inputs; gates only reference earlier gates."""
    gates: Tuple[Gate, ...]
    output: int

    def __post_init__(self):
        if len(self.gates) == 0:
            raise CircuitError("circuit has no gates")
        for k, gate in enumerate(self.gates):
            if isinstance(gate, InputGate):
                if gate.value < 1:
                    raise CircuitError(f"g{k}: inputs must be positive integers, got {gate.value}")
            elif isinstance(gate, (MulGate, DivGate)):
                if not (0 <= gate.left < k and 0 <= gate.right < k):
                    raise CircuitError(f"g{k}: operands must reference earlier gates")
            else:
                raise CircuitError(f"g{k}: unknown gate {gate!r}")
        if not 0 <= self.output < len(self.gates):
            raise CircuitError(f"output g{self.output} does not exist")

    def depth(self) -> int:
        depths: List[int] = []
        for gate in self.gates:
            if isinstance(gate, InputGate):
                depths.append(0)
            else:
                depths.append(1 + max(depths[gate.left], depths[gate.right]))
        return depths[self.output]


def from_circuit(c: ArithmeticCircuit) -> PoE:
    """Takes in a circuit and returns the PoE over its input values (exponents add up gate by gate)."""
    vectors: List[Dict[int, int]] = []
    needed = _reachable(c)
    for k, gate in enumerate(c.gates):
        if k not in needed:
            vectors.append({})
            continue
        if isinstance(gate, InputGate):
            vectors.append({gate.value: 1} if gate.value != 1 else {})
            continue
        sign = 1 if isinstance(gate, MulGate) else -1
        vec = dict(vectors[gate.left])
        for base, exp in vectors[gate.right].items():
            vec[base] = vec.get(base, 0) + sign * exp
        vectors.append({b: e for b, e in vec.items() if e != 0})
    out = vectors[c.output]
    return normalize(PoE(tuple(out.keys()), tuple(out.values())))


def _reachable(c: ArithmeticCircuit) -> set:
    seen = {c.output}
    for k in range(c.output, -1, -1):
        gate = c.gates[k]
        if k in seen and not isinstance(gate, InputGate):
            seen.add(gate.left)
            seen.add(gate.right)
    return seen


class _CircuitBuilder:

    def __init__(self):
        self.gates: List[Gate] = []
        self._inputs: Dict[int, int] = {}

    def add(self, gate: Gate) -> int:
        self.gates.append(gate)
        return len(self.gates) - 1

    def input(self, value: int) -> int:
        if value not in self._inputs:
            self._inputs[value] = self.add(InputGate(value))
        return self._inputs[value]

    def power(self, base: int, exp: int) -> int:
        # square-and-multiply over the bits of exp, most significant first
        g = self.input(base)
        x = g
        for bit in bin(exp)[3:]:
            x = self.add(MulGate(x, x))
            if bit == "1":
                x = self.add(MulGate(x, g))
        return x

    def product(self, refs: List[int]) -> int:
        acc = refs[0]
        for r in refs[1:]:
            acc = self.add(MulGate(acc, r))
        return acc


def to_circuit(x: PoE) -> ArithmeticCircuit:
    x = normalize(x)
    builder = _CircuitBuilder()
    if x.is_one():
        return ArithmeticCircuit((InputGate(1),), 0)
    num = [builder.power(b, e) for b, e in x.pairs() if e > 0]
    den = [builder.power(b, -e) for b, e in x.pairs() if e < 0]
    top = builder.product(num) if num else builder.input(1)
    if not den:
        return ArithmeticCircuit(tuple(builder.gates), top)
    out = builder.add(DivGate(top, builder.product(den)))
    return ArithmeticCircuit(tuple(builder.gates), out)


def evaluate(c: ArithmeticCircuit, bit_budget: int):
    """Exact value of the circuit output (via its PoE, so huge intermediate values are never built)."""
    return eval_exact(from_circuit(c), bit_budget)


### text format ###
# g0 = input 7
# g1 = mul g0 g0
# g2 = div g1 g0
# output g2

_GATE_LINE = re.compile(r"g(\d+)\s*=\s*(?:input\s+(\d+)|(mul|div)\s+g(\d+)\s+g(\d+))")
_OUTPUT_LINE = re.compile(r"output\s+g(\d+)")


def parse_circuit(text: str) -> ArithmeticCircuit:
    gates: List[Gate] = []
    output = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if output is not None:
            raise CircuitError(f"line {number}: unexpected content after the output line: '{line}'")
        m = _OUTPUT_LINE.fullmatch(line)
        if m:
            output = int(m.group(1))
            continue
        m = _GATE_LINE.fullmatch(line)
        if not m:
            raise CircuitError(f"line {number}: cannot parse gate definition '{line}'")
        index = int(m.group(1))
        if index != len(gates):
            raise CircuitError(f"line {number}: expected gate g{len(gates)}, found g{index}")
        if m.group(2) is not None:
            gates.append(InputGate(int(m.group(2))))
        else:
            left, right = int(m.group(4)), int(m.group(5))
            if left >= index or right >= index:
                raise CircuitError(f"line {number}: g{index} references a later gate")
            gates.append(MulGate(left, right) if m.group(3) == "mul" else DivGate(left, right))
    if output is None:
        raise CircuitError("missing 'output' line")
    try:
        return ArithmeticCircuit(tuple(gates), output)
    except CircuitError as e:
        raise CircuitError(f"invalid circuit: {e}")


def format_circuit(c: ArithmeticCircuit) -> str:
    lines = []
    for k, gate in enumerate(c.gates):
        if isinstance(gate, InputGate):
            lines.append(f"g{k} = input {gate.value}")
        elif isinstance(gate, MulGate):
            lines.append(f"g{k} = mul g{gate.left} g{gate.right}")
        else:
            lines.append(f"g{k} = div g{gate.left} g{gate.right}")
    lines.append(f"output g{c.output}")
    return "\n".join(lines) + "\n"
