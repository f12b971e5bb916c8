"""
Affine interpretations of diagrams over the positive integers.

Every gate is sent to an affine map with natural coefficients; a diagram is
interpreted functorially. A rule set terminates when every lhs strictly
dominates its rhs in the product order on positive integer vectors.
"""
import logging
import re
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from diagrams.core import Diagram, GateKind
from diagrams.exceptions import DimensionMismatch, ParseError

logger = logging.getLogger(__name__)

VARIABLES = 'xyzuvw'


def variable_name(index: int, arity: int) -> str:
    if arity <= len(VARIABLES):
        return VARIABLES[index]
    return f'x{index + 1}'


@dataclass(frozen=True, eq=False)
class AffineMap:
    coeffs: np.ndarray
    consts: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.int64)
        consts = np.asarray(self.consts, dtype=np.int64).reshape(-1)
        if coeffs.ndim != 2 or coeffs.shape[0] != consts.shape[0]:
            raise DimensionMismatch(f'coefficient matrix {coeffs.shape} does not fit {consts.shape[0]} constants')
        object.__setattr__(self, 'coeffs', coeffs)
        object.__setattr__(self, 'consts', consts)

    @classmethod
    def identity(cls, n: int) -> 'AffineMap':
        return cls(np.eye(n, dtype=np.int64), np.zeros(n, dtype=np.int64))

    @property
    def in_dim(self) -> int:
        return self.coeffs.shape[1]

    @property
    def out_dim(self) -> int:
        return self.coeffs.shape[0]

    def then(self, other: 'AffineMap') -> 'AffineMap':
        """First self, then other."""
        if self.out_dim != other.in_dim:
            raise DimensionMismatch(f'cannot feed {self.out_dim} values into a map of {other.in_dim}')
        return AffineMap(other.coeffs @ self.coeffs, other.coeffs @ self.consts + other.consts)

    def direct_sum(self, other: 'AffineMap') -> 'AffineMap':
        coeffs = np.zeros((self.out_dim + other.out_dim, self.in_dim + other.in_dim), dtype=np.int64)
        coeffs[:self.out_dim, :self.in_dim] = self.coeffs
        coeffs[self.out_dim:, self.in_dim:] = other.coeffs
        return AffineMap(coeffs, np.concatenate([self.consts, other.consts]))

    def __call__(self, point) -> np.ndarray:
        return self.coeffs @ np.asarray(point, dtype=np.int64) + self.consts

    def __eq__(self, other):
        return (
            isinstance(other, AffineMap)
            and self.coeffs.shape == other.coeffs.shape
            and np.array_equal(self.coeffs, other.coeffs)
            and np.array_equal(self.consts, other.consts)
        )

    def __hash__(self):
        return hash((self.coeffs.shape, self.coeffs.tobytes(), self.consts.tobytes()))

    def component(self, row: int) -> str:
        terms = []
        for j, c in enumerate(self.coeffs[row]):
            if c:
                name = variable_name(j, self.in_dim)
                terms.append(name if c == 1 else f'{c}{name}')
        if self.consts[row] or not terms:
            terms.append(str(self.consts[row]))
        return '+'.join(terms)

    def __str__(self):
        parts = [self.component(i) for i in range(self.out_dim)]
        if len(parts) == 1:
            return parts[0]
        return '(' + ', '.join(parts) + ')'


DEFAULT_GATES = {
    GateKind.M: AffineMap(np.array([[2, 1]]), np.array([0])),
    GateKind.E: AffineMap(np.zeros((1, 0), dtype=np.int64), np.array([1])),
    GateKind.S: AffineMap(np.array([[1, 1], [1, 0]]), np.array([0, 0])),
}


@dataclass(frozen=True)
class Interpretation:
    gates: dict = field(default_factory=lambda: dict(DEFAULT_GATES), hash=False)

    def __post_init__(self):
        for kind, amap in self.gates.items():
            if (amap.in_dim, amap.out_dim) != (kind.inputs, kind.outputs):
                raise DimensionMismatch(
                    f'gate {kind.value} is {kind.inputs}->{kind.outputs}, '
                    f'its map is {amap.in_dim}->{amap.out_dim}'
                )
            if (amap.coeffs < 0).any() or (amap.consts < 0).any():
                raise ParseError(f'gate {kind.value} needs natural coefficients')
            if (amap(np.ones(amap.in_dim, dtype=np.int64)) < 1).any():
                raise ParseError(f'gate {kind.value} must send positive inputs to positive outputs')

    def __getitem__(self, kind: GateKind) -> AffineMap:
        return self.gates[kind]


def interpret_diagram(diagram: Diagram, interpretation: Interpretation | None = None) -> AffineMap:
    interpretation = interpretation or Interpretation()
    current = AffineMap.identity(diagram.inputs)
    for s in diagram.slices:
        layer = AffineMap.identity(s.left).direct_sum(interpretation[s.gate]).direct_sum(AffineMap.identity(s.right))
        current = current.then(layer)
    return current


def strictly_dominates(f: AffineMap, g: AffineMap) -> bool:
    """
    True when f(x) >= g(x) coordinatewise for every positive integer vector x,
    with at least one coordinate strictly greater.
    """
    if f.coeffs.shape != g.coeffs.shape:
        raise DimensionMismatch(f'maps {f.in_dim}->{f.out_dim} and {g.in_dim}->{g.out_dim} differ in shape')
    diff = f.coeffs - g.coeffs
    if (diff < 0).any():
        return False
    at_ones = diff.sum(axis=1) + (f.consts - g.consts)
    return bool((at_ones >= 0).all() and (at_ones >= 1).any())


def sample_soundness(f: AffineMap, g: AffineMap, rng: np.random.Generator, samples: int = 1000, high: int = 50) -> bool:
    """Check f > g on random positive points; used to test the symbolic decision."""
    points = rng.integers(1, high, size=(samples, f.in_dim))
    for point in points:
        fv, gv = f(point), g(point)
        if not ((fv >= gv).all() and (fv > gv).any()):
            return False
    return True


@dataclass(frozen=True)
class RuleVerdict:
    rule: str
    lhs: AffineMap
    rhs: AffineMap
    decreases: bool


@dataclass(frozen=True)
class TerminationReport:
    rule_set: str
    verdicts: tuple[RuleVerdict, ...]

    @property
    def passed(self) -> bool:
        return all(v.decreases for v in self.verdicts)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [(v.rule, str(v.lhs), str(v.rhs), v.decreases) for v in self.verdicts],
            columns=['rule', 'lhs', 'rhs', 'decreases'],
        )


def verify_termination(rules, interpretation: Interpretation | None = None) -> TerminationReport:
    interpretation = interpretation or Interpretation()
    verdicts = []
    for rule in rules:
        lhs = interpret_diagram(rule.lhs, interpretation)
        rhs = interpret_diagram(rule.rhs, interpretation)
        ok = strictly_dominates(lhs, rhs)
        if not ok:
            logger.info('rule %s does not decrease: %s vs %s', rule.name, lhs, rhs)
        verdicts.append(RuleVerdict(rule.name, lhs, rhs, ok))
    return TerminationReport(getattr(rules, 'name', 'custom'), tuple(verdicts))


# ----------------------
# interpretation tables
# ----------------------

TERM_RE = re.compile(r'^(\d*)\s*([a-z]\d*)?$')


def _parse_component(text: str, arity: int) -> tuple[list[int], int]:
    coeffs = [0] * arity
    const = 0
    names = [variable_name(i, arity) for i in range(arity)]
    for raw in text.split('+'):
        term = raw.strip()
        match = TERM_RE.match(term)
        if not term or not match or (not match.group(1) and not match.group(2)):
            raise ParseError(f'cannot read term {raw!r}; use natural numbers and variables')
        factor = int(match.group(1)) if match.group(1) else 1
        if match.group(2):
            if match.group(2) not in names:
                raise DimensionMismatch(f'variable {match.group(2)} is out of range for {arity} inputs')
            coeffs[names.index(match.group(2))] += factor
        else:
            const += factor
    return coeffs, const


def parse_interpretation(text: str) -> Interpretation:
    """Read lines such as `m: 2x+y`, `s: (x+y, x)`, `e: 1`; missing gates keep defaults."""
    gates = dict(DEFAULT_GATES)
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        name, sep, body = line.partition(':')
        if not sep or name.strip() not in {k.value for k in GateKind}:
            raise ParseError(f'line {number}: expected `<m|e|s>: <map>`')
        kind = GateKind(name.strip())
        body = body.strip()
        if body.startswith('(') and body.endswith(')'):
            body = body[1:-1]
        components = [c for c in body.split(',')]
        if len(components) != kind.outputs:
            raise DimensionMismatch(f'gate {kind.value} has {kind.outputs} outputs, got {len(components)} components')
        rows = [_parse_component(c, kind.inputs) for c in components]
        gates[kind] = AffineMap(
            np.array([r[0] for r in rows], dtype=np.int64).reshape(kind.outputs, kind.inputs),
            np.array([r[1] for r in rows], dtype=np.int64),
        )
    return Interpretation(gates)
