"""
Rewriting rules and rule sets.

Rule files hold one rule per line, `NAME [structural] : <lhs> => <rhs>`, with
`#` comments. The built-in sets M, F and GM live in `rulesets/`.
"""
import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from diagrams.core import Diagram, port_graph
from diagrams.exceptions import ArityMismatch, MalformedDiagram, ParseError
from diagrams.parser import parse_diagram

logger = logging.getLogger(__name__)

RULESETS_DIR = Path(__file__).resolve().parent / 'rulesets'
BUILTIN_SETS = ('M', 'F', 'GM')

RULE_LINE_RE = re.compile(r'^(?P<name>[A-Za-z_][\w\-]*)(?P<structural>\s+structural)?\s*:\s*(?P<lhs>.+?)\s*=>\s*(?P<rhs>.+)$')


@dataclass(frozen=True)
class Rule:
    name: str
    lhs: Diagram
    rhs: Diagram
    structural: bool = False

    def __post_init__(self):
        if (self.lhs.inputs, self.lhs.outputs) != (self.rhs.inputs, self.rhs.outputs):
            raise ArityMismatch(f'rule {self.name}: lhs and rhs have different arities')
        if self.lhs.is_identity:
            raise MalformedDiagram(f'rule {self.name}: lhs has no gates')
        if not _connected(self.lhs):
            raise MalformedDiagram(f'rule {self.name}: lhs must be connected')

    def __str__(self):
        return f'{self.name} : {self.lhs} => {self.rhs}'


def _connected(diagram: Diagram) -> bool:
    graph = port_graph(diagram)
    seen = {0}
    stack = [0]
    while stack:
        for h in graph.neighbours(stack.pop()):
            if h not in seen:
                seen.add(h)
                stack.append(h)
    return len(seen) == diagram.gate_count


@dataclass(frozen=True)
class RuleSet:
    name: str
    rules: tuple[Rule, ...]

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def __contains__(self, name):
        return any(rule.name == name for rule in self.rules)

    def get(self, name: str) -> Rule:
        for rule in self.rules:
            if rule.name == name:
                return rule
        raise KeyError(name)

    def index(self, rule: Rule) -> int:
        return self.rules.index(rule)

    def structural(self) -> 'RuleSet':
        return RuleSet(f'{self.name}-structural', tuple(r for r in self.rules if r.structural))

    @property
    def max_lhs_gates(self) -> int:
        return max((r.lhs.gate_count for r in self.rules), default=0)


def parse_rules(text: str, name: str = 'custom') -> RuleSet:
    rules = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        match = RULE_LINE_RE.match(line)
        if not match:
            raise ParseError(f'line {number}: expected `NAME [structural] : <lhs> => <rhs>`')
        rules.append(Rule(
            name=match.group('name'),
            lhs=parse_diagram(match.group('lhs')),
            rhs=parse_diagram(match.group('rhs')),
            structural=bool(match.group('structural')),
        ))
    names = [r.name for r in rules]
    if len(set(names)) != len(names):
        raise ParseError('rule names must be unique')
    logger.debug('parsed %d rules into set %s', len(rules), name)
    return RuleSet(name, tuple(rules))


def load_rules(path) -> RuleSet:
    path = Path(path)
    return parse_rules(path.read_text(encoding='utf-8'), name=path.stem)


@lru_cache(maxsize=None)
def builtin_rule_set(name: str) -> RuleSet:
    if name not in BUILTIN_SETS:
        raise KeyError(f'unknown rule set {name!r}; choose one of {", ".join(BUILTIN_SETS)}')
    return load_rules(RULESETS_DIR / f'{name}.rules')


def resolve_rule_set(spec: str) -> RuleSet:
    """A built-in set name or a path to a rule file."""
    if spec in BUILTIN_SETS:
        return builtin_rule_set(spec)
    return load_rules(spec)


def structural_rules() -> RuleSet:
    return builtin_rule_set('F').structural()
