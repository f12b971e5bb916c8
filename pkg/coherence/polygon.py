"""
Polygon files: a diagram of structure maps whose two routes should agree.

    OBJECT <name>: <term>
    EDGE <name>: <object> -> <object> : <morphism>
    TERMINAL <object>

Lines starting with `#` are comments. The terminal object fixes the input
order unless one is given explicitly.
"""
import logging
import re
from dataclasses import dataclass
from pathlib import Path

from diagrams.exceptions import CompositionMismatch, ParseError, ShapeMismatch
from rewriting.rules import RuleSet, builtin_rule_set

from .certificates import Certificate, certify_equal
from .morphisms import Compose, MorExpr, mor_to_zigzag, parse_morphism
from .terms import parse_term, variables
from .zigzags import ZigzagPath

logger = logging.getLogger(__name__)

OBJECT_RE = re.compile(r'^OBJECT\s+(?P<name>[\w\-]+)\s*:\s*(?P<term>.+)$')
EDGE_RE = re.compile(r'^EDGE\s+(?P<name>[\w\-]+)\s*:\s*(?P<source>[\w\-]+)\s*->\s*(?P<target>[\w\-]+)\s*:\s*(?P<expr>.+)$')
TERMINAL_RE = re.compile(r'^TERMINAL\s+(?P<name>[\w\-]+)$')
POLYGONS_DIR = Path(__file__).resolve().parent / 'fixtures'


@dataclass(frozen=True)
class PolygonEdge:
    name: str
    source: str
    target: str
    expr: MorExpr


@dataclass(frozen=True)
class Polygon:
    objects: dict
    edges: tuple[PolygonEdge, ...]
    terminal: str

    def order(self) -> tuple[str, ...]:
        return variables(self.objects[self.terminal])

    def initial(self) -> str:
        reached = {e.target for e in self.edges}
        starts = [name for name in self.objects if name not in reached]
        if len(starts) != 1:
            raise ShapeMismatch(f'polygon needs one initial object, found {", ".join(starts) or "none"}')
        return starts[0]

    def routes(self) -> list[tuple[PolygonEdge, ...]]:
        found = []

        def walk(node, taken):
            if node == self.terminal:
                found.append(taken)
                return
            for e in self.edges:
                if e.source == node and e not in taken:
                    walk(e.target, taken + (e,))

        walk(self.initial(), ())
        if len(found) != 2:
            raise ShapeMismatch(f'polygon needs exactly two routes to {self.terminal}, found {len(found)}')
        return found

    @staticmethod
    def route_expr(route) -> MorExpr:
        expr = route[0].expr
        for e in route[1:]:
            expr = Compose(expr, e.expr)
        return expr


def parse_polygon(text: str) -> Polygon:
    objects, edges, terminal = {}, [], None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        if match := OBJECT_RE.match(line):
            name = match.group('name')
            if name in objects:
                raise ParseError(f'line {number}: object {name} defined twice')
            objects[name] = parse_term(match.group('term'))
        elif match := EDGE_RE.match(line):
            source, target = match.group('source'), match.group('target')
            for end in (source, target):
                if end not in objects:
                    raise ParseError(f'line {number}: unknown object {end}')
            expr = parse_morphism(match.group('expr'))
            if expr.source != objects[source] or expr.target != objects[target]:
                raise CompositionMismatch(
                    f'line {number}: {match.group("name")} runs {expr.source} -> {expr.target}, '
                    f'not {objects[source]} -> {objects[target]}'
                )
            edges.append(PolygonEdge(match.group('name'), source, target, expr))
        elif match := TERMINAL_RE.match(line):
            terminal = match.group('name')
            if terminal not in objects:
                raise ParseError(f'line {number}: unknown object {terminal}')
        else:
            raise ParseError(f'line {number}: expected OBJECT, EDGE or TERMINAL')
    if terminal is None:
        raise ParseError('polygon has no TERMINAL line')
    return Polygon(objects, tuple(edges), terminal)


def load_polygon(path) -> Polygon:
    return parse_polygon(Path(path).read_text(encoding='utf-8'))


def polygon_zigzags(polygon: Polygon, rules: RuleSet, order=None) -> tuple[ZigzagPath, ZigzagPath]:
    order = tuple(order) if order else polygon.order()
    first, second = (mor_to_zigzag(polygon.route_expr(r), order, rules) for r in polygon.routes())
    return first, second


def certify_polygon(polygon: Polygon, rules: RuleSet | None = None, order=None) -> Certificate:
    rules = rules or builtin_rule_set('F')
    first, second = polygon_zigzags(polygon, rules, order)
    logger.info('polygon routes: %d and %d moves', len(first), len(second))
    return certify_equal(first, second, rules)
