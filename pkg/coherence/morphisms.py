"""
Morphism expressions built from the structure maps and their translation into
zigzags of rewrite steps.

Grammar: `a(t,t,t)`, `l(t)`, `r(t)`, `x(t,t)`, `g(t,t,t)` and `1(t)` are
generators; `f.f` composes (left first), `f#f` tensors and `f~` inverts.
"""
import enum
import logging
from dataclasses import dataclass
from functools import lru_cache

from diagrams.core import Diagram
from diagrams.exceptions import CompositionMismatch, ParseError, ShapeMismatch
from rewriting.engine import RewriteStep, reverse_steps, steps_from
from rewriting.normalize import reachable, trace_path
from rewriting.rules import RuleSet, builtin_rule_set

from .terms import UNIT, Product, Term, TokenStream, term_to_diagram, tokenize
from .zigzags import Move, ZigzagPath

logger = logging.getLogger(__name__)

EDGE_LIFT_DEPTH = 2


class GenKind(enum.Enum):
    ALPHA = 'a'
    LAMBDA = 'l'
    RHO = 'r'
    TAU = 'x'
    GAMMA = 'g'
    IDENTITY = '1'


ARITY = {
    GenKind.ALPHA: 3, GenKind.LAMBDA: 1, GenKind.RHO: 1,
    GenKind.TAU: 2, GenKind.GAMMA: 3, GenKind.IDENTITY: 1,
}

RULE_NAMES = {
    GenKind.ALPHA: 'alpha', GenKind.LAMBDA: 'l', GenKind.RHO: 'r',
    GenKind.TAU: 'tau', GenKind.GAMMA: 'gamma',
}


@dataclass(frozen=True)
class MorGen:
    kind: GenKind
    at: tuple
    inverted: bool = False

    def __post_init__(self):
        if len(self.at) != ARITY[self.kind]:
            raise ShapeMismatch(f'{self.kind.value} takes {ARITY[self.kind]} terms, got {len(self.at)}')

    def _ends(self) -> tuple[Term, Term]:
        k, at = self.kind, self.at
        if k is GenKind.ALPHA:
            x, y, z = at
            return Product(Product(x, y), z), Product(x, Product(y, z))
        if k is GenKind.LAMBDA:
            return Product(UNIT, at[0]), at[0]
        if k is GenKind.RHO:
            return Product(at[0], UNIT), at[0]
        if k is GenKind.TAU:
            x, y = at
            return Product(x, y), Product(y, x)
        if k is GenKind.GAMMA:
            x, y, z = at
            return Product(x, Product(y, z)), Product(y, Product(x, z))
        return at[0], at[0]

    @property
    def source(self) -> Term:
        ends = self._ends()
        return ends[1] if self.inverted else ends[0]

    @property
    def target(self) -> Term:
        ends = self._ends()
        return ends[0] if self.inverted else ends[1]

    def inverse(self) -> 'MorGen':
        return MorGen(self.kind, self.at, not self.inverted)

    def __str__(self):
        text = f'{self.kind.value}({",".join(str(t) for t in self.at)})'
        return text + '~' if self.inverted else text


@dataclass(frozen=True)
class Gen:
    gen: MorGen

    @property
    def source(self) -> Term:
        return self.gen.source

    @property
    def target(self) -> Term:
        return self.gen.target

    def __str__(self):
        return str(self.gen)


@dataclass(frozen=True)
class Compose:
    first: 'MorExpr'
    second: 'MorExpr'

    def __post_init__(self):
        if self.first.target != self.second.source:
            raise CompositionMismatch(f'{self.first} ends at {self.first.target}, {self.second} starts at {self.second.source}')

    @property
    def source(self) -> Term:
        return self.first.source

    @property
    def target(self) -> Term:
        return self.second.target

    def __str__(self):
        return f'({self.first}.{self.second})'


@dataclass(frozen=True)
class Tensor:
    left: 'MorExpr'
    right: 'MorExpr'

    @property
    def source(self) -> Term:
        return Product(self.left.source, self.right.source)

    @property
    def target(self) -> Term:
        return Product(self.left.target, self.right.target)

    def __str__(self):
        return f'({self.left}#{self.right})'


@dataclass(frozen=True)
class Inverse:
    inner: 'MorExpr'

    @property
    def source(self) -> Term:
        return self.inner.target

    @property
    def target(self) -> Term:
        return self.inner.source

    def __str__(self):
        return f'{self.inner}~'


MorExpr = Gen | Compose | Tensor | Inverse

GEN_TOKENS = {k.value: k for k in GenKind}


class _MorphismParser(TokenStream):
    def expression(self):
        result = self.tensor()
        while self.peek() == '.':
            self.take()
            result = Compose(result, self.tensor())
        return result

    def tensor(self):
        result = self.postfix()
        while self.peek() == '#':
            self.take()
            result = Tensor(result, self.postfix())
        return result

    def postfix(self):
        result = self.atom()
        while self.peek() == '~':
            self.take()
            result = Inverse(result)
        return result

    def atom(self):
        token = self.peek()
        if token == '(':
            self.take()
            inner = self.expression()
            self.take(')')
            return inner
        if token in GEN_TOKENS and self.peek(1) == '(':
            self.take()
            self.take('(')
            args = [self.term()]
            while self.peek() == ',':
                self.take()
                args.append(self.term())
            self.take(')')
            return Gen(MorGen(GEN_TOKENS[token], tuple(args)))
        raise ParseError(f'expected a generator or `(`, found {token!r}')


def parse_morphism(text: str) -> MorExpr:
    parser = _MorphismParser(tokenize(text))
    result = parser.expression()
    if not parser.done():
        raise ParseError(f'trailing input at token {parser.peek()!r}')
    return result


# ----------------------
# translation
# ----------------------

@dataclass(frozen=True)
class Placed:
    """A generator acting inside a whole object: `source` becomes `target`."""
    gen: MorGen
    source: Term
    target: Term


def placed(expr: MorExpr) -> list[Placed]:
    """The generators of `expr` in order, each applied to the whole object."""
    if isinstance(expr, Gen):
        if expr.gen.kind is GenKind.IDENTITY:
            return []
        return [Placed(expr.gen, expr.source, expr.target)]
    if isinstance(expr, Compose):
        return placed(expr.first) + placed(expr.second)
    if isinstance(expr, Tensor):
        after = expr.right.source
        before = expr.left.target
        return (
            [Placed(p.gen, Product(p.source, after), Product(p.target, after)) for p in placed(expr.left)]
            + [Placed(p.gen, Product(before, p.source), Product(before, p.target)) for p in placed(expr.right)]
        )
    return [Placed(p.gen.inverse(), p.target, p.source) for p in reversed(placed(expr.inner))]


@dataclass(frozen=True)
class Edge:
    """
    The zigzag a generator becomes: structural moves around one step of the
    generator's rule, which fires along the morphism when `forward` is set.
    """
    source: Diagram
    target: Diagram
    moves: tuple[Move, ...]
    step: RewriteStep | None = None
    forward: bool = True

    @property
    def zigzag(self) -> ZigzagPath:
        return ZigzagPath(self.source, self.moves)


@lru_cache(maxsize=1024)
def _lift_levels(start: Diagram, structural: RuleSet, depth: int) -> tuple[dict, ...]:
    """Per depth, diagrams with a structural path of that length to `start`."""
    levels = [{start: ()}]
    seen = {start}
    for _ in range(depth):
        level = {}
        for x in sorted(levels[-1], key=Diagram.sort_key):
            for r in reverse_steps(x, structural):
                if r.source not in seen:
                    seen.add(r.source)
                    level[r.source] = (r,) + levels[-1][x]
        levels.append(level)
    return tuple(levels)


def _link(start: Diagram, goal: Diagram, rules: RuleSet, rule, depth: int):
    structural = rules.structural()
    single = RuleSet(rule.name, (rule,))
    level = _lift_levels(start, structural, depth)[depth]
    for x in sorted(level, key=Diagram.sort_key):
        for s in steps_from(x, single):
            parents = reachable(s.target, structural)
            if goal in parents:
                return level[x], s, trace_path(parents, goal, s.target).steps
    return None


def _zigzag_moves(lift, s, tail) -> tuple[Move, ...]:
    return tuple(Move(x, False) for x in reversed(lift)) + (Move(s),) + tuple(Move(x) for x in tail)


def placed_edge(kind: GenKind, source: Term, target: Term, order, rules: RuleSet | None = None) -> Edge:
    rules = rules or builtin_rule_set('F')
    src = term_to_diagram(source, order)
    tgt = term_to_diagram(target, order)
    if kind is GenKind.IDENTITY:
        return Edge(src, tgt, ())
    try:
        rule = rules.get(RULE_NAMES[kind])
    except KeyError:
        raise ShapeMismatch(f'rule set {rules.name} has no {RULE_NAMES[kind]} rule')
    for depth in range(EDGE_LIFT_DEPTH + 1):
        found = _link(src, tgt, rules, rule, depth)
        if found:
            lift, s, tail = found
            return Edge(src, tgt, _zigzag_moves(lift, s, tail), s, True)
        found = _link(tgt, src, rules, rule, depth)
        if found:
            lift, s, tail = found
            moves = ZigzagPath(tgt, _zigzag_moves(lift, s, tail)).inverse().moves
            return Edge(src, tgt, moves, s, False)
    raise ShapeMismatch(f'no {rule.name} step links {source} and {target}')


def morgen_to_edge(gen: MorGen, order, rules: RuleSet | None = None) -> Edge:
    return placed_edge(gen.kind, gen.source, gen.target, order, rules)


def mor_to_zigzag(expr: MorExpr, order, rules: RuleSet | None = None) -> ZigzagPath:
    start = term_to_diagram(expr.source, order)
    moves = []
    current = start
    for p in placed(expr):
        edge = placed_edge(p.gen.kind, p.source, p.target, order, rules)
        if edge.source != current:
            raise CompositionMismatch(f'{p.gen} starts at {edge.source}, expected {current}')
        moves.extend(edge.moves)
        current = edge.target
    logger.debug('%s becomes %d moves', expr, len(moves))
    return ZigzagPath(start, tuple(moves))
