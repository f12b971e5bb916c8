"""
Object terms of a free symmetric monoidal category and their diagrams.

A term is a variable, the unit `I` or a product `(a#b)`. Terms are read off a
diagram by labelling its inputs with variables: a unit gate outputs `I`, a
merge outputs the product of its two inputs and a swap exchanges its labels.
"""
import logging
import re
from dataclasses import dataclass

from diagrams.core import Diagram, GateKind, WhiskeredGate, from_slices, gate, identity, par_compose, seq_compose
from diagrams.exceptions import NonLinearTerm, ParseError, ShapeMismatch, UnknownVariable
from rewriting.normalize import normalize
from rewriting.rules import structural_rules

logger = logging.getLogger(__name__)

TOKEN_RE = re.compile(r'\s*(?:([A-Za-z_][A-Za-z0-9_]*)|(\d+)|([()#,.~]))')
UNIT_NAME = 'I'


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Unit:
    def __str__(self):
        return UNIT_NAME


@dataclass(frozen=True)
class Product:
    left: 'Term'
    right: 'Term'

    def __str__(self):
        return f'({self.left}#{self.right})'


Term = Var | Unit | Product
UNIT = Unit()


def tokenize(text: str) -> list[str]:
    """Tokens shared by the term and the morphism grammars."""
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = TOKEN_RE.match(text, pos)
        if not match or match.end() == pos:
            raise ParseError(f'unexpected character {text[pos]!r} at position {pos}')
        tokens.append(next(g for g in match.groups() if g is not None))
        pos = match.end()
    return tokens


class TokenStream:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0):
        index = self.pos + ahead
        return self.tokens[index] if index < len(self.tokens) else None

    def take(self, expected=None) -> str:
        token = self.peek()
        if token is None:
            raise ParseError('unexpected end of input')
        if expected is not None and token != expected:
            raise ParseError(f'expected {expected!r}, found {token!r}')
        self.pos += 1
        return token

    def done(self) -> bool:
        return self.pos >= len(self.tokens)

    def term(self) -> Term:
        token = self.take()
        if token == '(':
            left = self.term()
            self.take('#')
            right = self.term()
            self.take(')')
            return Product(left, right)
        if token == UNIT_NAME:
            return UNIT
        if token[0].isalpha() or token[0] == '_':
            return Var(token)
        raise ParseError(f'unexpected token {token!r} in a term')


def parse_term(text: str) -> Term:
    stream = TokenStream(tokenize(text))
    term = stream.term()
    if not stream.done():
        raise ParseError(f'trailing input at token {stream.peek()!r}')
    return term


def print_term(term: Term) -> str:
    return str(term)


def variables(term: Term) -> tuple[str, ...]:
    """Variable names from left to right, repeats included."""
    if isinstance(term, Var):
        return (term.name,)
    if isinstance(term, Product):
        return variables(term.left) + variables(term.right)
    return ()


def is_linear(term: Term) -> bool:
    names = variables(term)
    return len(set(names)) == len(names)


def check_order(term: Term, order) -> tuple[str, ...]:
    """The input order for `term`; every variable must be used exactly once."""
    order = tuple(order)
    names = variables(term)
    if not is_linear(term):
        raise NonLinearTerm(f'{term} uses a variable twice')
    if len(set(order)) != len(order):
        raise NonLinearTerm(f'input order {" ".join(order)} repeats a variable')
    unknown = [n for n in names if n not in order]
    if unknown:
        raise UnknownVariable(f'{", ".join(unknown)} not in the input order')
    unused = [n for n in order if n not in names]
    if unused:
        raise UnknownVariable(f'{", ".join(unused)} does not occur in {term}')
    return order


def permutation(source: list, target: list) -> Diagram:
    """A swap network taking wires labelled `source` to the order `target`."""
    current = list(source)
    width = len(current)
    slices = []
    for k, label in enumerate(target):
        j = current.index(label)
        while j > k:
            slices.append(WhiskeredGate(j - 1, GateKind.S, width - j - 1))
            current[j - 1], current[j] = current[j], current[j - 1]
            j -= 1
    return from_slices(width, slices)


def _build(term: Term, rank: dict) -> Diagram:
    if isinstance(term, Var):
        return identity(1)
    if isinstance(term, Unit):
        return gate('e')
    inputs = sorted(variables(term), key=rank.get)
    wanted = sorted(variables(term.left), key=rank.get) + sorted(variables(term.right), key=rank.get)
    body = par_compose(_build(term.left, rank), _build(term.right, rank))
    return seq_compose(seq_compose(permutation(inputs, wanted), body), gate('m'))


def term_to_diagram(term: Term, order) -> Diagram:
    """
    The structural-normal diagram whose output reads `term` when the inputs are
    labelled by `order` from left to right.
    """
    order = check_order(term, order)
    rank = {name: i for i, name in enumerate(order)}
    built = _build(term, rank)
    result, _ = normalize(built, structural_rules())
    logger.debug('term %s over %s reads as %s', term, ' '.join(order), result)
    return result


def read_labels(diagram: Diagram, labels) -> tuple[Term, ...]:
    """The output labels of `diagram` given its input labels."""
    frontier = list(labels)
    if len(frontier) != diagram.inputs:
        raise ShapeMismatch(f'{diagram} has {diagram.inputs} inputs, got {len(frontier)} labels')
    for s in diagram.slices:
        if s.gate is GateKind.E:
            frontier.insert(s.left, UNIT)
        elif s.gate is GateKind.M:
            frontier[s.left:s.left + 2] = [Product(frontier[s.left], frontier[s.left + 1])]
        else:
            frontier[s.left], frontier[s.left + 1] = frontier[s.left + 1], frontier[s.left]
    return tuple(frontier)


def diagram_to_term(diagram: Diagram, order) -> Term:
    if diagram.outputs != 1:
        raise ShapeMismatch(f'{diagram} has {diagram.outputs} outputs, a term needs one')
    return read_labels(diagram, [Var(name) for name in order])[0]
