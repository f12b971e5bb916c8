"""Reading and printing diagram expressions such as `(m*id1);m` or `s;s`."""
import re

from .core import Diagram, GateKind, canonical_form, gate, identity, par_compose, seq_compose
from .exceptions import ParseError

TOKEN_RE = re.compile(r'\s*(?:(id)(\d+)|([mes])|([;*()]))')


def tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        match = TOKEN_RE.match(text, pos)
        if not match or match.end() == pos:
            raise ParseError(f'unexpected character {text[pos]!r} at position {pos}')
        if match.group(1):
            tokens.append('id' + match.group(2))
        else:
            tokens.append(match.group(3) or match.group(4))
        pos = match.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return tokens


class _Parser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        token = self.peek()
        if token is None:
            raise ParseError('unexpected end of expression')
        if expected is not None and token != expected:
            raise ParseError(f'expected {expected!r}, found {token!r}')
        self.pos += 1
        return token

    def expression(self) -> Diagram:
        result = self.product()
        while self.peek() == ';':
            self.take()
            result = seq_compose(result, self.product())
        return result

    def product(self) -> Diagram:
        result = self.atom()
        while self.peek() == '*':
            self.take()
            result = par_compose(result, self.atom())
        return result

    def atom(self) -> Diagram:
        token = self.take()
        if token == '(':
            inner = self.expression()
            self.take(')')
            return inner
        if token.startswith('id'):
            return identity(int(token[2:]))
        if token in ('m', 'e', 's'):
            return gate(GateKind(token))
        raise ParseError(f'unexpected token {token!r}')


def parse_diagram(text: str) -> Diagram:
    tokens = tokenize(text)
    if not tokens:
        raise ParseError('empty expression')
    parser = _Parser(tokens)
    result = parser.expression()
    if parser.peek() is not None:
        raise ParseError(f'trailing input at token {parser.peek()!r}')
    return result


WIRE = None


def _merge(layer: list, s) -> bool:
    """Place slice `s` into `layer` when it only touches the layer's through wires."""
    position, index = 0, 0
    while index < len(layer) and position < s.left:
        position += 1 if layer[index] is WIRE else layer[index].outputs
        index += 1
    if position != s.left:
        return False
    if s.gate.inputs == 0:
        layer.insert(index, s.gate)
        return True
    taken = layer[index:index + s.gate.inputs]
    if len(taken) < s.gate.inputs or any(t is not WIRE for t in taken):
        return False
    layer[index:index + s.gate.inputs] = [s.gate]
    return True


def _layer_expression(layer: list) -> str:
    parts = []
    for token in layer:
        if token is not WIRE:
            parts.append(token.value)
        elif parts and parts[-1].startswith('id'):
            parts[-1] = f'id{int(parts[-1][2:]) + 1}'
        else:
            parts.append('id1')
    return parts[0] if len(parts) == 1 else '(' + '*'.join(parts) + ')'


def print_diagram(diagram: Diagram) -> str:
    """
    Canonical schedule printed layer by layer: consecutive slices that sit
    side by side share one `*` layer.
    """
    diagram = canonical_form(diagram)
    if diagram.is_identity:
        return f'id{diagram.inputs}'
    layers = []
    for s in diagram.slices:
        if layers and _merge(layers[-1], s):
            continue
        layers.append([WIRE] * s.left + [s.gate] + [WIRE] * s.right)
    return ';'.join(_layer_expression(layer) for layer in layers)
