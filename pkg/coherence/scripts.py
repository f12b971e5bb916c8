"""
Line-oriented certificate scripts.

    CERTIFICATE <rule set>
    SOURCE <diagram> | <move> ...
    TARGET <diagram> | <move> ...
    SURGERY <index> <cell> <fwd|bwd>
    LEFT <diagram> | <step> ...
    RIGHT <diagram> | <step> ...
    CHECKPOINT <after> <length> <position> <diagram>
    STALE <index> <insert|delete> <fwd|bwd> <step> <diagram>

A step is `rule@g,g` applied to the diagram reached so far. Moves carry a
sign; a backward move also names the source of its step, after a colon.
"""
import logging
import re

from diagrams.exceptions import ParseError
from diagrams.parser import parse_diagram
from diagrams.render import render_path
from rewriting.engine import RewriteStep, step_for
from rewriting.paths import RewritePath
from rewriting.rules import RuleSet, resolve_rule_set

from .cells import FourCell
from .certificates import Certificate, StaleEdit, Surgery
from .kernel import Checkpoint, replay
from .zigzags import Move, ZigzagPath

logger = logging.getLogger(__name__)

STEP_RE = re.compile(r'^(?P<rule>[A-Za-z_][\w\-]*)@(?P<gates>\d+(?:,\d+)*)$')
DIRECTIONS = {'fwd': True, 'bwd': False}


def _step_token(s: RewriteStep) -> str:
    return f'{s.rule.name}@{",".join(str(g) for g in s.gates)}'


def _move_token(m: Move) -> str:
    if m.forward:
        return f'+{_step_token(m.step)}'
    return f'-{_step_token(m.step)}:{m.step.source}'


def _direction(forward: bool) -> str:
    return 'fwd' if forward else 'bwd'


def _path_line(tag: str, path: RewritePath) -> str:
    return f'{tag} {path.source} | {" ".join(_step_token(s) for s in path.steps)}'.rstrip()


def to_script(certificate: Certificate, expansions=None) -> str:
    """`expansions` lets the checkpoints run past Kelly cells, as in `replay`."""
    lines = [f'CERTIFICATE {certificate.rule_set}']
    for tag, zigzag in (('SOURCE', certificate.source), ('TARGET', certificate.target)):
        lines.append(f'{tag} {zigzag.start} | {" ".join(_move_token(m) for m in zigzag.moves)}'.rstrip())
    checkpoints = {c.after: c for c in replay(certificate, record=True, expansions=expansions).checkpoints}
    for i, edit in enumerate(certificate.edits):
        if isinstance(edit, Surgery):
            lines.append(f'SURGERY {edit.index} {edit.name} {_direction(edit.forward)}')
            lines.append(_path_line('LEFT', edit.cell.left))
            lines.append(_path_line('RIGHT', edit.cell.right))
        else:
            action = 'insert' if edit.insert else 'delete'
            lines.append(
                f'STALE {edit.index} {action} {_direction(edit.forward)} {_step_token(edit.step)} {edit.step.source}'
            )
        if i in checkpoints:
            c = checkpoints[i]
            lines.append(f'CHECKPOINT {c.after} {c.length} {c.position} {c.diagram}')
    return '\n'.join(lines) + '\n'


def _parse_step(token: str, source, rules: RuleSet) -> RewriteStep:
    match = STEP_RE.match(token)
    if not match:
        raise ParseError(f'cannot read step {token!r}')
    try:
        rule = rules.get(match.group('rule'))
    except KeyError:
        raise ParseError(f'rule {match.group("rule")} is not in {rules.name}')
    return step_for(source, rule, [int(g) for g in match.group('gates').split(',')])


def _split(body: str) -> tuple[str, list[str]]:
    head, _, rest = body.partition('|')
    return head.strip(), rest.split()


def _parse_path(body: str, rules: RuleSet) -> RewritePath:
    head, tokens = _split(body)
    current = parse_diagram(head)
    steps = []
    for token in tokens:
        s = _parse_step(token, current, rules)
        steps.append(s)
        current = s.target
    return RewritePath(parse_diagram(head), tuple(steps))


def _parse_zigzag(body: str, rules: RuleSet) -> ZigzagPath:
    head, tokens = _split(body)
    start = parse_diagram(head)
    current = start
    moves = []
    for token in tokens:
        sign, token = token[0], token[1:]
        if sign == '+':
            move = Move(_parse_step(token, current, rules), True)
        elif sign == '-':
            token, _, source = token.partition(':')
            move = Move(_parse_step(token, parse_diagram(source), rules), False)
        else:
            raise ParseError(f'move {sign}{token} needs a + or - sign')
        moves.append(move)
        current = move.end
    return ZigzagPath(start, tuple(moves))


def parse_script(text: str, rules: RuleSet | None = None) -> Certificate:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith('CERTIFICATE '):
        raise ParseError('script must start with a CERTIFICATE line')
    rule_set = lines[0].split(None, 1)[1]
    rules = rules or resolve_rule_set(rule_set)
    source = target = None
    edits, checkpoints = [], []
    pending = None
    for number, line in enumerate(lines[1:], start=2):
        keyword, _, body = line.partition(' ')
        if keyword == 'SOURCE':
            source = _parse_zigzag(body, rules)
        elif keyword == 'TARGET':
            target = _parse_zigzag(body, rules)
        elif keyword == 'SURGERY':
            index, name, direction = body.split()
            pending = [int(index), name, DIRECTIONS[direction]]
        elif keyword in ('LEFT', 'RIGHT'):
            if pending is None:
                raise ParseError(f'line {number}: {keyword} outside a surgery')
            pending.append(_parse_path(body, rules))
            if len(pending) == 5:
                index, name, forward, left, right = pending
                edits.append(Surgery(index, FourCell(name, left, right), forward))
                pending = None
        elif keyword == 'STALE':
            index, action, direction, token, diagram = body.split()
            s = _parse_step(token, parse_diagram(diagram), rules)
            edits.append(StaleEdit(int(index), s, action == 'insert', DIRECTIONS[direction]))
        elif keyword == 'CHECKPOINT':
            after, length, position, diagram = body.split()
            checkpoints.append(Checkpoint(int(after), int(length), int(position), parse_diagram(diagram)))
        else:
            raise ParseError(f'line {number}: unknown keyword {keyword}')
    if source is None or target is None:
        raise ParseError('script needs SOURCE and TARGET lines')
    logger.debug('read certificate with %d edits', len(edits))
    return Certificate(rules.name, source, target, tuple(edits), tuple(checkpoints))


def render_certificate(certificate: Certificate) -> str:
    """Drawings of both sides of every non-plumbing cell, in replay order."""
    blocks = [f'{certificate.source}', f'{certificate.target}']
    for edit in certificate.surgeries():
        if edit.cell.is_plumbing:
            continue
        blocks.append(f'-- {edit.name} at {edit.index} --')
        for side in (edit.cell.left, edit.cell.right):
            blocks.append(render_path(side.diagrams(), [s.label() for s in side.steps]))
    return '\n\n'.join(blocks) + '\n'
