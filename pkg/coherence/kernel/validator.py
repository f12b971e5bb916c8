"""
Independent certificate checker.

Replays a certificate edit by edit on a plain list of (step, forward) moves.
Every step is rechecked against its rule by cutting the redex out of its
source, and every cell against the shape its name promises. Kelly and
weak-Kelly cells are replayed through their expansions. Only the diagram
layer is trusted here; nothing from the generator is reused.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache

from diagrams.core import extract_block, port_graph
from diagrams.parser import parse_diagram

logger = logging.getLogger(__name__)

BASE_SOURCES = {
    'penta': '(m*id2);(m*id1);m',
    'tria': '(id1*e*id1);(m*id1);m',
    'inv': 's;s;m',
    'g': '(s*id1);(m*id1);m',
    'exa2': '(m*id1);s;m',
}
EXPANDED_KINDS = ('kelly', 'weak_kelly')
OVERLAP_KINDS = ('foldable',) + EXPANDED_KINDS


@lru_cache(maxsize=None)
def _base_source(name):
    return parse_diagram(BASE_SOURCES[name])


@dataclass(frozen=True)
class Checkpoint:
    """After edit `after`, the zigzag has `length` moves and passes `diagram` at `position`."""
    after: int
    length: int
    position: int
    diagram: object


@dataclass
class ValidationReport:
    ok: bool
    failed_index: int | None = None
    reason: str = ''
    checkpoints: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


class _Rejected(Exception):
    pass


def _same(a, b) -> bool:
    return (
        a.source == b.source
        and a.rule.name == b.rule.name
        and sorted(a.gates) == sorted(b.gates)
    )


def _check_step(s) -> None:
    occurrence = extract_block(s.source, s.gates)
    if occurrence is None:
        raise _Rejected(f'{s.rule.name} gates {sorted(s.gates)} are not a block of {s.source}')
    if occurrence.block != s.rule.lhs:
        raise _Rejected(f'{s.rule.name} lhs does not match {occurrence.block}')
    if occurrence.context.fill(s.rule.rhs) != s.target:
        raise _Rejected(f'{s.rule.name} on {s.source} does not give {s.target}')


def _check_side(steps, source) -> object:
    current = source
    for s in steps:
        if s.source != current:
            raise _Rejected(f'side breaks at {s.rule.name}: expected {current}')
        _check_step(s)
        current = s.target
    return current


def _hull(host, gates) -> set[int]:
    graph = port_graph(host)
    chosen = set(gates)

    def spread(follow):
        seen, stack = set(), list(chosen)
        while stack:
            for h in follow(stack.pop()):
                if h not in seen:
                    seen.add(h)
                    stack.append(h)
        return seen

    return chosen | (spread(graph.successors) & spread(graph.predecessors))


def _names(steps) -> tuple[str, ...]:
    return tuple(s.rule.name for s in steps)


class _Expansions:
    """Expansion certificates by cell name, each replayed once before use."""

    def __init__(self, table):
        self.table = dict(table or {})
        self.verified = set()
        self.open = set()

    def check(self, cell) -> None:
        certificate = self.table.get(cell.name)
        if certificate is None:
            raise _Rejected(f'no expansion supplied for {cell.name}')
        left, right = cell.left.steps, cell.right.steps
        occurrence = extract_block(cell.source, _hull(cell.source, set(left[0].gates) | set(right[0].gates)))
        if occurrence is None or occurrence.block != certificate.source.start:
            raise _Rejected(f'cell {cell.name} is not placed on the source of its expansion')
        if not all(m.forward for m in certificate.source.moves + certificate.target.moves):
            raise _Rejected(f'expansion of {cell.name} does not run between two forward paths')
        sides = (_names(m.step for m in certificate.source.moves), _names(m.step for m in certificate.target.moves))
        if (_names(left), _names(right)) not in (sides, sides[::-1]):
            raise _Rejected(f'cell {cell.name} does not have the sides of its expansion')
        if cell.name in self.verified:
            return
        if cell.name in self.open:
            raise _Rejected(f'expansion of {cell.name} depends on itself')
        self.open.add(cell.name)
        try:
            report = _replay(certificate, self, record=False)
        finally:
            self.open.discard(cell.name)
        if not report:
            raise _Rejected(f'expansion of {cell.name} fails at edit {report.failed_index}: {report.reason}')
        self.verified.add(cell.name)


def _check_cell(cell, expansions: _Expansions) -> None:
    left, right = cell.left.steps, cell.right.steps
    if _check_side(left, cell.left.source) != _check_side(right, cell.right.source):
        raise _Rejected(f'cell {cell.name} sides end apart')
    if cell.left.source != cell.right.source:
        raise _Rejected(f'cell {cell.name} sides start apart')
    kind = cell.name.split('(', 1)[0]
    if kind == 'disjoint_square':
        if len(left) != 2 or len(right) != 2:
            raise _Rejected('disjoint square sides must have two steps')
        if set(left[0].gates) & set(right[0].gates):
            raise _Rejected('disjoint square steps overlap')
        if (left[0].rule.name, left[1].rule.name) != (right[1].rule.name, right[0].rule.name):
            raise _Rejected('disjoint square rules do not cross')
        return
    if not left or not right:
        raise _Rejected(f'cell {cell.name} has an empty side')
    shared = set(left[0].gates) & set(right[0].gates)
    if not shared:
        raise _Rejected(f'cell {cell.name} starts with disjoint steps')
    if kind in BASE_SOURCES:
        occurrence = extract_block(cell.left.source, set(left[0].gates) | set(right[0].gates))
        if occurrence is None or occurrence.block != _base_source(kind):
            raise _Rejected(f'cell {cell.name} is not placed on its source {BASE_SOURCES[kind]}')
    elif kind in EXPANDED_KINDS:
        expansions.check(cell)
    elif kind not in OVERLAP_KINDS:
        raise _Rejected(f'unknown cell kind {kind!r}')


def _diagram_at(start, moves, position):
    if position == 0:
        return start
    s, forward = moves[position - 1]
    return s.target if forward else s.source


def _apply(edit, start, moves, expansions: _Expansions) -> None:
    if hasattr(edit, 'cell'):
        _check_cell(edit.cell, expansions)
        removed = edit.cell.side(edit.forward).steps
        inserted = edit.cell.side(not edit.forward).steps
        segment = moves[edit.index:edit.index + len(removed)]
        if len(segment) != len(removed):
            raise _Rejected('surgery runs past the end of the zigzag')
        for (s, forward), expected in zip(segment, removed):
            if not forward or not _same(s, expected):
                raise _Rejected(f'move {s.rule.name} does not match cell {edit.cell.name}')
        if not removed and _diagram_at(start, moves, edit.index) != edit.cell.source:
            raise _Rejected(f'empty side of {edit.cell.name} is not at position {edit.index}')
        moves[edit.index:edit.index + len(removed)] = [(s, True) for s in inserted]
        return
    s, forward = edit.step, edit.forward
    if edit.insert:
        _check_step(s)
        if not 0 <= edit.index <= len(moves):
            raise _Rejected(f'insert position {edit.index} is outside the zigzag')
        here = s.source if forward else s.target
        if _diagram_at(start, moves, edit.index) != here:
            raise _Rejected(f'pair {s.rule.name} does not start at position {edit.index}')
        moves[edit.index:edit.index] = [(s, forward), (s, not forward)]
        return
    pair = moves[edit.index:edit.index + 2]
    if len(pair) != 2:
        raise _Rejected(f'no pair at position {edit.index}')
    (a, fa), (b, fb) = pair
    if not (_same(a, s) and _same(b, s) and fa == forward and fb != forward):
        raise _Rejected(f'moves at {edit.index} are not {s.rule.name} and its inverse')
    del moves[edit.index:edit.index + 2]


def _replay(certificate, expansions: _Expansions, record: bool) -> ValidationReport:
    start = certificate.source.start
    moves = [(m.step, m.forward) for m in certificate.source.moves]
    expected = {c.after: c for c in certificate.checkpoints}
    trace = []
    for i, edit in enumerate(certificate.edits):
        try:
            _apply(edit, start, moves, expansions)
            checkpoint = expected.get(i)
            if checkpoint is not None:
                if len(moves) != checkpoint.length or not 0 <= checkpoint.position <= len(moves):
                    raise _Rejected(f'checkpoint expects {checkpoint.length} moves, found {len(moves)}')
                if _diagram_at(start, moves, checkpoint.position) != checkpoint.diagram:
                    raise _Rejected(f'checkpoint diagram differs at position {checkpoint.position}')
        except _Rejected as exc:
            logger.debug('edit %d rejected: %s', i, exc)
            return ValidationReport(False, i, str(exc), trace)
        if record and hasattr(edit, 'cell'):
            position = edit.index + len(edit.cell.side(not edit.forward).steps)
            trace.append(Checkpoint(i, len(moves), position, _diagram_at(start, moves, position)))
    target = [(m.step, m.forward) for m in certificate.target.moves]
    if certificate.target.start != start:
        return ValidationReport(False, None, 'certificate ends at another zigzag start', trace)
    if len(target) != len(moves) or any(
        fa != fb or not _same(a, b) for (a, fa), (b, fb) in zip(moves, target)
    ):
        return ValidationReport(False, None, 'replay does not reach the target zigzag', trace)
    return ValidationReport(True, checkpoints=trace)


def replay(certificate, record=False, expansions=None) -> ValidationReport:
    """
    Run every edit; `record` collects a checkpoint after each cell surgery.

    `expansions` maps Kelly and weak-Kelly cell names to certificates turning
    the left side of the cell into its right side. A surgery with such a cell
    is accepted only when its expansion is supplied, sits on the same block
    with the same side rules, and replays itself.
    """
    return _replay(certificate, _Expansions(expansions), record)


def validate(certificate, expansions=None) -> ValidationReport:
    report = replay(certificate, expansions=expansions)
    if report:
        logger.info('certificate valid: %d edits', len(certificate.edits))
    else:
        logger.warning('certificate rejected at edit %s: %s', report.failed_index, report.reason)
    return report
