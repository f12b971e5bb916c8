"""
Coherence certificates: replayable edit scripts turning one zigzag into a
parallel one.

Both zigzags are first brought to the canonical zigzag of their ends, the
normal path of the start followed by the inverted normal path of the end.
Each move is absorbed in turn: the normal paths around it are inserted as
stale pairs, the resulting pair of forward paths to the normal form is filled
by Newman induction over the termination order and the pairs are cancelled
again. The certificate runs the first conversion and then the second one
backwards.
"""
import logging
from collections import Counter
from dataclasses import dataclass

from diagrams.core import Diagram
from diagrams.exceptions import NotJoinable, NotParallel
from rewriting.engine import RewriteStep
from rewriting.normalize import leftmost_normalization
from rewriting.rules import RuleSet, builtin_rule_set

from .cells import STALE_CANCEL, FourCell, filler
from .zigzags import Move, ZigzagPath

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Surgery:
    """Replace the forward segment at `index` by the other side of `cell`."""
    index: int
    cell: FourCell
    forward: bool = True

    @property
    def removed(self):
        return self.cell.side(self.forward)

    @property
    def inserted(self):
        return self.cell.side(not self.forward)

    @property
    def name(self) -> str:
        return self.cell.name

    def inverse(self) -> 'Surgery':
        return Surgery(self.index, self.cell, not self.forward)

    def shifted(self, offset: int) -> 'Surgery':
        return Surgery(self.index + offset, self.cell, self.forward)


@dataclass(frozen=True)
class StaleEdit:
    """
    Insert or delete a step next to its formal inverse at `index`: the pair is
    (step, step~) when `forward` is set and (step~, step) otherwise.
    """
    index: int
    step: RewriteStep
    insert: bool
    forward: bool = True

    name = STALE_CANCEL

    @property
    def pair(self) -> tuple[Move, Move]:
        return (Move(self.step, self.forward), Move(self.step, not self.forward))

    def inverse(self) -> 'StaleEdit':
        return StaleEdit(self.index, self.step, not self.insert, self.forward)

    def shifted(self, offset: int) -> 'StaleEdit':
        return StaleEdit(self.index + offset, self.step, self.insert, self.forward)


@dataclass(frozen=True)
class Certificate:
    rule_set: str
    source: ZigzagPath
    target: ZigzagPath
    edits: tuple = ()
    checkpoints: tuple = ()

    def __len__(self):
        return len(self.edits)

    def surgeries(self) -> list[Surgery]:
        return [e for e in self.edits if isinstance(e, Surgery)]

    def vocabulary(self) -> Counter:
        return Counter(e.name for e in self.edits)

    def non_plumbing(self) -> Counter:
        return Counter(s.name for s in self.surgeries() if not s.cell.is_plumbing)

    def kinds(self) -> set[str]:
        return {s.cell.kind for s in self.surgeries()}


def normal_steps(diagram: Diagram, rules: RuleSet) -> tuple[RewriteStep, ...]:
    return leftmost_normalization(diagram, rules).steps


class CertificateBuilder:
    """Accumulates edits against a zigzag whose layout the caller tracks."""

    def __init__(self, rules: RuleSet):
        self.rules = rules
        self.edits = []

    def insert_pairs(self, index: int, steps) -> None:
        """Insert `steps` followed by their inverses at `index`."""
        for k, s in enumerate(steps):
            self.edits.append(StaleEdit(index + k, s, insert=True, forward=True))

    def insert_inverse_pairs(self, index: int, steps) -> None:
        """Insert the inverses of `steps` followed by `steps` at `index`."""
        for k, s in enumerate(reversed(steps)):
            self.edits.append(StaleEdit(index + k, s, insert=True, forward=False))

    def delete_inverse_pairs(self, index: int, steps) -> None:
        """Remove the inverses of `steps` followed by `steps` starting at `index`."""
        n = len(steps)
        for k, s in enumerate(steps):
            self.edits.append(StaleEdit(index + n - 1 - k, s, insert=False, forward=False))

    def delete_pairs(self, index: int, steps) -> None:
        """Remove `steps` followed by their inverses starting at `index`."""
        for j in reversed(range(len(steps))):
            self.edits.append(StaleEdit(index + j, steps[j], insert=False, forward=True))

    def fill(self, first, second, offset: int) -> None:
        """
        Turn the forward segment `first` at `offset` into `second`; both run
        from the same diagram to the same normal form.
        """
        first, second = tuple(first), tuple(second)
        i = 0
        while i < len(first) and i < len(second) and first[i] == second[i]:
            i += 1
        if i == len(first) and i == len(second):
            return
        if i == len(first) or i == len(second):
            raise NotJoinable(f'paths from {(first or second)[0].source} end at different diagrams')
        cell = filler(first[i], second[i], self.rules)
        tail = normal_steps(cell.left.target, self.rules)
        self.fill(first[i + 1:], cell.left.steps[1:] + tail, offset + i + 1)
        self.edits.append(Surgery(offset + i, cell, True))
        self.fill(cell.right.steps[1:] + tail, second[i + 1:], offset + i + 1)

    def to_canonical(self, zigzag: ZigzagPath) -> None:
        """Edits taking `zigzag` to its canonical zigzag."""
        head = normal_steps(zigzag.start, self.rules)
        anchor = len(head)
        self.insert_pairs(0, head)
        current = head
        for move in zigzag.moves:
            position = anchor + len(current)
            s = move.step
            if move.forward:
                after = normal_steps(s.target, self.rules)
                self.insert_pairs(position + 1, after)
                self.fill((s,) + after, current, position)
                self.delete_inverse_pairs(anchor, current)
            else:
                after = normal_steps(s.source, self.rules)
                self.insert_pairs(position + 1, after)
                self.fill(after, (s,) + current, position + 1)
                self.delete_inverse_pairs(anchor, (s,) + current)
            current = after


def canonical_zigzag(start: Diagram, end: Diagram, rules: RuleSet) -> ZigzagPath:
    head = ZigzagPath(start, tuple(Move(s) for s in normal_steps(start, rules)))
    back = ZigzagPath(end, tuple(Move(s) for s in normal_steps(end, rules)))
    return head.then(back.inverse())


def certify_equal(first: ZigzagPath, second: ZigzagPath, rules: RuleSet | None = None) -> Certificate:
    rules = rules or builtin_rule_set('F')
    if first.start != second.start or first.end != second.end:
        raise NotParallel(f'zigzags run {first.start} -> {first.end} and {second.start} -> {second.end}')
    if first == second:
        return Certificate(rules.name, first, second)
    forth = CertificateBuilder(rules)
    forth.to_canonical(first)
    back = CertificateBuilder(rules)
    back.to_canonical(second)
    edits = tuple(forth.edits) + tuple(e.inverse() for e in reversed(back.edits))
    certificate = Certificate(rules.name, first, second, edits)
    logger.info(
        'certificate %s => %s: %d edits, cells %s',
        first.start, first.end, len(edits), dict(certificate.non_plumbing()),
    )
    return certificate
