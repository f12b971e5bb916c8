"""
Zigzags: chains of rewrite steps, each run forwards or backwards.
"""
from dataclasses import dataclass

from diagrams.core import Diagram
from diagrams.exceptions import CompositionMismatch
from rewriting.engine import RewriteStep
from rewriting.paths import RewritePath


@dataclass(frozen=True)
class Move:
    step: RewriteStep
    forward: bool = True

    @property
    def start(self) -> Diagram:
        return self.step.source if self.forward else self.step.target

    @property
    def end(self) -> Diagram:
        return self.step.target if self.forward else self.step.source

    def inverse(self) -> 'Move':
        return Move(self.step, not self.forward)

    def label(self) -> str:
        return self.step.label() if self.forward else f'{self.step.label()}~'


@dataclass(frozen=True)
class ZigzagPath:
    start: Diagram
    moves: tuple[Move, ...] = ()

    def __post_init__(self):
        current = self.start
        for i, move in enumerate(self.moves):
            if move.start != current:
                raise CompositionMismatch(f'move {i} ({move.label()}) does not start at {current}')
            current = move.end

    @classmethod
    def from_path(cls, path: RewritePath) -> 'ZigzagPath':
        return cls(path.source, tuple(Move(s) for s in path.steps))

    @property
    def end(self) -> Diagram:
        return self.moves[-1].end if self.moves else self.start

    def __len__(self):
        return len(self.moves)

    def __iter__(self):
        return iter(self.moves)

    def then(self, other: 'ZigzagPath') -> 'ZigzagPath':
        if other.start != self.end:
            raise CompositionMismatch(f'zigzag ends at {self.end}, next starts at {other.start}')
        return ZigzagPath(self.start, self.moves + other.moves)

    def inverse(self) -> 'ZigzagPath':
        return ZigzagPath(self.end, tuple(m.inverse() for m in reversed(self.moves)))

    def diagrams(self) -> list[Diagram]:
        return [self.start] + [m.end for m in self.moves]

    def is_forward(self) -> bool:
        return all(m.forward for m in self.moves)

    def __str__(self):
        parts = [str(self.start)]
        for m in self.moves:
            arrow = f'--{m.step.label()}-->' if m.forward else f'<--{m.step.label()}--'
            parts.append(f'{arrow} {m.end}')
        return ' '.join(parts)
