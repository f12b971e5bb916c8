from dataclasses import dataclass

from diagrams.core import Diagram
from diagrams.exceptions import CompositionMismatch

from .engine import RewriteStep


@dataclass(frozen=True)
class RewritePath:
    """A sequence of rewrite steps starting at `source`."""
    source: Diagram
    steps: tuple[RewriteStep, ...] = ()

    def __post_init__(self):
        current = self.source
        for s in self.steps:
            if s.source != current:
                raise CompositionMismatch(f'step {s.label()} does not start at {current}')
            current = s.target

    @property
    def target(self) -> Diagram:
        return self.steps[-1].target if self.steps else self.source

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __getitem__(self, index):
        return self.steps[index]

    def then(self, other: 'RewritePath') -> 'RewritePath':
        if other.source != self.target:
            raise CompositionMismatch(f'path ends at {self.target}, next starts at {other.source}')
        return RewritePath(self.source, self.steps + other.steps)

    def diagrams(self) -> list[Diagram]:
        return [self.source] + [s.target for s in self.steps]

    def rule_names(self) -> list[str]:
        return [s.rule.name for s in self.steps]

    def is_structural(self) -> bool:
        return all(s.structural for s in self.steps)

    def non_structural(self) -> list[RewriteStep]:
        return [s for s in self.steps if not s.structural]

    def __str__(self):
        if not self.steps:
            return str(self.source)
        parts = [str(self.source)]
        for s in self.steps:
            parts.append(f'--{s.label()}--> {s.target}')
        return ' '.join(parts)
