"""
Brute-force references for the matcher, used by the tests.

`factorization_oracle` walks every interchange-equivalent slice sequence of a
diagram and looks at every window of consecutive slices, which needs no
convexity reasoning at all.
"""
from collections import deque

from diagrams.core import Diagram, _swap, from_slices

from .rules import RuleSet


def tagged_interchange_closure(diagram: Diagram) -> set[tuple]:
    start = tuple(enumerate(diagram.slices))
    seen = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for i in range(len(current) - 1):
            swapped = _swap(current[i][1], current[i + 1][1])
            if swapped is None:
                continue
            candidate = (
                current[:i]
                + ((current[i + 1][0], swapped[0]), (current[i][0], swapped[1]))
                + current[i + 2:]
            )
            if candidate not in seen:
                seen.add(candidate)
                queue.append(candidate)
    return seen


def factorization_oracle(diagram: Diagram, rules: RuleSet) -> set[tuple]:
    """Every (rule name, gate set) occurrence, found by exhaustive scheduling."""
    found = set()
    sequences = tagged_interchange_closure(diagram)
    for rule in rules:
        k = rule.lhs.gate_count
        for sequence in sequences:
            for i in range(len(sequence) - k + 1):
                window = sequence[i:i + k]
                a = min(s.left for _, s in window)
                b = min(s.right for _, s in window)
                width = window[0][1].width_in - a - b
                trimmed = [s.shifted(-a, -b) for _, s in window]
                if from_slices(width, trimmed) == rule.lhs:
                    found.add((rule.name, tuple(sorted(tag for tag, _ in window))))
    return found
