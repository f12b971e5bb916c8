"""
Breadth-first search for a cell decomposition between two parallel paths.

The nodes are rewrite paths out of one diagram. Two paths are adjacent when
one becomes the other by exchanging a segment for the other side of a cell:
either a disjoint square on two neighbouring steps or the square of a
critical peak that the caller accepts. The search grows from both ends and
returns the surgeries along the first meeting it finds.
"""
import logging
from collections import deque

from django.conf import settings

from diagrams.exceptions import BudgetExhausted, NotJoinable, StaleRedex
from rewriting.engine import residual, steps_from
from rewriting.rules import RuleSet

from .cells import disjoint_square, filler
from .certificates import Surgery

logger = logging.getLogger(__name__)


def search_budget() -> int:
    return getattr(settings, 'SMC_EXPANSION_BUDGET', 200000)


class PathSpace:
    """
    Rewrite paths with their steps interned as integers, so that a path is a
    small tuple and every swap or cell lookup is computed once.
    """

    def __init__(self, rules: RuleSet, accept):
        self.rules = rules
        self.accept = accept
        self.steps = []
        self._ids = {}
        self._siblings = {}
        self._swaps = {}
        self._cells = {}

    def intern(self, s) -> int:
        found = self._ids.get(s)
        if found is None:
            found = self._ids[s] = len(self.steps)
            self.steps.append(s)
        return found

    def path(self, steps) -> tuple[int, ...]:
        return tuple(self.intern(s) for s in steps)

    def siblings(self, i: int) -> tuple[int, ...]:
        """Every step leaving the source of step `i`."""
        found = self._siblings.get(i)
        if found is None:
            found = self._siblings[i] = self.path(steps_from(self.steps[i].source, self.rules))
        return found

    def swap(self, i: int, j: int):
        """(square, j', i') when step `j` after step `i` can run first, else None."""
        key = (i, j)
        if key not in self._swaps:
            self._swaps[key] = self._find_swap(i, j)
        return self._swaps[key]

    def _find_swap(self, i: int, j: int):
        first, second = self.steps[i], self.steps[j]
        for k in self.siblings(i):
            candidate = self.steps[k]
            if k == i or set(candidate.gates) & set(first.gates):
                continue
            try:
                if residual(candidate, first) != second:
                    continue
                moved = residual(first, candidate)
            except StaleRedex:
                continue
            return disjoint_square(first, candidate), k, self.intern(moved)
        return None

    def cells(self, i: int) -> tuple:
        """Accepted cells with a side starting at step `i`: (cell, forward, removed, inserted)."""
        found = self._cells.get(i)
        if found is None:
            found = self._cells[i] = tuple(self._overlapping(i))
        return found

    def _filler(self, first, second):
        try:
            return filler(first, second, self.rules)
        except (StaleRedex, NotJoinable) as exc:
            logger.debug('no cell for %s and %s: %s', first.label(), second.label(), exc)
            return None

    def _overlapping(self, i: int):
        first = self.steps[i]
        for k in self.siblings(i):
            other = self.steps[k]
            if k == i or not set(first.gates) & set(other.gates):
                continue
            for cell, forward in ((self._filler(first, other), True), (self._filler(other, first), False)):
                if cell is None or not self.accept(cell):
                    continue
                yield cell, forward, self.path(cell.side(forward).steps), self.path(cell.side(not forward).steps)

    def neighbours(self, path: tuple[int, ...]):
        for n, i in enumerate(path):
            if n + 1 < len(path):
                swapped = self.swap(i, path[n + 1])
                if swapped is not None:
                    cell, j, k = swapped
                    yield Surgery(n, cell, True), path[:n] + (j, k) + path[n + 2:]
            for cell, forward, removed, inserted in self.cells(i):
                if path[n:n + len(removed)] == removed:
                    yield Surgery(n, cell, forward), path[:n] + inserted + path[n + len(removed):]


def _chain(parents: dict, node) -> list:
    surgeries = []
    while parents[node] is not None:
        node, surgery = parents[node]
        surgeries.append(surgery)
    return surgeries


def connect(first, second, rules: RuleSet, accept, budget=None) -> list[Surgery]:
    """
    Surgeries turning the path `first` into the parallel path `second`, with
    indices counted from the start of the paths.
    """
    budget = search_budget() if budget is None else budget
    space = PathSpace(rules, accept)
    start, goal = space.path(first), space.path(second)
    if start == goal:
        return []
    parents = ({start: None}, {goal: None})
    frontiers = (deque([start]), deque([goal]))
    seen = 2
    while frontiers[0] and frontiers[1]:
        side = 0 if len(frontiers[0]) <= len(frontiers[1]) else 1
        for _ in range(len(frontiers[side])):
            path = frontiers[side].popleft()
            for surgery, nxt in space.neighbours(path):
                if nxt in parents[side]:
                    continue
                parents[side][nxt] = (path, surgery)
                if nxt in parents[1 - side]:
                    there = _chain(parents[0], nxt)[::-1]
                    back = [s.inverse() for s in _chain(parents[1], nxt)]
                    logger.debug('paths joined after %d nodes with %d surgeries', seen, len(there) + len(back))
                    return there + back
                frontiers[side].append(nxt)
                seen += 1
                if seen > budget:
                    raise BudgetExhausted(f'more than {budget} paths searched', steps=seen)
    raise NotJoinable(f'no accepted cells connect the two paths out of {first[0].source}')
