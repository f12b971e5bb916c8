"""
Normalization strategies and bounded searches over reducts.
"""
import logging
from collections import deque
from functools import lru_cache

import numpy as np
from django.conf import settings

from diagrams.core import Diagram
from diagrams.exceptions import BudgetExhausted, NotJoinable

from .engine import RewriteStep, find_redexes, step, steps_from
from .paths import RewritePath
from .rules import RuleSet, structural_rules

logger = logging.getLogger(__name__)

LEFTMOST = 'leftmost'
RANDOM = 'random'


def step_budget() -> int:
    return getattr(settings, 'SMC_STEP_BUDGET', 10000)


def normalize(diagram: Diagram, rules: RuleSet, strategy: str = LEFTMOST, seed=None, budget=None):
    """Rewrite until no rule applies. Returns (normal form, path)."""
    if strategy == LEFTMOST and budget is None:
        path = leftmost_normalization(diagram, rules)
        return path.target, path
    budget = step_budget() if budget is None else budget
    rng = np.random.default_rng(seed) if strategy == RANDOM else None
    if strategy not in (LEFTMOST, RANDOM):
        raise ValueError(f'unknown strategy {strategy!r}')
    current = diagram
    steps = []
    while True:
        redexes = find_redexes(current, rules)
        if not redexes:
            break
        if len(steps) >= budget:
            logger.info('budget of %d steps exhausted normalizing %s', budget, diagram)
            raise BudgetExhausted(f'no normal form within {budget} steps', steps=len(steps))
        if rng is None:
            chosen = min(enumerate(redexes), key=lambda item: (item[1].anchor, item[0]))[1]
        else:
            chosen = redexes[int(rng.integers(len(redexes)))]
        taken = step(current, chosen)
        steps.append(taken)
        current = taken.target
    return current, RewritePath(diagram, tuple(steps))


@lru_cache(maxsize=8192)
def leftmost_normalization(diagram: Diagram, rules: RuleSet) -> RewritePath:
    budget = step_budget()
    current = diagram
    steps = []
    while True:
        redexes = find_redexes(current, rules)
        if not redexes:
            return RewritePath(diagram, tuple(steps))
        if len(steps) >= budget:
            raise BudgetExhausted(f'no normal form within {budget} steps', steps=len(steps))
        chosen = min(enumerate(redexes), key=lambda item: (item[1].anchor, item[0]))[1]
        taken = step(current, chosen)
        steps.append(taken)
        current = taken.target


def normal_form(diagram: Diagram, rules: RuleSet) -> Diagram:
    return leftmost_normalization(diagram, rules).target


def is_normal(diagram: Diagram, rules: RuleSet) -> bool:
    return not find_redexes(diagram, rules)


def structural_normal_form(diagram: Diagram):
    return normalize(diagram, structural_rules())


def closure(diagram: Diagram, rules: RuleSet, budget=None) -> dict[Diagram, list[RewriteStep]]:
    """Every reduct of `diagram` with its outgoing steps."""
    budget = step_budget() if budget is None else budget
    graph = {}
    queue = deque([diagram])
    while queue:
        current = queue.popleft()
        if current in graph:
            continue
        if len(graph) >= budget:
            raise BudgetExhausted(f'more than {budget} reducts of {diagram}', steps=len(graph))
        graph[current] = steps_from(current, rules)
        for s in graph[current]:
            if s.target not in graph:
                queue.append(s.target)
    return graph


def trace_path(parents: dict, node: Diagram, start: Diagram) -> RewritePath:
    """Follow breadth-first parent steps back from `node` to `start`."""
    steps = []
    while node != start:
        s = parents[node]
        steps.append(s)
        node = s.source
    return RewritePath(start, tuple(reversed(steps)))


def bfs_join(first: Diagram, second: Diagram, rules: RuleSet, budget=None):
    """Shortest pair of paths from two diagrams to a common reduct."""
    budget = step_budget() if budget is None else budget
    parents = ({first: None}, {second: None})
    frontiers = (deque([first]), deque([second]))
    expanded = 0
    while True:
        common = [d for d in parents[0] if d in parents[1]]
        if common:
            meet = min(common, key=lambda d: (len(trace_path(parents[0], d, first)) + len(trace_path(parents[1], d, second)), d.sort_key()))
            return trace_path(parents[0], meet, first), trace_path(parents[1], meet, second)
        if not frontiers[0] and not frontiers[1]:
            raise NotJoinable(f'{first} and {second} have no common reduct')
        for side in (0, 1):
            level = len(frontiers[side])
            for _ in range(level):
                if expanded >= budget:
                    raise NotJoinable(f'no common reduct of {first} and {second} within {budget} steps')
                current = frontiers[side].popleft()
                expanded += 1
                for s in steps_from(current, rules):
                    if s.target not in parents[side]:
                        parents[side][s.target] = s
                        frontiers[side].append(s.target)


def reachable(diagram: Diagram, rules: RuleSet, budget=None) -> dict:
    """
    Breadth-first parent map over every reduct of `diagram`: each reduct is
    mapped to the step that first reached it (None for `diagram` itself).
    """
    budget = step_budget() if budget is None else budget
    parents = {diagram: None}
    queue = deque([diagram])
    while queue:
        current = queue.popleft()
        for s in steps_from(current, rules):
            if s.target in parents:
                continue
            if len(parents) >= budget:
                raise BudgetExhausted(f'more than {budget} reducts of {diagram}', steps=len(parents))
            parents[s.target] = s
            queue.append(s.target)
    return parents
