"""
Critical peaks: enumeration, joins and classification.

Local peaks are found by growing every rule lhs one gate at a time at its top
and bottom boundary and keeping each pair of overlapping redexes that covers
the grown diagram. Conflicts that wrap around an arbitrary subdiagram come
from six templates, instantiated at reduced inner representatives.
"""
import enum
import logging
from dataclasses import dataclass
from functools import lru_cache

from diagrams.core import Diagram, gate, identity, par_compose, seq_compose, whisker
from diagrams.exceptions import NotJoinable, ShapeMismatch
from diagrams.parser import parse_diagram
from diagrams.render import render_path
from rewriting.engine import Redex, RewriteStep, find_redexes, step, steps_from
from rewriting.normalize import bfs_join, leftmost_normalization, normalize, reachable, trace_path
from rewriting.paths import RewritePath
from rewriting.rules import RuleSet, builtin_rule_set

logger = logging.getLogger(__name__)

TERMINATING_SETS = ('M', 'F')


class PeakClass(enum.Enum):
    COHERENCE = 'coherence'
    KELLY = 'kelly'
    WEAK_KELLY = 'weak_kelly'
    SIMPLY_FOLDABLE = 'simply_foldable'
    STRONGLY_FOLDABLE = 'strongly_foldable'


CLASS_ORDER = (
    PeakClass.COHERENCE,
    PeakClass.KELLY,
    PeakClass.WEAK_KELLY,
    PeakClass.SIMPLY_FOLDABLE,
    PeakClass.STRONGLY_FOLDABLE,
)

COHERENCE_SOURCES = {
    'penta': '(m*id2);(m*id1);m',
    'tria': '(id1*e*id1);(m*id1);m',
    'inv': 's;s;m',
    'g': '(s*id1);(m*id1);m',
    'exa2': '(m*id1);s;m',
}


@lru_cache(maxsize=None)
def coherence_sources() -> dict[Diagram, str]:
    return {parse_diagram(text): name for name, text in COHERENCE_SOURCES.items()}


@dataclass(frozen=True)
class CriticalPeak:
    source: Diagram
    left: Redex
    right: Redex
    family: int | None = None
    inner: Diagram | None = None

    @property
    def key(self) -> tuple:
        return (self.source, frozenset((self.left.key, self.right.key)))

    @property
    def rule_pair(self) -> tuple[str, str]:
        return (self.left.rule.name, self.right.rule.name)

    def sort_key(self) -> tuple:
        return (self.source.sort_key(), self.left.key, self.right.key)

    def left_step(self) -> RewriteStep:
        return step(self.source, self.left)

    def right_step(self) -> RewriteStep:
        return step(self.source, self.right)

    def label(self) -> str:
        return f'{self.source} [{self.left.rule.name}@{self.left.anchor} | {self.right.rule.name}@{self.right.anchor}]'

    def __str__(self):
        return self.label()


@dataclass(frozen=True)
class JoinResult:
    """
    Two paths from the peak's targets to a common `meet`. `fold` holds, per
    side, how many steps lead to the first diagram the branches share.
    """
    left_path: RewritePath
    right_path: RewritePath
    meet: Diagram
    fold: tuple[int, int]


# ----------------------
# local peaks
# ----------------------

def _grow(diagram: Diagram):
    """Every diagram obtained by attaching one gate to the top or bottom boundary."""
    e, m, s = gate('e'), gate('m'), gate('s')
    p, q = diagram.inputs, diagram.outputs
    for c in range(p):
        yield seq_compose(whisker(e, c, p - 1 - c), diagram)
        yield seq_compose(whisker(m, c, p - 1 - c), diagram)
    for c in range(p - 1):
        yield seq_compose(whisker(s, c, p - 2 - c), diagram)
    if p:
        yield seq_compose(whisker(s, 0, p - 1), whisker(diagram, 1, 0))
        yield seq_compose(whisker(s, p - 1, 0), whisker(diagram, 0, 1))
    for g in (m, s):
        for c in range(q - 1):
            yield seq_compose(diagram, whisker(g, c, q - 2 - c))
        yield seq_compose(whisker(diagram, 1, 0), whisker(g, 0, q - 1))
        yield seq_compose(whisker(diagram, 0, 1), whisker(g, q - 1, 0))


def _covering_pairs(diagram: Diagram, rules: RuleSet, covered: int):
    redexes = find_redexes(diagram, rules)
    for i, a in enumerate(redexes):
        for b in redexes[i + 1:]:
            if a.overlaps(b) and len(set(a.gates) | set(b.gates)) == covered:
                yield a, b


def local_peaks(diagram: Diagram, rules: RuleSet) -> list[CriticalPeak]:
    return [CriticalPeak(diagram, a, b) for a, b in _covering_pairs(diagram, rules, diagram.gate_count)]


# ----------------------
# global conflicts
# ----------------------

@dataclass(frozen=True)
class GlobalFamily:
    number: int
    description: str
    rules: tuple[str, str]
    suffix: tuple


def _prefix(n: int) -> Diagram:
    s = gate('s')
    return seq_compose(par_compose(s, identity(1 + n)), par_compose(identity(1), par_compose(s, identity(n))))


def _slice(*parts) -> Diagram:
    result = parts[0]
    for part in parts[1:]:
        result = par_compose(result, part)
    return result


def _suffix(shape: tuple, inner: Diagram) -> list[Diagram]:
    """
    Expand a suffix shape. Each row is a tuple of atoms: a gate name, 'phi' for
    the inner diagram, ('id', k) for k plain wires, or ('rest', k) for k wires
    beside the inner's outputs other than its first.
    """
    extra = inner.outputs - 1
    rows = []
    for row in shape:
        parts = []
        for atom in row:
            if atom == 'phi':
                parts.append(inner)
            elif isinstance(atom, tuple) and atom[0] == 'rest':
                parts.append(identity(atom[1] + extra))
            elif isinstance(atom, tuple):
                parts.append(identity(atom[1]))
            else:
                parts.append(gate(atom))
        rows.append(_slice(*parts))
    return rows


GLOBAL_FAMILIES = {
    1: GlobalFamily(1, 'swap triangle over swap triangle', ('yb', 'yb'), (
        ('s', 'phi'), (('id', 1), 's', ('rest', 0)), ('s', ('rest', 1)))),
    2: GlobalFamily(2, 'swap triangle over merge under swap', ('yb', 'merge_swap'), (
        ('s', 'phi'), (('id', 1), 'm', ('rest', 0)), ('s', ('rest', 0)))),
    3: GlobalFamily(3, 'merge through two swaps, then swapped', ('merge_right', 'merge_left'), (
        ('m', 'phi'), ('s', ('rest', 0)))),
    4: GlobalFamily(4, 'swap triangle over merge through swaps', ('yb', 'merge_right'), (
        ('s', 'phi'), (('id', 1), 's', ('rest', 0)), ('m', ('rest', 1)))),
    5: GlobalFamily(5, 'swap triangle over the parallel associator', ('yb', 'gamma'), (
        ('s', 'phi'), (('id', 1), 'm', ('rest', 0)), ('m', ('rest', 0)))),
    6: GlobalFamily(6, 'merge through swaps over the associator', ('merge_right', 'alpha'), (
        ('m', 'phi'), ('m', ('rest', 0)))),
}

INNER_REPRESENTATIVES = ('id1', 's', 'm')


def family_source(number: int, inner: Diagram) -> Diagram:
    family = GLOBAL_FAMILIES.get(number)
    if family is None:
        raise ShapeMismatch(f'there is no global family {number}')
    if inner.inputs < 1 or inner.outputs < 1:
        raise ShapeMismatch(
            f'the inner diagram needs a left wire on both sides, got {inner.inputs}->{inner.outputs}'
        )
    result = _prefix(inner.inputs - 1)
    for row in _suffix(family.suffix, inner):
        result = seq_compose(result, row)
    return result


def reduce_global(family_id: int, inner: Diagram, rules: RuleSet | None = None) -> CriticalPeak:
    """The family's conflict around the structural normal form of `inner`."""
    rules = rules or builtin_rule_set('F')
    reduced, _ = normalize(inner, rules.structural())
    source = family_source(family_id, reduced)
    wanted = sorted(GLOBAL_FAMILIES[family_id].rules)
    for a, b in _covering_pairs(source, rules, source.gate_count - reduced.gate_count):
        if sorted((a.rule.name, b.rule.name)) == wanted:
            return CriticalPeak(source, a, b, family=family_id, inner=reduced)
    raise ShapeMismatch(f'family {family_id} around {reduced} has no {"/".join(wanted)} conflict')


def applicable_families(rules: RuleSet) -> list[int]:
    return [n for n, f in GLOBAL_FAMILIES.items() if all(name in rules for name in f.rules)]


# ----------------------
# enumeration
# ----------------------

def enumerate_peaks(rules: RuleSet, bound: int = 4) -> list[CriticalPeak]:
    return list(_enumerate_peaks(rules, bound))


@lru_cache(maxsize=16)
def _enumerate_peaks(rules: RuleSet, bound: int) -> tuple[CriticalPeak, ...]:
    extra = max(0, min(bound, rules.max_lhs_gates) - 1)
    candidates = {rule.lhs for rule in rules}
    layer = set(candidates)
    for _ in range(extra):
        layer = {grown for d in layer for grown in _grow(d)} - candidates
        candidates |= layer
    found = {}
    for diagram in sorted(candidates, key=Diagram.sort_key):
        for peak in local_peaks(diagram, rules):
            found.setdefault(peak.key, peak)
    local = len(found)
    for number in applicable_families(rules):
        for text in INNER_REPRESENTATIVES:
            peak = reduce_global(number, parse_diagram(text), rules)
            found.setdefault(peak.key, peak)
    logger.info(
        'rule set %s: %d candidate sources, %d local peaks, %d global',
        rules.name, len(candidates), local, len(found) - local,
    )
    return tuple(sorted(found.values(), key=CriticalPeak.sort_key))


# ----------------------
# joins
# ----------------------

def _single(rule) -> RuleSet:
    return RuleSet(rule.name, (rule,))


def _shortest(ends: dict) -> Diagram:
    return min(ends, key=lambda d: (len(ends[d]), d.sort_key()))


def _folds(peak_step: RewriteStep, parents: dict, rule, structural: RuleSet) -> dict:
    """
    Diagrams reached from the peak step's target with exactly one `rule` step
    on the whole branch, each with its shortest path.
    """
    start = peak_step.target
    if not peak_step.structural:
        if peak_step.rule.name != rule.name:
            return {}
        return {d: trace_path(parents, d, start) for d in parents}
    ends = {}
    for d in sorted(parents, key=Diagram.sort_key):
        before = trace_path(parents, d, start)
        for s in steps_from(d, _single(rule)):
            after_parents = reachable(s.target, structural)
            for e in after_parents:
                path = before.then(RewritePath(d, (s,))).then(trace_path(after_parents, e, s.target))
                if e not in ends or len(path) < len(ends[e]):
                    ends[e] = path
    return ends


def fold_join(peak: CriticalPeak, rules: RuleSet):
    """
    Join the peak's branches up to a common diagram using structural steps and
    at most one shared non-structural rule. Returns (left, right) or None.
    """
    structural = rules.structural()
    left_step, right_step = peak.left_step(), peak.right_step()
    left_parents = reachable(left_step.target, structural)
    right_parents = reachable(right_step.target, structural)
    if left_step.structural and right_step.structural:
        common = {
            d: len(trace_path(left_parents, d, left_step.target)) + len(trace_path(right_parents, d, right_step.target))
            for d in left_parents if d in right_parents
        }
        if common:
            meet = min(common, key=lambda d: (common[d], d.sort_key()))
            return trace_path(left_parents, meet, left_step.target), trace_path(right_parents, meet, right_step.target)
    for rule in rules:
        if rule.structural:
            continue
        left_ends = _folds(left_step, left_parents, rule, structural)
        if not left_ends:
            continue
        right_ends = _folds(right_step, right_parents, rule, structural)
        common = {d: len(left_ends[d]) + len(right_ends[d]) for d in left_ends if d in right_ends}
        if common:
            meet = min(common, key=lambda d: (common[d], d.sort_key()))
            return left_ends[meet], right_ends[meet]
    return None


def _first_common(left: RewritePath, right: RewritePath) -> tuple[int, int]:
    right_index = {d: j for j, d in reversed(list(enumerate(right.diagrams())))}
    for i, d in enumerate(left.diagrams()):
        if d in right_index:
            return i, right_index[d]
    return len(left), len(right)


def join(peak: CriticalPeak, rules: RuleSet, budget=None, branches=None) -> JoinResult:
    """
    Join both branches of `peak`. `branches` may supply paths from the two
    targets to a common diagram; otherwise a folding join is searched for
    terminating rule sets and a bounded breadth-first join for the rest.
    Folded joins are extended to the normal form by a shared tail.
    """
    left_target, right_target = peak.left_step().target, peak.right_step().target
    if rules.name not in TERMINATING_SETS:
        try:
            left, right = bfs_join(left_target, right_target, rules, budget=budget)
        except NotJoinable as exc:
            logger.info('peak %s is not joinable: %s', peak, exc)
            raise NotJoinable(str(exc), peak=peak)
        return JoinResult(left, right, left.target, (len(left), len(right)))
    folded = branches or fold_join(peak, rules)
    if folded is not None:
        left, right = folded
        if left.target != right.target:
            raise NotJoinable(f'branches of {peak} end at {left.target} and {right.target}', peak=peak)
        tail = leftmost_normalization(left.target, rules)
        return JoinResult(left.then(tail), right.then(tail), tail.target, (len(left), len(right)))
    left = leftmost_normalization(left_target, rules)
    right = leftmost_normalization(right_target, rules)
    if left.target != right.target:
        raise NotJoinable(f'{peak} normalizes to {left.target} and {right.target}', peak=peak)
    return JoinResult(left, right, left.target, _first_common(left, right))


def classify(peak: CriticalPeak, result: JoinResult) -> PeakClass:
    left_steps = [peak.left_step()] + list(result.left_path.steps[:result.fold[0]])
    right_steps = [peak.right_step()] + list(result.right_path.steps[:result.fold[1]])
    left_rules = [s.rule.name for s in left_steps if not s.structural]
    right_rules = [s.rule.name for s in right_steps if not s.structural]
    if not left_rules and not right_rules:
        return PeakClass.STRONGLY_FOLDABLE
    if peak.source in coherence_sources():
        return PeakClass.COHERENCE
    if not peak.left.rule.structural and not peak.right.rule.structural:
        return PeakClass.KELLY
    if len(left_rules) == len(right_rules) == 1 and left_rules == right_rules:
        return PeakClass.SIMPLY_FOLDABLE
    return PeakClass.WEAK_KELLY


def render_peak(peak: CriticalPeak, result: JoinResult | None = None) -> str:
    drawings = []
    for first, path in ((peak.left_step(), result and result.left_path), (peak.right_step(), result and result.right_path)):
        steps = [first] + (list(path.steps) if path else [])
        drawings.append(render_path([peak.source] + [s.target for s in steps], [s.label() for s in steps]))
    return '\n\n'.join(drawings)
