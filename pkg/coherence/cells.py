"""
Four-cells: pairs of parallel rewrite paths that a certificate may exchange.

Overlapping steps are filled by the confluence square of their critical peak,
cut out of the host and whiskered back into it. The five coherence peaks give
the base cells; foldable, Kelly and weak-Kelly peaks give cells named after
their fixture id. Non-overlapping steps commute in a disjoint square.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache

from diagrams.core import Context, Diagram, extract_block, port_graph
from diagrams.exceptions import NotParallel, StaleRedex
from peaks.fixtures import load_fixtures, matches
from peaks.peaks import COHERENCE_SOURCES, CriticalPeak, PeakClass, classify, coherence_sources, join
from rewriting.engine import RewriteStep, redex_at, residual, whisker_step
from rewriting.paths import RewritePath
from rewriting.rules import RuleSet

logger = logging.getLogger(__name__)

BASE_CELLS = tuple(COHERENCE_SOURCES)
DISJOINT_SQUARE = 'disjoint_square'
STALE_CANCEL = 'stale_cancel'
PLUMBING = (DISJOINT_SQUARE, STALE_CANCEL)
FOLDABLE = 'foldable'
KELLY = 'kelly'
WEAK_KELLY = 'weak_kelly'

PEAK_PREFIX = {
    PeakClass.SIMPLY_FOLDABLE: FOLDABLE,
    PeakClass.STRONGLY_FOLDABLE: FOLDABLE,
    PeakClass.KELLY: KELLY,
    PeakClass.WEAK_KELLY: WEAK_KELLY,
}


def whisker_path(path: RewritePath, context: Context) -> RewritePath:
    if context.is_trivial():
        return path
    return RewritePath(context.fill(path.source), tuple(whisker_step(s, context) for s in path.steps))


@dataclass(frozen=True)
class FourCell:
    name: str
    left: RewritePath
    right: RewritePath

    def __post_init__(self):
        if self.left.source != self.right.source or self.left.target != self.right.target:
            raise NotParallel(f'cell {self.name}: sides run {self.left.source} -> {self.left.target} and {self.right.source} -> {self.right.target}')

    @property
    def kind(self) -> str:
        return self.name.split('(', 1)[0]

    @property
    def peak_id(self) -> str | None:
        if '(' not in self.name:
            return None
        return self.name[len(self.kind) + 1:-1]

    @property
    def is_plumbing(self) -> bool:
        return self.kind in PLUMBING

    @property
    def is_base(self) -> bool:
        return self.kind in BASE_CELLS

    @property
    def source(self) -> Diagram:
        return self.left.source

    def side(self, left: bool) -> RewritePath:
        return self.left if left else self.right

    def whiskered(self, context: Context) -> 'FourCell':
        return FourCell(self.name, whisker_path(self.left, context), whisker_path(self.right, context))


def disjoint_square(first: RewriteStep, second: RewriteStep) -> FourCell:
    left = RewritePath(first.source, (first, residual(second, first)))
    right = RewritePath(second.source, (second, residual(first, second)))
    return FourCell(DISJOINT_SQUARE, left, right)


def convex_hull(host: Diagram, gates) -> set[int]:
    """`gates` plus every gate lying on a path between two of them."""
    graph = port_graph(host)
    chosen = set(gates)

    def spread(follow):
        seen = set()
        stack = list(chosen)
        while stack:
            for h in follow(stack.pop()):
                if h not in seen:
                    seen.add(h)
                    stack.append(h)
        return seen

    return chosen | (spread(graph.successors) & spread(graph.predecessors))


@lru_cache(maxsize=None)
def _fixtures_by_source() -> dict:
    grouped = {}
    for fixture in load_fixtures():
        grouped.setdefault(fixture.source, []).append(fixture)
    return grouped


def peak_id(peak: CriticalPeak) -> str:
    for fixture in _fixtures_by_source().get(peak.source, ()):
        if matches(fixture, peak):
            return fixture.name
    return str(peak.source)


def peak_name(peak: CriticalPeak, klass: PeakClass) -> str:
    if klass is PeakClass.COHERENCE:
        return coherence_sources()[peak.source]
    return f'{PEAK_PREFIX[klass]}({peak_id(peak)})'


@lru_cache(maxsize=None)
def core_cell(peak: CriticalPeak, rules: RuleSet) -> tuple[FourCell, PeakClass]:
    """The confluence square of `peak`, left side first."""
    result = join(peak, rules)
    klass = classify(peak, result)
    left = RewritePath(peak.source, (peak.left_step(),) + result.left_path.steps)
    right = RewritePath(peak.source, (peak.right_step(),) + result.right_path.steps)
    cell = FourCell(peak_name(peak, klass), left, right)
    logger.debug('cell %s for %s: %d/%d steps', cell.name, peak, len(left), len(right))
    return cell, klass


@dataclass(frozen=True)
class PeakSite:
    """A critical peak found inside a host: its square and the surrounding context."""
    peak: CriticalPeak
    klass: PeakClass
    core: FourCell
    context: Context

    @property
    def cell(self) -> FourCell:
        return self.core.whiskered(self.context)


def locate_peak(first: RewriteStep, second: RewriteStep, rules: RuleSet) -> PeakSite:
    host = first.source
    hull = convex_hull(host, set(first.gates) | set(second.gates))
    occurrence = extract_block(host, hull)
    if occurrence is None:
        raise StaleRedex(f'steps {first.label()} and {second.label()} of {host} do not span a block')
    position = {h: j for j, h in enumerate(occurrence.gates)}
    peak = CriticalPeak(
        occurrence.block,
        redex_at(occurrence.block, first.rule, [position[g] for g in first.gates]),
        redex_at(occurrence.block, second.rule, [position[g] for g in second.gates]),
    )
    core, klass = core_cell(peak, rules)
    return PeakSite(peak, klass, core, occurrence.context)


def filler(first: RewriteStep, second: RewriteStep, rules: RuleSet) -> FourCell:
    """A cell whose sides start with `first` and `second`."""
    if set(first.gates) & set(second.gates):
        return locate_peak(first, second, rules).cell
    return disjoint_square(first, second)
