"""
Redex matching and rewrite steps.

A redex is found by collecting connected gate sets of the host with the
rule lhs's kinds, cutting each set out as a convex block and comparing the
block with the lhs.
"""
import logging
from dataclasses import dataclass

from diagrams.core import (
    Context, Diagram, connected_subsets, extract_block, from_slices, port_graph, whisker,
)
from diagrams.exceptions import StaleRedex

from .rules import Rule, RuleSet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Redex:
    rule: Rule
    gates: tuple[int, ...]
    context: Context
    top_gates: tuple[int, ...] = ()
    bottom_gates: tuple[int, ...] = ()

    @property
    def anchor(self) -> int:
        return min(self.gates)

    @property
    def key(self) -> tuple:
        return (self.rule.name, tuple(sorted(self.gates)))

    def overlaps(self, other: 'Redex') -> bool:
        return bool(set(self.gates) & set(other.gates))


@dataclass(frozen=True, eq=False)
class RewriteStep:
    """One rule application; steps are equal when source, rule and gates agree."""
    source: Diagram
    redex: Redex
    target: Diagram
    residuals: tuple = ()

    @property
    def rule(self) -> Rule:
        return self.redex.rule

    @property
    def gates(self) -> tuple[int, ...]:
        return self.redex.gates

    @property
    def structural(self) -> bool:
        return self.redex.rule.structural

    @property
    def key(self) -> tuple:
        return (self.source, self.redex.key)

    def __eq__(self, other):
        return isinstance(other, RewriteStep) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def residual_gate(self, gate: int):
        """Position in the target of a source gate outside the redex, else None."""
        return dict(self.residuals).get(gate)

    def label(self) -> str:
        return f'{self.rule.name}@{self.redex.anchor}'

    def __repr__(self):
        return f'<{self.label()}: {self.source} -> {self.target}>'


def _redex(rule: Rule, occurrence) -> Redex:
    return Redex(rule, occurrence.gates, occurrence.context, occurrence.top_gates, occurrence.bottom_gates)


def find_redexes(diagram: Diagram, rules: RuleSet) -> list[Redex]:
    graph = port_graph(diagram)
    found = []
    for index, rule in enumerate(rules):
        for subset in connected_subsets(graph, rule.lhs.gate_count, rule.lhs.kinds):
            occurrence = extract_block(diagram, subset)
            if occurrence is not None and occurrence.block == rule.lhs:
                found.append((index, min(subset), tuple(sorted(subset)), _redex(rule, occurrence)))
    found.sort(key=lambda item: item[:3])
    return [item[3] for item in found]


def redex_at(diagram: Diagram, rule: Rule, gates) -> Redex:
    occurrence = extract_block(diagram, set(gates))
    if occurrence is None or occurrence.block != rule.lhs:
        raise StaleRedex(f'no {rule.name} redex on gates {sorted(gates)} of {diagram}')
    return _redex(rule, occurrence)


def step(diagram: Diagram, redex: Redex) -> RewriteStep:
    """Apply a redex of `diagram`, keeping track of where the untouched gates go."""
    fresh = redex_at(diagram, redex.rule, redex.gates)
    if fresh.context != redex.context:
        raise StaleRedex(f'redex {redex.key} was computed for another diagram')
    target, tags = fresh.context.plug(fresh.rule.rhs)
    residuals = []
    for position, (part, index) in enumerate(tags):
        if part == 'top':
            residuals.append((fresh.top_gates[index], position))
        elif part == 'bottom':
            residuals.append((fresh.bottom_gates[index], position))
    return RewriteStep(diagram, fresh, target, tuple(sorted(residuals)))


def apply_redex(diagram: Diagram, redex: Redex) -> Diagram:
    return step(diagram, redex).target


def steps_from(diagram: Diagram, rules: RuleSet) -> list[RewriteStep]:
    return [step(diagram, r) for r in find_redexes(diagram, rules)]


def step_for(diagram: Diagram, rule: Rule, gates) -> RewriteStep:
    return step(diagram, redex_at(diagram, rule, gates))


def residual(moved: RewriteStep, after: RewriteStep) -> RewriteStep:
    """The step `moved` transported along the disjoint step `after`."""
    if set(moved.gates) & set(after.gates):
        raise StaleRedex('overlapping steps have no residual')
    mapping = dict(after.residuals)
    try:
        gates = [mapping[g] for g in moved.gates]
    except KeyError:
        raise StaleRedex('step gates do not survive the other step')
    return step_for(after.target, moved.rule, gates)


def whisker_step(inner: RewriteStep, context: Context) -> RewriteStep:
    """The step `inner` performed inside `context`."""
    host, tags = context.plug(inner.source)
    lookup = {tag: position for position, tag in enumerate(tags)}
    gates = [lookup[('mid', g)] for g in inner.gates]
    return step_for(host, inner.rule, gates)


def reverse_steps(diagram: Diagram, rules: RuleSet) -> list[RewriteStep]:
    """Every step of `rules` whose target is `diagram`."""
    sources = set()
    for rule in rules:
        if rule.rhs.is_identity:
            width = diagram.inputs
            cuts = [width] + [s.width_out for s in diagram.slices]
            n = rule.rhs.inputs
            for t, w_t in enumerate(cuts):
                for left in range(w_t - n + 1):
                    inserted = tuple(s.shifted(left, w_t - n - left) for s in rule.lhs.slices)
                    slices = diagram.slices[:t] + inserted + diagram.slices[t:]
                    sources.add(from_slices(diagram.inputs, slices))
        else:
            graph = port_graph(diagram)
            for subset in connected_subsets(graph, rule.rhs.gate_count, rule.rhs.kinds):
                occurrence = extract_block(diagram, subset)
                if occurrence is None:
                    continue
                ctx = occurrence.context
                # the rhs may carry extra pass-through wires on either side
                for i in range(ctx.left + 1):
                    for j in range(ctx.right + 1):
                        if whisker(occurrence.block, i, j) == rule.rhs:
                            widened = Context(ctx.top, ctx.left - i, ctx.right - j, ctx.bottom)
                            sources.add(widened.fill(rule.lhs))
    found = {}
    for source in sorted(sources, key=Diagram.sort_key):
        for s in steps_from(source, rules):
            if s.target == diagram:
                found.setdefault(s.key, s)
    return list(found.values())
