"""
Monochrome string diagrams built from the gates m (merge), e (unit) and s (swap).

A diagram is stored as its leftmost-earliest schedule: one whiskered gate per
slice, top to bottom. Two diagrams denote the same morphism exactly when their
stored schedules are equal, so dataclass equality and hashing are diagram
equality.
"""
from __future__ import annotations

import enum
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Hashable, Iterable, NamedTuple, Sequence

from django.conf import settings

from .exceptions import ArityMismatch, CapacityExceeded, MalformedDiagram

logger = logging.getLogger(__name__)


class GateKind(enum.Enum):
    E = 'e'
    M = 'm'
    S = 's'

    @property
    def inputs(self) -> int:
        return _ARITY[self][0]

    @property
    def outputs(self) -> int:
        return _ARITY[self][1]


_ARITY = {GateKind.M: (2, 1), GateKind.E: (0, 1), GateKind.S: (2, 2)}


class WhiskeredGate(NamedTuple):
    """A gate with `left` wires passing on its left and `right` on its right."""
    left: int
    gate: GateKind
    right: int

    @property
    def width_in(self) -> int:
        return self.left + self.gate.inputs + self.right

    @property
    def width_out(self) -> int:
        return self.left + self.gate.outputs + self.right

    def shifted(self, left: int = 0, right: int = 0) -> 'WhiskeredGate':
        return WhiskeredGate(self.left + left, self.gate, self.right + right)


def diagram_capacity() -> int:
    return getattr(settings, 'SMC_DIAGRAM_CAPACITY', 64)


@dataclass(frozen=True)
class Diagram:
    inputs: int
    outputs: int
    slices: tuple[WhiskeredGate, ...] = ()

    @property
    def gate_count(self) -> int:
        return len(self.slices)

    @property
    def kinds(self) -> tuple[GateKind, ...]:
        return tuple(s.gate for s in self.slices)

    @property
    def is_identity(self) -> bool:
        return not self.slices

    def then(self, other: 'Diagram') -> 'Diagram':
        return seq_compose(self, other)

    def tensor(self, other: 'Diagram') -> 'Diagram':
        return par_compose(self, other)

    def sort_key(self) -> tuple:
        return (len(self.slices), self.inputs, self.outputs,
                tuple((s.left, s.gate.value, s.right) for s in self.slices))

    def to_expression(self) -> str:
        if not self.slices:
            return f'id{self.inputs}'
        return ';'.join(_slice_expression(s) for s in self.slices)

    def __str__(self) -> str:
        return self.to_expression()


def _slice_expression(s: WhiskeredGate) -> str:
    parts = ([f'id{s.left}'] if s.left else []) + [s.gate.value] + ([f'id{s.right}'] if s.right else [])
    if len(parts) == 1:
        return parts[0]
    return '(' + '*'.join(parts) + ')'


# ----------------------
# scheduling
# ----------------------

def _swap(above: WhiskeredGate, below: WhiskeredGate):
    """
    Interchange two adjacent slices when the lower one does not touch the
    outputs of the upper one. Returns (new_above, new_below) or None.
    """
    out_above = above.gate.outputs
    in_below = below.gate.inputs
    if below.left + in_below <= above.left:
        lifted = WhiskeredGate(
            below.left, below.gate,
            above.left + above.gate.inputs + above.right - below.left - in_below,
        )
        lowered = WhiskeredGate(above.left - in_below + below.gate.outputs, above.gate, above.right)
        return lifted, lowered
    if below.left >= above.left + out_above:
        lifted = WhiskeredGate(below.left - out_above + above.gate.inputs, below.gate, below.right)
        lowered = WhiskeredGate(above.left, above.gate, above.right - in_below + below.gate.outputs)
        return lifted, lowered
    return None


def _lift(tagged: list, index: int):
    """Move slice `index` to the top of the list, or return None if blocked."""
    tag, current = tagged[index]
    lowered = []
    for i in range(index - 1, -1, -1):
        above_tag, above = tagged[i]
        swapped = _swap(above, current)
        if swapped is None:
            return None
        current, moved = swapped
        lowered.append((above_tag, moved))
    lowered.reverse()
    return [(tag, current)] + lowered + list(tagged[index + 1:])


def _priority(s: WhiskeredGate) -> int:
    # a unit sitting in gap l goes before a gate whose inputs start at wire l
    return 2 * s.left - 1 if s.gate.inputs == 0 else 2 * s.left


def _frontier_candidates(tagged: list, allowed=None):
    found = []
    for j, (tag, _) in enumerate(tagged):
        if allowed is not None and tag not in allowed:
            continue
        lifted = _lift(tagged, j)
        if lifted is not None:
            found.append(lifted)
    return found


def _choose(candidates: list):
    best = min(_priority(c[0][1]) for c in candidates)
    tied = [c for c in candidates if _priority(c[0][1]) == best]
    if len(tied) == 1:
        return tied[0]
    # several units in the same gap: take the leftmost one
    gap = tied[0][0][1].left
    tied_tags = {c[0][0] for c in tied}
    for cand in tied:
        rest = cand[1:]
        ok = True
        for j, (tag, _) in enumerate(rest):
            if tag in tied_tags and tag != cand[0][0]:
                lifted = _lift(rest, j)
                if lifted is None or lifted[0][1].left != gap + 1:
                    ok = False
                    break
        if ok:
            return cand
    return tied[0]


def schedule_tagged(tagged: Sequence[tuple[Hashable, WhiskeredGate]], allowed=None):
    """Greedy leftmost-earliest emission of tagged slices; returns (emitted, rest)."""
    remaining = list(tagged)
    emitted = []
    while remaining:
        candidates = _frontier_candidates(remaining, allowed)
        if not candidates:
            break
        chosen = _choose(candidates)
        emitted.append(chosen[0])
        remaining = chosen[1:]
    return emitted, remaining


def _check_chain(inputs: int, slices: Sequence[WhiskeredGate]) -> int:
    width = inputs
    for s in slices:
        if min(s.left, s.right) < 0:
            raise MalformedDiagram(f'negative whiskering in slice {s}')
        if s.width_in != width:
            raise MalformedDiagram(f'slice {s} expects {s.width_in} wires, found {width}')
        width = s.width_out
    return width


def _check_capacity(inputs: int, slices: Sequence[WhiskeredGate]) -> None:
    capacity = diagram_capacity()
    widest = max([inputs] + [max(s.width_in, s.width_out) for s in slices])
    if widest > capacity or len(slices) > capacity:
        raise CapacityExceeded(f'diagram with {len(slices)} gates and width {widest} exceeds capacity {capacity}')


def canonicalize_tagged(inputs: int, tagged: Sequence[tuple[Hashable, WhiskeredGate]]):
    """Canonical diagram of tagged slices plus the tags in canonical gate order."""
    slices = [s for _, s in tagged]
    outputs = _check_chain(inputs, slices)
    _check_capacity(inputs, slices)
    emitted, rest = schedule_tagged(tagged)
    if rest:
        raise MalformedDiagram('schedule could not be completed')
    diagram = Diagram(inputs, outputs, tuple(s for _, s in emitted))
    return diagram, tuple(tag for tag, _ in emitted)


def from_slices(inputs: int, slices: Iterable[WhiskeredGate]) -> Diagram:
    diagram, _ = canonicalize_tagged(inputs, list(enumerate(slices)))
    return diagram


# ----------------------
# public operations
# ----------------------

def identity(n: int) -> Diagram:
    if n < 0:
        raise MalformedDiagram('identity needs a non-negative width')
    if n > diagram_capacity():
        raise CapacityExceeded(f'identity of width {n} exceeds capacity')
    return Diagram(n, n, ())


def gate(kind: GateKind | str) -> Diagram:
    kind = GateKind(kind)
    return Diagram(kind.inputs, kind.outputs, (WhiskeredGate(0, kind, 0),))


def seq_compose(first: Diagram, second: Diagram) -> Diagram:
    return seq_compose_tagged(first, second)[0]


def seq_compose_tagged(first: Diagram, second: Diagram):
    """Vertical composition; tags are ('first', i) or ('second', i)."""
    if first.outputs != second.inputs:
        raise ArityMismatch(f'cannot compose {first.outputs} outputs with {second.inputs} inputs')
    tagged = [(('first', i), s) for i, s in enumerate(first.slices)]
    tagged += [(('second', i), s) for i, s in enumerate(second.slices)]
    return canonicalize_tagged(first.inputs, tagged)


def par_compose(left: Diagram, right: Diagram) -> Diagram:
    tagged = [(i, s.shifted(right=right.inputs)) for i, s in enumerate(left.slices)]
    tagged += [(len(left.slices) + i, s.shifted(left=left.outputs)) for i, s in enumerate(right.slices)]
    return canonicalize_tagged(left.inputs + right.inputs, tagged)[0]


def whisker(diagram: Diagram, left: int = 0, right: int = 0) -> Diagram:
    return par_compose(par_compose(identity(left), diagram), identity(right))


def canonical_form(diagram: Diagram) -> Diagram:
    return from_slices(diagram.inputs, diagram.slices)


def equals(first: Diagram, second: Diagram) -> bool:
    return canonical_form(first) == canonical_form(second)


# ----------------------
# port graph
# ----------------------

@dataclass(frozen=True)
class PortGraph:
    """
    Gates as nodes; `sources` maps every consumed port, a gate input
    (gate, k) or an interface output ('out', j), to the port feeding it,
    either ('in', i) or a gate output (gate, k).
    """
    inputs: int
    outputs: int
    kinds: tuple[GateKind, ...]
    sources: dict = field(hash=False, compare=False)
    placement: tuple[WhiskeredGate, ...] = ()

    def successors(self, g: int) -> set[int]:
        return {t[0] for t, s in self.sources.items() if s[0] == g and t[0] != 'out'}

    def predecessors(self, g: int) -> set[int]:
        return {s[0] for t, s in self.sources.items() if t[0] == g and s[0] != 'in'}

    def neighbours(self, g: int) -> set[int]:
        return self.successors(g) | self.predecessors(g)

    def to_diagram(self) -> Diagram:
        return from_slices(self.inputs, self.placement)


def port_graph(diagram: Diagram) -> PortGraph:
    frontier = [('in', i) for i in range(diagram.inputs)]
    sources = {}
    for g, s in enumerate(diagram.slices):
        consumed = frontier[s.left:s.left + s.gate.inputs]
        for k, src in enumerate(consumed):
            sources[(g, k)] = src
        produced = [(g, k) for k in range(s.gate.outputs)]
        frontier = frontier[:s.left] + produced + frontier[s.left + s.gate.inputs:]
    for j, src in enumerate(frontier):
        sources[('out', j)] = src
    return PortGraph(diagram.inputs, diagram.outputs, diagram.kinds, sources, diagram.slices)


# ----------------------
# contexts and blocks
# ----------------------

@dataclass(frozen=True)
class Context:
    """A host with a hole: top ; (id_left * [] * id_right) ; bottom."""
    top: Diagram
    left: int
    right: int
    bottom: Diagram

    @property
    def hole_inputs(self) -> int:
        return self.top.outputs - self.left - self.right

    @property
    def hole_outputs(self) -> int:
        return self.bottom.inputs - self.left - self.right

    @classmethod
    def trivial(cls, inputs: int, outputs: int) -> 'Context':
        return cls(identity(inputs), 0, 0, identity(outputs))

    def is_trivial(self) -> bool:
        return self.top.is_identity and self.bottom.is_identity and not (self.left or self.right)

    def plug(self, inner: Diagram):
        """Host diagram plus, per canonical gate, ('top'|'mid'|'bottom', index)."""
        if inner.inputs != self.hole_inputs or inner.outputs != self.hole_outputs:
            raise ArityMismatch(
                f'context hole is {self.hole_inputs}->{self.hole_outputs}, '
                f'got {inner.inputs}->{inner.outputs}'
            )
        tagged = [(('top', i), s) for i, s in enumerate(self.top.slices)]
        tagged += [(('mid', i), s.shifted(self.left, self.right)) for i, s in enumerate(inner.slices)]
        tagged += [(('bottom', i), s) for i, s in enumerate(self.bottom.slices)]
        return canonicalize_tagged(self.top.inputs, tagged)

    def fill(self, inner: Diagram) -> Diagram:
        return self.plug(inner)[0]

    def inside(self, outer: 'Context') -> 'Context':
        """The context obtained by placing this context's host into `outer`'s hole."""
        top = seq_compose(outer.top, whisker(self.top, outer.left, outer.right))
        bottom = seq_compose(whisker(self.bottom, outer.left, outer.right), outer.bottom)
        return Context(top, outer.left + self.left, self.right + outer.right, bottom)


@dataclass(frozen=True)
class Occurrence:
    """A convex block of a host, with host gate indices kept for every part."""
    block: Diagram
    context: Context
    gates: tuple[int, ...]
    top_gates: tuple[int, ...]
    bottom_gates: tuple[int, ...]


def extract_block(host: Diagram, gate_set: Iterable[int]) -> Occurrence | None:
    """
    Factor `host` as top ; (id_a * block * id_b) ; bottom where the block holds
    exactly the gates of `gate_set`. Returns None when the set is not convex.
    """
    chosen = set(gate_set)
    if not chosen or not chosen <= set(range(host.gate_count)):
        return None
    tagged = list(enumerate(host.slices))
    others = set(range(host.gate_count)) - chosen
    top, remaining = schedule_tagged(tagged, allowed=others)
    block, remaining = schedule_tagged(remaining, allowed=chosen)
    if len(block) != len(chosen):
        return None
    width = top[-1][1].width_out if top else host.inputs
    a = min(s.left for _, s in block)
    b = min(s.right for _, s in block)
    block_diagram, block_gates = canonicalize_tagged(
        width - a - b, [(tag, WhiskeredGate(s.left - a, s.gate, s.right - b)) for tag, s in block]
    )
    top_diagram, top_gates = canonicalize_tagged(host.inputs, top)
    below = block[-1][1].width_out
    bottom_diagram, bottom_gates = canonicalize_tagged(below, remaining)
    return Occurrence(
        block=block_diagram,
        context=Context(top_diagram, a, b, bottom_diagram),
        gates=block_gates,
        top_gates=top_gates,
        bottom_gates=bottom_gates,
    )


def connected_subsets(graph: PortGraph, size: int, kinds=None) -> list[frozenset[int]]:
    """All connected gate sets of the given size, optionally matching a kind multiset."""
    wanted = Counter(kinds) if kinds is not None else None
    neighbours = [graph.neighbours(g) for g in range(len(graph.kinds))]
    results = set()
    seen = set()

    def grow(start: int, current: frozenset, frontier: set):
        if len(current) == size:
            if wanted is None or Counter(graph.kinds[g] for g in current) == wanted:
                results.add(current)
            return
        for g in sorted(frontier):
            extended = current | {g}
            if extended in seen:
                continue
            seen.add(extended)
            grow(start, extended, (frontier | {h for h in neighbours[g] if h > start}) - extended)

    for start in range(len(graph.kinds)):
        if wanted is not None and graph.kinds[start] not in wanted:
            continue
        grow(start, frozenset({start}), {h for h in neighbours[start] if h > start})
    return sorted(results, key=sorted)
