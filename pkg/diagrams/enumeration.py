import logging
from collections import deque

from .core import Diagram, GateKind, WhiskeredGate, _swap, from_slices, identity

logger = logging.getLogger(__name__)


def _extensions(width: int):
    for kind in GateKind:
        for left in range(width - kind.inputs + 1):
            yield WhiskeredGate(left, kind, width - kind.inputs - left)


def enumerate_diagrams(inputs: int, outputs: int, max_gates: int) -> list[Diagram]:
    """Every diagram inputs -> outputs with at most `max_gates` gates, each once."""
    layer = {identity(inputs)}
    seen = set(layer)
    for _ in range(max_gates):
        following = set()
        for diagram in layer:
            for extra in _extensions(diagram.outputs):
                extended = from_slices(diagram.inputs, diagram.slices + (extra,))
                if extended not in seen:
                    seen.add(extended)
                    following.add(extended)
        layer = following
    found = sorted((d for d in seen if d.outputs == outputs), key=Diagram.sort_key)
    logger.debug('enumerated %d diagrams %d->%d with <= %d gates', len(found), inputs, outputs, max_gates)
    return found


def interchange_closure(inputs: int, slices) -> set[tuple[WhiskeredGate, ...]]:
    """Every slice sequence reachable by swapping adjacent independent slices."""
    start = tuple(slices)
    seen = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for i in range(len(current) - 1):
            swapped = _swap(current[i], current[i + 1])
            if swapped is None:
                continue
            candidate = current[:i] + swapped + current[i + 2:]
            if candidate not in seen:
                seen.add(candidate)
                queue.append(candidate)
    return seen


def random_diagram(rng, inputs: int, gates: int, max_width: int = 4) -> Diagram:
    """`gates` random whiskered gates stacked on `inputs` wires, no cut wider than `max_width`."""
    width, slices = inputs, []
    for _ in range(gates):
        options = [s for s in _extensions(width) if s.width_out <= max_width]
        chosen = options[int(rng.integers(len(options)))]
        slices.append(chosen)
        width = chosen.width_out
    return from_slices(inputs, slices)


def shuffle_slices(rng, slices, moves: int) -> tuple[WhiskeredGate, ...]:
    """Apply up to `moves` random interchanges of adjacent independent slices."""
    current = tuple(slices)
    for _ in range(moves):
        spots = [i for i in range(len(current) - 1) if _swap(current[i], current[i + 1]) is not None]
        if not spots:
            break
        i = spots[int(rng.integers(len(spots)))]
        current = current[:i] + _swap(current[i], current[i + 1]) + current[i + 2:]
    return current
