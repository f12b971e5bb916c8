"""
Text and TikZ drawings of diagrams.

The ASCII form has a header row of input wires followed by one row per gate;
`parse_ascii` reads it back.
"""
from functools import lru_cache
from pathlib import Path

import yaml

from .core import Diagram, GateKind, WhiskeredGate, from_slices
from .exceptions import ParseError

GLYPHS_FILE = Path(__file__).resolve().parent / 'glyphs.yaml'


@lru_cache(maxsize=1)
def load_glyphs() -> dict:
    with open(GLYPHS_FILE, encoding='utf-8') as fh:
        return yaml.safe_load(fh)


def _row(width_left: int, token: str, width_right: int) -> str:
    wire = load_glyphs()['wire']['ascii']
    return ' '.join([wire] * width_left + [token] + [wire] * width_right)


def _ascii(diagram: Diagram) -> str:
    glyphs = load_glyphs()
    wire = glyphs['wire']['ascii']
    header = ' '.join([wire] * diagram.inputs) or glyphs['empty']['ascii']
    rows = [header]
    for s in diagram.slices:
        rows.append(_row(s.left, glyphs[s.gate.value]['ascii'], s.right))
    return '\n'.join(rows)


def _tikz(diagram: Diagram) -> str:
    glyphs = load_glyphs()
    lines = [
        r'\documentclass[tikz]{standalone}',
        r'\begin{document}',
        r'\begin{tikzpicture}[yscale=-1]',
    ]
    for x in range(diagram.inputs):
        lines.append(rf'\draw ({x},0) -- ({x},0.5);')
    for row, s in enumerate(diagram.slices, start=1):
        y = row
        for x in list(range(s.left)) + [s.left + s.gate.inputs + k for k in range(s.right)]:
            lines.append(rf'\draw ({x},{y - 0.5}) -- ({x},{y + 0.5});')
        span = max(s.gate.inputs, s.gate.outputs, 1) - 1
        lines.append(
            rf'\node[draw, minimum width={span + 0.6}cm] at ({s.left + span / 2},{y}) '
            rf'{{{glyphs[s.gate.value]["label"]}}};'
        )
    last = len(diagram.slices) + 0.5
    for x in range(diagram.outputs):
        lines.append(rf'\draw ({x},{last}) -- ({x},{last + 0.5});')
    lines += [r'\end{tikzpicture}', r'\end{document}']
    return '\n'.join(lines) + '\n'


def render_diagram(diagram: Diagram, fmt: str = 'ascii') -> str:
    if fmt == 'ascii':
        return _ascii(diagram)
    if fmt == 'tikz':
        return _tikz(diagram)
    raise ValueError(f'unknown render format {fmt!r}')


def parse_ascii(text: str) -> Diagram:
    glyphs = load_glyphs()
    by_glyph = {glyphs[k.value]['ascii']: k for k in GateKind}
    wire = glyphs['wire']['ascii']
    rows = text.strip('\n').split('\n')
    header = rows[0].split()
    inputs = 0 if header == [glyphs['empty']['ascii']] else len(header)
    if any(token != wire for token in header[:inputs]):
        raise ParseError('header row must contain only wires')
    slices = []
    for row in rows[1:]:
        tokens = row.split()
        gates = [i for i, t in enumerate(tokens) if t != wire]
        if len(gates) != 1 or tokens[gates[0]] not in by_glyph:
            raise ParseError(f'gate row {row!r} must hold exactly one gate glyph')
        index = gates[0]
        slices.append(WhiskeredGate(index, by_glyph[tokens[index]], len(tokens) - index - 1))
    return from_slices(inputs, slices)


def render_path(diagrams, labels=None) -> str:
    """ASCII drawing of consecutive diagrams with the rule names between them."""
    blocks = []
    for i, diagram in enumerate(diagrams):
        if i and labels:
            blocks.append(f'  ==[{labels[i - 1]}]==>')
        blocks.append(_ascii(diagram))
    return '\n'.join(blocks)
