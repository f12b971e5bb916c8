"""
Expansions of Kelly and weak-Kelly cells into base, foldable and plumbing
cells.

Each derivation is stored as data: a lift, a diagram that rewrites onto the
peak source, and for the monoidal unit peaks a larger source in which a unit
redex conjugates the peak. Both sides of the peak are prefixed with the path
from the lift, extended to the normal form, and connected by a breadth-first
search over disjoint squares and accepted cells. A derivation may use the
Kelly cells of the derivations stored before it, which are in turn inlined
by `full_expansion`. Every derivation is checked by the replay kernel.
"""
import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import yaml
from django.conf import settings

from diagrams.core import Context, Diagram, extract_block
from diagrams.exceptions import BudgetExhausted, ExpansionUnavailable, NotJoinable, StaleRedex, UnknownPeak
from diagrams.parser import parse_diagram
from peaks.fixtures import load_fixtures, match_fixtures
from peaks.peaks import PeakClass, enumerate_peaks
from rewriting.engine import RewriteStep, reverse_steps, step_for, steps_from, whisker_step
from rewriting.normalize import reachable, trace_path
from rewriting.paths import RewritePath
from rewriting.rules import RuleSet, builtin_rule_set

from .cells import KELLY, WEAK_KELLY, FourCell, core_cell, disjoint_square, locate_peak, whisker_path
from .certificates import Certificate, CertificateBuilder, StaleEdit, Surgery, normal_steps
from .homotopy import connect
from .kernel import ValidationReport, validate
from .zigzags import ZigzagPath

logger = logging.getLogger(__name__)

DERIVATIONS_FILE = Path(__file__).resolve().parent / 'fixtures' / 'kelly_derivations.yaml'
EXPANDED_KINDS = (KELLY, WEAK_KELLY)
LIFT_BUDGET = 2000


def lift_depth() -> int:
    return getattr(settings, 'SMC_EXPANSION_LIFT_DEPTH', 1)


@dataclass(frozen=True)
class Derivation:
    peak_id: str
    lift: Diagram
    source: Diagram | None = None
    unit: str | None = None


@lru_cache(maxsize=None)
def load_derivations() -> dict[str, Derivation]:
    """Stored derivations keyed by peak id, in file order."""
    with open(DERIVATIONS_FILE, encoding='utf-8') as fh:
        raw = yaml.safe_load(fh) or {}
    derivations = {}
    for name, entry in raw.items():
        source = entry.get('source')
        derivations[name] = Derivation(
            name,
            parse_diagram(entry['lift']),
            parse_diagram(source) if source else None,
            entry.get('unit'),
        )
    return derivations


@dataclass(frozen=True)
class Expansion:
    """Edits turning the left side of `cell` into its right side."""
    peak_id: str
    cell: FourCell
    lift: RewritePath
    edits: tuple
    unit: RewriteStep | None = None

    def as_certificate(self, rule_set: str) -> Certificate:
        return Certificate(
            rule_set,
            ZigzagPath.from_path(self.cell.left),
            ZigzagPath.from_path(self.cell.right),
            self.edits,
        )

    def surgeries(self) -> list[Surgery]:
        return [e for e in self.edits if isinstance(e, Surgery)]

    def cells(self) -> list[str]:
        return [s.name for s in self.surgeries()]


@dataclass(frozen=True)
class Conjugation:
    """A unit redex around a hole: `unit` erases everything outside the hole."""
    unit: RewriteStep
    context: Context
    tags: tuple

    def at(self, inner: Diagram) -> RewriteStep:
        """The same unit redex with `inner` in the hole."""
        host, tags = self.context.plug(inner)
        position = {tag: g for g, tag in enumerate(tags)}
        return step_for(host, self.unit.rule, [position[t] for t in self.tags])

    def square(self, s: RewriteStep) -> FourCell:
        return disjoint_square(whisker_step(s, self.context), self.at(s.source))


def find_conjugation(source: Diagram, inner: Diagram, unit: str, rules: RuleSet) -> Conjugation:
    rule = rules.get(unit)
    for s in steps_from(source, RuleSet(unit, (rule,))):
        if s.target != inner:
            continue
        occurrence = extract_block(source, set(range(source.gate_count)) - set(s.gates))
        if occurrence is None or occurrence.block != inner:
            continue
        host, tags = occurrence.context.plug(inner)
        chosen = tuple(tags[g] for g in s.gates)
        if host != source or any(tag[0] == 'mid' for tag in chosen):
            continue
        return Conjugation(s, occurrence.context, chosen)
    raise ExpansionUnavailable(f'no {unit} redex of {source} leaves {inner} behind')


def _lift_path(lift: Diagram, target: Diagram, rules: RuleSet) -> RewritePath:
    try:
        parents = reachable(lift, rules, budget=LIFT_BUDGET)
    except BudgetExhausted as exc:
        raise ExpansionUnavailable(f'lift {lift} has too many reducts') from exc
    if target not in parents:
        raise ExpansionUnavailable(f'lift {lift} does not rewrite to {target}')
    return trace_path(parents, target, lift)


def _reverse_lifts(peak_id: str, source: Diagram, rules: RuleSet):
    """Lifts by reverse steps, shortest first."""
    seen = {source}
    queue = deque([(source, 0)])
    while queue:
        current, depth = queue.popleft()
        if depth >= lift_depth():
            continue
        for s in reverse_steps(current, rules):
            if s.source not in seen:
                seen.add(s.source)
                queue.append((s.source, depth + 1))
                yield Derivation(peak_id, s.source)


def _accepting(allowed: frozenset):
    def accept(cell: FourCell) -> bool:
        if cell.kind in EXPANDED_KINDS:
            return cell.peak_id in allowed
        return True
    return accept


def _derive(cell: FourCell, derivation: Derivation, rules: RuleSet, allowed: frozenset) -> Expansion:
    builder = CertificateBuilder(rules)
    left, right = cell.left, cell.right
    conjugation = None
    base = 0
    if derivation.unit:
        conjugation = find_conjugation(derivation.source, cell.source, derivation.unit, rules)
        builder.edits.append(StaleEdit(0, conjugation.unit, insert=True, forward=False))
        for j, s in enumerate(left.steps):
            builder.edits.append(Surgery(j + 1, conjugation.square(s), False))
        left, right = whisker_path(left, conjugation.context), whisker_path(right, conjugation.context)
        base = 1

    lift = _lift_path(derivation.lift, left.source, rules)
    tail = normal_steps(left.target, rules)
    builder.insert_pairs(base + len(left), tail)
    builder.insert_inverse_pairs(base, lift.steps)
    offset = base + len(lift)
    surgeries = connect(
        lift.steps + left.steps + tail,
        lift.steps + right.steps + tail,
        rules,
        _accepting(allowed),
    )
    builder.edits.extend(s.shifted(offset) for s in surgeries)
    builder.delete_pairs(offset + len(lift) + len(right), tail)
    builder.delete_inverse_pairs(base, lift.steps)

    if conjugation is not None:
        for j in reversed(range(len(cell.right))):
            builder.edits.append(Surgery(j + 1, conjugation.square(cell.right.steps[j]), True))
        builder.delete_inverse_pairs(0, (conjugation.unit,))
    return Expansion(cell.peak_id, cell, lift, tuple(builder.edits), conjugation and conjugation.unit)


@lru_cache(maxsize=None)
def kelly_ids() -> tuple[str, ...]:
    return tuple(f.name for f in load_fixtures() if f.expected in (PeakClass.KELLY, PeakClass.WEAK_KELLY))


def _kelly_cell(peak_id: str, rules: RuleSet) -> FourCell:
    if peak_id not in kelly_ids():
        raise UnknownPeak(f'{peak_id!r} is not a Kelly or weak-Kelly peak')
    fixtures = [f for f in load_fixtures() if f.name == peak_id]
    found = match_fixtures(fixtures, enumerate_peaks(rules, 4))
    if peak_id not in found:
        raise UnknownPeak(f'peak {peak_id} does not occur in rule set {rules.name}')
    cell, _ = core_cell(found[peak_id], rules)
    return cell


def _earlier(peak_id: str) -> frozenset:
    order = list(load_derivations())
    if peak_id not in order:
        return frozenset()
    return frozenset(order[:order.index(peak_id)])


@lru_cache(maxsize=None)
def derive_expansion(cell: FourCell, rules: RuleSet) -> Expansion:
    """The stored derivation of `cell`, or one from a reverse-step lift."""
    stored = load_derivations().get(cell.peak_id)
    allowed = _earlier(cell.peak_id)
    attempts = ([stored] if stored else []) + list(_reverse_lifts(cell.peak_id, cell.source, rules))
    for derivation in attempts:
        try:
            expansion = _derive(cell, derivation, rules, allowed)
        except (ExpansionUnavailable, NotJoinable, BudgetExhausted, StaleRedex) as exc:
            logger.info('derivation of %s from %s failed: %s', cell.name, derivation.lift, exc)
            continue
        certificate = expansion.as_certificate(rules.name)
        report = validate(certificate, expansions=kernel_expansions(certificate, rules))
        if not report:
            logger.warning('derived expansion of %s rejected at edit %s', cell.name, report.failed_index)
            continue
        logger.info('expanded %s over %s with %d cells', cell.name, derivation.lift, len(expansion.cells()))
        return expansion
    raise ExpansionUnavailable(f'no expansion of {cell.name} within lift depth {lift_depth()}')


def expand_kelly(peak_id: str, rules: RuleSet | None = None) -> Expansion:
    rules = rules or builtin_rule_set('F')
    return derive_expansion(_kelly_cell(peak_id, rules), rules)


def expansion_table(rules: RuleSet | None = None) -> dict[str, Expansion]:
    """Every Kelly id occurring in `rules` mapped to its expansion."""
    rules = rules or builtin_rule_set('F')
    table = {}
    for name in kelly_ids():
        try:
            table[name] = expand_kelly(name, rules)
        except UnknownPeak:
            logger.debug('%s does not occur in %s', name, rules.name)
    return table


def _expansion_for(core: FourCell, rules: RuleSet) -> tuple:
    """Edits turning the left side of `core` into its right side."""
    expansion = expand_kelly(core.peak_id, rules)
    if expansion.cell == core:
        return expansion.edits
    if expansion.cell.left == core.right and expansion.cell.right == core.left:
        return tuple(e.inverse() for e in reversed(expansion.edits))
    return derive_expansion(core, rules).edits


def kernel_expansions(certificate: Certificate, rules: RuleSet | None = None) -> dict[str, Certificate]:
    """Expansion certificates for the Kelly cells of `certificate` and of their expansions."""
    rules = rules or builtin_rule_set(certificate.rule_set)
    table = {}
    pending = [s.cell for s in certificate.surgeries() if s.cell.kind in EXPANDED_KINDS]
    while pending:
        cell = pending.pop()
        if cell.name in table:
            continue
        expansion = expand_kelly(cell.peak_id, rules)
        table[cell.name] = expansion.as_certificate(rules.name)
        pending.extend(s.cell for s in expansion.surgeries() if s.cell.kind in EXPANDED_KINDS)
    return table


def check_certificate(certificate: Certificate, rules: RuleSet | None = None) -> ValidationReport:
    """Validate `certificate`, supplying the expansions of its Kelly cells."""
    return validate(certificate, expansions=kernel_expansions(certificate, rules))


def _whiskered(edit, context, offset):
    if isinstance(edit, Surgery):
        return Surgery(edit.index + offset, edit.cell.whiskered(context), edit.forward)
    return StaleEdit(edit.index + offset, whisker_step(edit.step, context), edit.insert, edit.forward)


def _inline(edits, rules: RuleSet) -> list:
    flat = []
    for edit in edits:
        if not isinstance(edit, Surgery) or edit.cell.kind not in EXPANDED_KINDS:
            flat.append(edit)
            continue
        site = locate_peak(edit.cell.left.steps[0], edit.cell.right.steps[0], rules)
        inner = flat_edits(site.core, rules)
        if not edit.forward:
            inner = tuple(e.inverse() for e in reversed(inner))
        flat.extend(_whiskered(e, site.context, edit.index) for e in inner)
    return flat


@lru_cache(maxsize=None)
def flat_edits(core: FourCell, rules: RuleSet) -> tuple:
    """The expansion of `core` with nested Kelly cells inlined."""
    return tuple(_inline(_expansion_for(core, rules), rules))


def full_expansion(certificate: Certificate, rules: RuleSet | None = None) -> Certificate:
    """The certificate with every Kelly surgery replaced by its expansion."""
    rules = rules or builtin_rule_set(certificate.rule_set)
    edits = _inline(certificate.edits, rules)
    logger.info('expanded certificate: %d edits from %d', len(edits), len(certificate.edits))
    return Certificate(certificate.rule_set, certificate.source, certificate.target, tuple(edits))
