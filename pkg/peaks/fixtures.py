"""
Loader for critical-peak fixture files.
"""
import logging
import re
from dataclasses import dataclass, replace
from functools import lru_cache
from pathlib import Path

from django.conf import settings

from diagrams.core import Diagram
from diagrams.exceptions import ParseError, StaleRedex
from diagrams.parser import parse_diagram
from rewriting.engine import steps_from
from rewriting.paths import RewritePath
from rewriting.rules import RuleSet

from .peaks import CriticalPeak, PeakClass

logger = logging.getLogger(__name__)

PEAK_RE = re.compile(r'^PEAK\s+(?P<name>[\w\-]+)\s+(?P<klass>\w+)\s*:\s*(?P<body>.+)$')
JOIN_RE = re.compile(r'^JOIN-(?P<side>[LR])\s*:\s*(?P<steps>.*)$')
BRANCH_RE = re.compile(r'^(?P<rule>[A-Za-z_][\w\-]*)\s*(?:@\s*(?P<anchor>\d+)|=>\s*(?P<target>.+))?$')

DEFAULT_FIXTURE = 'f_peaks.txt'


def fixtures_dir() -> Path:
    default = Path(__file__).resolve().parent / 'fixtures'
    return Path(getattr(settings, 'SMC_FIXTURES_DIR', default))


@dataclass(frozen=True)
class BranchSpec:
    rule: str
    anchor: int | None = None
    target: Diagram | None = None


@dataclass(frozen=True)
class FixturePeak:
    name: str
    expected: PeakClass
    source: Diagram
    branches: tuple[BranchSpec, ...] = ()
    join_left: tuple[tuple[str, Diagram], ...] | None = None
    join_right: tuple[tuple[str, Diagram], ...] | None = None

    @property
    def has_join(self) -> bool:
        return self.join_left is not None or self.join_right is not None


def _branch(text: str) -> BranchSpec:
    match = BRANCH_RE.match(text.strip())
    if not match:
        raise ParseError(f'cannot read peak branch {text!r}')
    anchor = match.group('anchor')
    target = match.group('target')
    return BranchSpec(
        match.group('rule'),
        int(anchor) if anchor is not None else None,
        parse_diagram(target) if target else None,
    )


def _join_steps(text: str) -> tuple[tuple[str, Diagram], ...]:
    steps = []
    for part in filter(None, (p.strip() for p in text.split(','))):
        rule, sep, target = part.partition('=>')
        if not sep:
            raise ParseError(f'join step {part!r} must read `rule => diagram`')
        steps.append((rule.strip(), parse_diagram(target)))
    return tuple(steps)


def parse_fixtures(text: str) -> list[FixturePeak]:
    entries = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        peak = PEAK_RE.match(line)
        if peak:
            try:
                expected = PeakClass(peak.group('klass'))
            except ValueError:
                raise ParseError(f'line {number}: unknown peak class {peak.group("klass")!r}')
            parts = peak.group('body').split('|')
            if len(parts) not in (1, 3):
                raise ParseError(f'line {number}: expected a source and zero or two branches')
            entries.append(FixturePeak(
                name=peak.group('name'),
                expected=expected,
                source=parse_diagram(parts[0]),
                branches=tuple(_branch(p) for p in parts[1:]),
            ))
            continue
        join = JOIN_RE.match(line)
        if join:
            if not entries:
                raise ParseError(f'line {number}: join before any peak')
            field = 'join_left' if join.group('side') == 'L' else 'join_right'
            entries[-1] = replace(entries[-1], **{field: _join_steps(join.group('steps'))})
            continue
        raise ParseError(f'line {number}: expected PEAK or JOIN-L/JOIN-R')
    names = [e.name for e in entries]
    if len(set(names)) != len(names):
        raise ParseError('fixture names must be unique')
    return entries


def load_fixtures(path=None) -> list[FixturePeak]:
    path = Path(path) if path else fixtures_dir() / DEFAULT_FIXTURE
    return _load(str(path))


@lru_cache(maxsize=8)
def _load(path: str) -> list[FixturePeak]:
    entries = parse_fixtures(Path(path).read_text(encoding='utf-8'))
    logger.debug('loaded %d fixture peaks from %s', len(entries), path)
    return entries


def _fits(spec: BranchSpec, redex, peak: CriticalPeak) -> bool:
    if spec.rule != redex.rule.name:
        return False
    if spec.anchor is not None and spec.anchor != redex.anchor:
        return False
    if spec.target is not None:
        return spec.target == (peak.left_step() if redex is peak.left else peak.right_step()).target
    return True


def matches(fixture: FixturePeak, peak: CriticalPeak) -> bool:
    if fixture.source != peak.source:
        return False
    if not fixture.branches:
        return True
    first, second = fixture.branches
    return (
        (_fits(first, peak.left, peak) and _fits(second, peak.right, peak))
        or (_fits(first, peak.right, peak) and _fits(second, peak.left, peak))
    )


def match_fixtures(fixtures, peaks) -> dict[str, CriticalPeak]:
    """Map each fixture name to the one enumerated peak it describes."""
    by_source = {}
    for peak in peaks:
        by_source.setdefault(peak.source, []).append(peak)
    found = {}
    for fixture in fixtures:
        candidates = [p for p in by_source.get(fixture.source, []) if matches(fixture, p)]
        if len(candidates) == 1:
            found[fixture.name] = candidates[0]
        elif candidates:
            logger.warning('fixture %s matches %d peaks', fixture.name, len(candidates))
        else:
            logger.warning('fixture %s matches no enumerated peak', fixture.name)
    return found


def replay(start: Diagram, steps, rules: RuleSet) -> RewritePath:
    taken = []
    current = start
    for name, target in steps:
        rule = rules.get(name)
        options = [s for s in steps_from(current, RuleSet(name, (rule,))) if s.target == target]
        if not options:
            raise StaleRedex(f'no {name} step from {current} reaches {target}')
        taken.append(options[0])
        current = target
    return RewritePath(start, tuple(taken))


def fixture_branches(fixture: FixturePeak, peak: CriticalPeak, rules: RuleSet):
    """The fixture's join as (left, right) paths from the peak's targets."""
    left_target, right_target = peak.left_step().target, peak.right_step().target
    first, second = fixture.join_left or (), fixture.join_right or ()
    try:
        return replay(left_target, first, rules), replay(right_target, second, rules)
    except StaleRedex:
        return replay(left_target, second, rules), replay(right_target, first, rules)
