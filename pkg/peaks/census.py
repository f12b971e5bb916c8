"""
Local confluence census: enumerate, join and classify every critical peak.
"""
import logging
from collections import Counter
from dataclasses import dataclass

import pandas as pd

from diagrams.exceptions import BudgetExhausted, NotJoinable
from rewriting.rules import RuleSet

from .fixtures import FixturePeak, fixture_branches, load_fixtures, match_fixtures
from .peaks import CLASS_ORDER, CriticalPeak, JoinResult, PeakClass, classify, enumerate_peaks, join

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PeakOutcome:
    peak: CriticalPeak
    result: JoinResult | None
    klass: PeakClass | None
    error: str | None = None
    fixture: FixturePeak | None = None

    @property
    def joined(self) -> bool:
        return self.result is not None

    @property
    def name(self) -> str:
        return self.fixture.name if self.fixture else '-'


@dataclass(frozen=True)
class ConfluenceReport:
    rule_set: str
    outcomes: tuple[PeakOutcome, ...]
    missing: tuple[str, ...] = ()
    with_fixtures: bool = False

    @property
    def failures(self) -> list[PeakOutcome]:
        return [o for o in self.outcomes if not o.joined]

    @property
    def confluent(self) -> bool:
        return not self.failures and not self.missing

    @property
    def counted(self) -> list[PeakOutcome]:
        """Fixture peaks when a fixture list was used, every peak otherwise."""
        if self.with_fixtures:
            return [o for o in self.outcomes if o.fixture is not None]
        return list(self.outcomes)

    @property
    def extras(self) -> list[PeakOutcome]:
        if not self.with_fixtures:
            return []
        return [o for o in self.outcomes if o.fixture is None]

    @property
    def mismatches(self) -> list[PeakOutcome]:
        return [o for o in self.outcomes if o.fixture is not None and o.joined and o.klass != o.fixture.expected]

    def counts(self) -> dict[PeakClass, int]:
        tally = Counter(o.klass for o in self.counted if o.klass is not None)
        return {k: tally.get(k, 0) for k in CLASS_ORDER}

    def summary(self) -> str:
        counts = self.counts()
        return f'{len(self.counted)} peaks, ' + '/'.join(str(counts[k]) for k in CLASS_ORDER)

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for o in self.outcomes:
            rows.append({
                'name': o.name,
                'source': str(o.peak.source),
                'rules': '/'.join(o.peak.rule_pair),
                'class': o.klass.value if o.klass else 'not_joinable',
                'left': len(o.result.left_path) if o.result else None,
                'right': len(o.result.right_path) if o.result else None,
            })
        return pd.DataFrame(rows, columns=['name', 'source', 'rules', 'class', 'left', 'right'])


def _outcome(peak, rules, budget, fixture=None) -> PeakOutcome:
    try:
        branches = fixture_branches(fixture, peak, rules) if fixture and fixture.has_join else None
        result = join(peak, rules, budget=budget, branches=branches)
    except (NotJoinable, BudgetExhausted) as exc:
        return PeakOutcome(peak, None, None, f'{type(exc).__name__}: {exc}', fixture)
    return PeakOutcome(peak, result, classify(peak, result), None, fixture)


def local_confluence_report(rules: RuleSet, bound: int = 4, fixtures=None, budget=None) -> ConfluenceReport:
    """
    Join and classify every critical peak of `rules`. For rule set F the
    shipped fixture list is used unless `fixtures` says otherwise; counts then
    cover the fixture peaks and any further peak is reported as an extra.
    """
    if fixtures is None and rules.name == 'F':
        fixtures = load_fixtures()
    fixtures = list(fixtures or [])
    peaks = enumerate_peaks(rules, bound)
    matched = match_fixtures(fixtures, peaks)
    by_key = {matched[f.name].key: f for f in fixtures if f.name in matched}
    outcomes = tuple(_outcome(p, rules, budget, by_key.get(p.key)) for p in peaks)
    report = ConfluenceReport(
        rules.name, outcomes,
        missing=tuple(f.name for f in fixtures if f.name not in matched),
        with_fixtures=bool(fixtures),
    )
    logger.info('rule set %s: %s', rules.name, report.summary())
    for o in report.failures:
        logger.warning('peak %s does not join: %s', o.peak, o.error)
    if report.extras:
        logger.warning('%d peaks outside the fixture list', len(report.extras))
    return report
