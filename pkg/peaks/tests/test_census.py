from functools import lru_cache

from django.test import SimpleTestCase

from rewriting.normalize import normal_form
from rewriting.rules import builtin_rule_set
from peaks.census import local_confluence_report
from peaks.fixtures import load_fixtures
from peaks.peaks import PeakClass


@lru_cache(maxsize=None)
def f_report():
    return local_confluence_report(builtin_rule_set('F'))


class MonoidCensusTest(SimpleTestCase):
    def test_summary(self):
        report = local_confluence_report(builtin_rule_set('M'), bound=3)
        self.assertTrue(report.confluent)
        self.assertEqual(report.summary(), '5 peaks, 2/3/0/0/0')
        self.assertEqual(report.extras, [])


class FullCensusTest(SimpleTestCase):
    def test_every_fixture_peak_is_enumerated(self):
        self.assertEqual(f_report().missing, ())
        self.assertEqual(len(f_report().counted), len(load_fixtures()))

    def test_class_counts(self):
        counts = f_report().counts()
        self.assertEqual(counts[PeakClass.COHERENCE], 5)
        self.assertEqual(counts[PeakClass.KELLY], 5)
        self.assertEqual(counts[PeakClass.WEAK_KELLY], 12)
        self.assertEqual(counts[PeakClass.SIMPLY_FOLDABLE], 18)
        self.assertEqual(counts[PeakClass.STRONGLY_FOLDABLE], 28)
        self.assertEqual(f_report().summary(), '68 peaks, 5/5/12/18/28')

    def test_classes_agree_with_fixtures(self):
        self.assertEqual([o.name for o in f_report().mismatches], [])

    def test_locally_confluent(self):
        self.assertEqual(f_report().failures, [])
        self.assertTrue(f_report().confluent)

    def test_branches_meet_at_the_normal_form(self):
        rules = builtin_rule_set('F')
        for outcome in f_report().counted:
            with self.subTest(peak=outcome.name):
                self.assertEqual(outcome.result.meet, normal_form(outcome.peak.source, rules))

    def test_frame_has_one_row_per_peak(self):
        frame = f_report().to_frame()
        self.assertEqual(len(frame), len(f_report().outcomes))
        self.assertEqual(frame[frame['name'] == 'penta']['class'].iloc[0], 'coherence')


class ReversedMergeCensusTest(SimpleTestCase):
    def test_not_locally_confluent(self):
        report = local_confluence_report(builtin_rule_set('GM'), budget=200)
        self.assertFalse(report.confluent)
        sources = {str(o.peak.source) for o in report.failures}
        self.assertIn('(id1*s);(id1*m);s', sources)
