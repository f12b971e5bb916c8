from django.test import SimpleTestCase

from diagrams.exceptions import ParseError, StaleRedex
from diagrams.parser import parse_diagram
from rewriting.rules import builtin_rule_set
from peaks.fixtures import fixture_branches, load_fixtures, match_fixtures, parse_fixtures, replay
from peaks.peaks import PeakClass, local_peaks

SAMPLE = """
# two peaks
PEAK penta coherence: (m*id2);(m*id1);m | alpha | alpha
JOIN-L: alpha => (id1*m*id1);(id1*m);m, alpha => (id2*m);(id1*m);m
JOIN-R: alpha => (id2*m);(id1*m);m
PEAK units kelly: (e*e);m | l@0 | r
"""


class ParseFixturesTest(SimpleTestCase):
    def test_entries(self):
        penta, units = parse_fixtures(SAMPLE)
        self.assertEqual(penta.expected, PeakClass.COHERENCE)
        self.assertEqual(len(penta.join_left), 2)
        self.assertTrue(penta.has_join)
        self.assertFalse(units.has_join)
        self.assertEqual(units.branches[0].anchor, 0)
        self.assertEqual(units.source, parse_diagram('(e*e);m'))

    def test_unknown_class(self):
        with self.assertRaises(ParseError):
            parse_fixtures('PEAK x lucky: s;s;s | inv | inv')

    def test_join_before_peak(self):
        with self.assertRaises(ParseError):
            parse_fixtures('JOIN-L: inv => s')

    def test_duplicate_names(self):
        with self.assertRaises(ParseError):
            parse_fixtures('PEAK a kelly: (e*e);m\nPEAK a kelly: (e*e);m')

    def test_shipped_list(self):
        fixtures = load_fixtures()
        self.assertEqual(len(fixtures), 68)
        self.assertEqual(len({f.source for f in fixtures}), 68)


class ReplayTest(SimpleTestCase):
    def setUp(self):
        self.rules = builtin_rule_set('F')

    def test_fixture_join_is_replayed(self):
        penta = parse_fixtures(SAMPLE)[0]
        peak = local_peaks(penta.source, self.rules)[0]
        self.assertEqual(match_fixtures([penta], [peak]), {'penta': peak})
        left, right = fixture_branches(penta, peak, self.rules)
        self.assertEqual(left.target, right.target)
        self.assertEqual(left.target, parse_diagram('(id2*m);(id1*m);m'))

    def test_unreachable_step(self):
        with self.assertRaises(StaleRedex):
            replay(parse_diagram('s;s'), [('tau', parse_diagram('m'))], self.rules)
