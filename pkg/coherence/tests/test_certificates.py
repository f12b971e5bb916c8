from collections import Counter

import numpy as np
from django.test import SimpleTestCase

from diagrams.enumeration import random_diagram
from diagrams.exceptions import NotParallel
from diagrams.parser import parse_diagram
from rewriting.normalize import RANDOM, normalize
from rewriting.rules import builtin_rule_set
from coherence.cells import BASE_CELLS, DISJOINT_SQUARE, FOLDABLE, KELLY, PLUMBING, STALE_CANCEL, WEAK_KELLY, FourCell
from coherence.certificates import Surgery, certify_equal
from coherence.expansion import check_certificate, full_expansion
from coherence.kernel import validate
from coherence.polygon import POLYGONS_DIR, certify_polygon, load_polygon
from coherence.scripts import parse_script, render_certificate, to_script
from coherence.zigzags import ZigzagPath

F = builtin_rule_set('F')
M = builtin_rule_set('M')

_cache = {}


def polygon_certificate(name, rules=F):
    key = (name, rules.name)
    if key not in _cache:
        _cache[key] = certify_polygon(load_polygon(POLYGONS_DIR / f'{name}.poly'), rules)
    return _cache[key]


class HexagonTest(SimpleTestCase):
    def test_one_g_and_one_exa2(self):
        certificate = polygon_certificate('hexagon')
        self.assertEqual(certificate.non_plumbing(), Counter({'g': 1, 'exa2': 1}))

    def test_validates(self):
        report = validate(polygon_certificate('hexagon'))
        self.assertTrue(report.ok, report.reason)

    def test_swapped_cell_name_is_caught(self):
        certificate = polygon_certificate('hexagon')
        index, edit = next((i, e) for i, e in enumerate(certificate.edits) if isinstance(e, Surgery) and e.name == 'g')
        forged = Surgery(edit.index, FourCell('penta', edit.cell.left, edit.cell.right), edit.forward)
        edits = certificate.edits[:index] + (forged,) + certificate.edits[index + 1:]
        report = validate(type(certificate)(certificate.rule_set, certificate.source, certificate.target, edits))
        self.assertFalse(report.ok)
        self.assertEqual(report.failed_index, index)

    def test_truncated_certificate_misses_the_target(self):
        certificate = polygon_certificate('hexagon')
        cut = type(certificate)(certificate.rule_set, certificate.source, certificate.target, certificate.edits[:-1])
        report = validate(cut)
        self.assertFalse(report.ok)
        self.assertIsNone(report.failed_index)


class MonoidalKellyTest(SimpleTestCase):
    def assertSingleCell(self, name, cell):
        certificate = polygon_certificate(name, M)
        self.assertEqual(certificate.non_plumbing(), Counter({cell: 1}))
        self.assertTrue(check_certificate(certificate, M).ok)

    def test_unit_on_the_left(self):
        self.assertSingleCell('kelly_left', 'kelly(kelly-1)')

    def test_unit_on_the_right(self):
        self.assertSingleCell('kelly_right', 'kelly(kelly-2)')

    def test_units_agree(self):
        self.assertSingleCell('kelly_units', 'kelly(kelly-3)')


class CertifyEqualTest(SimpleTestCase):
    def test_involution_needs_no_cells(self):
        certificate = polygon_certificate('involution')
        self.assertEqual(certificate.non_plumbing(), Counter())
        self.assertEqual(set(certificate.vocabulary()), {STALE_CANCEL})
        self.assertTrue(validate(certificate).ok)

    def test_equal_zigzags(self):
        _, path = normalize(parse_diagram('(m*id1);m'), F)
        zigzag = ZigzagPath.from_path(path)
        certificate = certify_equal(zigzag, zigzag, F)
        self.assertEqual(len(certificate), 0)
        self.assertTrue(validate(certificate).ok)

    def test_not_parallel(self):
        first = ZigzagPath(parse_diagram('m'))
        second = ZigzagPath(parse_diagram('s;m'))
        with self.assertRaises(NotParallel):
            certify_equal(first, second, F)

    def test_random_loops(self):
        allowed = set(BASE_CELLS) | {DISJOINT_SQUARE, FOLDABLE, KELLY, WEAK_KELLY}
        expanded_kinds = set(BASE_CELLS) | {FOLDABLE} | set(PLUMBING)
        sources = [
            '(m*id2);(m*id1);s;m', '(s*id1);(id1*s);(m*id1);m', '(e*id2);(s*id1);(m*id1);m',
            '(id1*s);(m*id1);s;m', '(m*m);s;m',
        ]
        rng = np.random.default_rng(7)
        for text in sources:
            diagram = parse_diagram(text)
            seeds = rng.integers(0, 1000, size=2)
            _, first = normalize(diagram, F, strategy=RANDOM, seed=int(seeds[0]))
            _, second = normalize(diagram, F, strategy=RANDOM, seed=int(seeds[1]))
            loop = ZigzagPath.from_path(first).then(ZigzagPath.from_path(second).inverse())
            certificate = certify_equal(loop, ZigzagPath(diagram), F)
            self.assertTrue(check_certificate(certificate, F).ok, text)
            self.assertLessEqual(certificate.kinds(), allowed, text)
            expanded = full_expansion(certificate, F)
            self.assertTrue(validate(expanded).ok, text)
            self.assertLessEqual(expanded.kinds(), expanded_kinds, text)

    def test_random_parallel_zigzags(self):
        expanded_kinds = set(BASE_CELLS) | {FOLDABLE} | set(PLUMBING)
        rng = np.random.default_rng(29)
        for _ in range(200):
            diagram = random_diagram(rng, int(rng.integers(1, 4)), int(rng.integers(2, 9)))
            seeds = rng.integers(0, 1000, size=2)
            _, first = normalize(diagram, F, strategy=RANDOM, seed=int(seeds[0]))
            _, second = normalize(diagram, F, strategy=RANDOM, seed=int(seeds[1]))
            certificate = certify_equal(ZigzagPath.from_path(first), ZigzagPath.from_path(second), F)
            report = check_certificate(certificate, F)
            self.assertTrue(report.ok, f'{diagram}: {report.reason}')
            expanded = full_expansion(certificate, F)
            self.assertLessEqual(expanded.kinds(), expanded_kinds, str(diagram))


class ScriptTest(SimpleTestCase):
    def test_round_trip(self):
        certificate = polygon_certificate('hexagon')
        script = to_script(certificate)
        parsed = parse_script(script)
        self.assertEqual(parsed.edits, certificate.edits)
        self.assertEqual(parsed.source, certificate.source)
        self.assertTrue(parsed.checkpoints)
        self.assertTrue(validate(parsed).ok)
        self.assertEqual(to_script(parsed), script)

    def test_script_lines(self):
        script = to_script(polygon_certificate('hexagon'))
        lines = script.splitlines()
        self.assertEqual(lines[0], 'CERTIFICATE F')
        self.assertTrue(lines[1].startswith('SOURCE '))
        self.assertEqual(sum(line.startswith('SURGERY ') for line in lines), 2 + sum(
            line.startswith('SURGERY') and 'disjoint_square' in line for line in lines
        ))

    def test_render_draws_base_cells(self):
        drawing = render_certificate(polygon_certificate('hexagon'))
        self.assertIn('-- g at ', drawing)
        self.assertIn('-- exa2 at ', drawing)
        self.assertNotIn('disjoint_square', drawing)
