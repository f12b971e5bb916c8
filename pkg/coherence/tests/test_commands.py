import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import CommandError, call_command
from django.test import SimpleTestCase

from coherence.polygon import POLYGONS_DIR


class CertifyCommandTest(SimpleTestCase):
    def test_hexagon(self):
        out = StringIO()
        call_command('certify', '--terms', str(POLYGONS_DIR / 'hexagon.poly'), stdout=out)
        text = out.getvalue()
        self.assertTrue(text.startswith('CERTIFICATE F'))
        self.assertIn('cells: exa2 x1, g x1', text)

    def test_output_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / 'involution.cert'
            out = StringIO()
            call_command('certify', '--terms', str(POLYGONS_DIR / 'involution.poly'), '--output', str(target), stdout=out)
            self.assertTrue(target.read_text(encoding='utf-8').startswith('CERTIFICATE F\n'))
            self.assertIn('cells: none', out.getvalue())

    def test_missing_polygon(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('certify', '--terms', 'no/such/file.poly', stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)

    def test_rule_set_without_symmetry(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('certify', '--terms', str(POLYGONS_DIR / 'hexagon.poly'), '--rules', 'M', stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)


class ExpandKellyCommandTest(SimpleTestCase):
    def test_monoid_rules(self):
        out = StringIO()
        call_command('expand_kelly', '--all', '--rules', 'M', stdout=out)
        text = out.getvalue()
        self.assertIn('3/3 expansions derived', text)
        self.assertIn('lift (e*e*e);(m*id1);m', text)

    def test_base_peak(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('expand_kelly', 'penta', stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)

    def test_needs_a_peak(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('expand_kelly', stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)
