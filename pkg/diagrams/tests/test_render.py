from django.test import SimpleTestCase

from diagrams.core import identity
from diagrams.enumeration import enumerate_diagrams
from diagrams.parser import parse_diagram
from diagrams.render import parse_ascii, render_diagram, render_path


class AsciiRenderTest(SimpleTestCase):
    def test_identity_is_bare_wires(self):
        self.assertEqual(render_diagram(identity(2)), '| |')
        self.assertEqual(render_diagram(identity(0)), '.')

    def test_one_row_per_gate(self):
        text = render_diagram(parse_diagram('(m*id1);m'))
        self.assertEqual(text.split('\n'), ['| | |', 'M |', 'M'])

    def test_drawing_reads_back(self):
        for d in enumerate_diagrams(2, 2, 3):
            self.assertEqual(parse_ascii(render_diagram(d)), d)

    def test_path_shows_rule_names(self):
        text = render_path([parse_diagram('s;s'), identity(2)], labels=['inv'])
        self.assertIn('==[inv]==>', text)


class TikzRenderTest(SimpleTestCase):
    def test_standalone_document(self):
        text = render_diagram(parse_diagram('(s*id1);(id1*m)'), 'tikz')
        self.assertTrue(text.startswith('\\documentclass'))
        self.assertIn('\\begin{tikzpicture}', text)
        self.assertTrue(text.rstrip().endswith('\\end{document}'))

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            render_diagram(identity(1), 'svg')
