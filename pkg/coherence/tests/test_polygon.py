from django.test import SimpleTestCase

from diagrams.exceptions import CompositionMismatch, ParseError, ShapeMismatch
from coherence.polygon import POLYGONS_DIR, load_polygon, parse_polygon

TRIANGLE = """
# unit laws against associativity
OBJECT a: ((x#I)#y)
OBJECT b: (x#(I#y))
OBJECT c: (x#y)
EDGE assoc: a -> b : a(x,I,y)
EDGE left: b -> c : 1(x)#l(y)
EDGE right: a -> c : r(x)#1(y)
TERMINAL c
"""


class PolygonTest(SimpleTestCase):
    def test_routes_in_file_order(self):
        polygon = parse_polygon(TRIANGLE)
        routes = polygon.routes()
        self.assertEqual([[e.name for e in r] for r in routes], [['assoc', 'left'], ['right']])
        self.assertEqual(polygon.initial(), 'a')
        self.assertEqual(polygon.order(), ('x', 'y'))

    def test_shipped_polygons_have_two_routes(self):
        for name in ('hexagon', 'involution', 'kelly_left', 'kelly_right', 'kelly_units'):
            self.assertEqual(len(load_polygon(POLYGONS_DIR / f'{name}.poly').routes()), 2, name)

    def test_edge_must_fit_its_objects(self):
        with self.assertRaises(CompositionMismatch):
            parse_polygon(TRIANGLE.replace('a(x,I,y)', 'a(x,y,I)'))

    def test_terminal_required(self):
        with self.assertRaises(ParseError):
            parse_polygon(TRIANGLE.replace('TERMINAL c', ''))

    def test_unknown_line(self):
        with self.assertRaises(ParseError):
            parse_polygon(TRIANGLE + 'ARROW a -> c\n')

    def test_too_many_routes(self):
        with self.assertRaises(ShapeMismatch):
            parse_polygon(TRIANGLE + 'EDGE again: a -> c : r(x)#1(y)\n').routes()
