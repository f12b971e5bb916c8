from django.test import SimpleTestCase

from diagrams.exceptions import CompositionMismatch, ParseError, ShapeMismatch
from diagrams.parser import parse_diagram
from rewriting.rules import builtin_rule_set
from coherence.morphisms import GenKind, MorGen, mor_to_zigzag, morgen_to_edge, parse_morphism
from coherence.polygon import POLYGONS_DIR, load_polygon
from coherence.terms import Var, parse_term, term_to_diagram

XYZ = (Var('x'), Var('y'), Var('z'))


class MorphismParsingTest(SimpleTestCase):
    def test_generator_ends(self):
        gamma = parse_morphism('g(x,y,z)')
        self.assertEqual(gamma.source, parse_term('(x#(y#z))'))
        self.assertEqual(gamma.target, parse_term('(y#(x#z))'))

    def test_inverse_swaps_ends(self):
        expr = parse_morphism('x(x,y)~')
        self.assertEqual(expr.source, parse_term('(y#x)'))
        self.assertEqual(expr.target, parse_term('(x#y)'))

    def test_tensor_and_composition(self):
        expr = parse_morphism('(l(x)#1(y)).x(x,y)')
        self.assertEqual(expr.source, parse_term('((I#x)#y)'))
        self.assertEqual(expr.target, parse_term('(y#x)'))

    def test_ends_must_meet(self):
        with self.assertRaises(CompositionMismatch):
            parse_morphism('a(x,y,z).a(x,y,z)')

    def test_wrong_arity(self):
        with self.assertRaises(ShapeMismatch):
            parse_morphism('x(x,y,z)')

    def test_garbage(self):
        with self.assertRaises(ParseError):
            parse_morphism('q(x)')


class EdgeTest(SimpleTestCase):
    def test_associativity_fires_forward(self):
        edge = morgen_to_edge(MorGen(GenKind.ALPHA, XYZ), 'xyz')
        self.assertTrue(edge.forward)
        self.assertEqual(edge.step.rule.name, 'alpha')
        self.assertEqual(edge.source, parse_diagram('(m*id1);m'))
        self.assertEqual(edge.target, parse_diagram('(id1*m);m'))
        self.assertEqual(len(edge.moves), 1)

    def test_symmetry_fires_backward(self):
        edge = morgen_to_edge(MorGen(GenKind.TAU, XYZ[:2]), 'xy')
        self.assertFalse(edge.forward)
        self.assertEqual(edge.step.rule.name, 'tau')
        self.assertEqual(edge.source, parse_diagram('m'))
        self.assertEqual(edge.target, parse_diagram('s;m'))
        self.assertEqual([m.forward for m in edge.moves], [False])

    def test_identity_has_no_moves(self):
        edge = morgen_to_edge(MorGen(GenKind.IDENTITY, (parse_term('(x#y)'),)), 'xy')
        self.assertEqual(edge.moves, ())
        self.assertEqual(edge.source, edge.target)

    def test_missing_rule(self):
        with self.assertRaises(ShapeMismatch):
            morgen_to_edge(MorGen(GenKind.TAU, XYZ[:2]), 'xy', builtin_rule_set('M'))


class ZigzagTranslationTest(SimpleTestCase):
    def test_identity_expression(self):
        zigzag = mor_to_zigzag(parse_morphism('1((x#y))'), 'xy')
        self.assertEqual(len(zigzag), 0)
        self.assertEqual(zigzag.start, parse_diagram('m'))

    def test_whiskered_unit(self):
        zigzag = mor_to_zigzag(parse_morphism('l(x)#1(y)'), 'xy')
        self.assertEqual(zigzag.start, parse_diagram('(e*id2);(m*id1);m'))
        self.assertEqual([m.step.rule.name for m in zigzag], ['l'])
        self.assertEqual(zigzag.end, parse_diagram('m'))

    def test_hexagon_routes(self):
        polygon = load_polygon(POLYGONS_DIR / 'hexagon.poly')
        order = polygon.order()
        self.assertEqual(order, ('y', 'z', 'x'))
        top, bottom = (mor_to_zigzag(polygon.route_expr(r), order) for r in polygon.routes())
        start = term_to_diagram(parse_term('((x#y)#z)'), order)
        end = term_to_diagram(parse_term('(y#(z#x))'), order)
        for zigzag in (top, bottom):
            self.assertEqual((zigzag.start, zigzag.end), (start, end))
        self.assertEqual([m.step.rule.name for m in top if not m.step.structural], ['alpha', 'tau', 'alpha'])
        self.assertEqual([m.step.rule.name for m in bottom if not m.step.structural], ['tau', 'alpha', 'tau'])
