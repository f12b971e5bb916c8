from itertools import permutations

from django.test import SimpleTestCase

from diagrams.exceptions import NonLinearTerm, ParseError, UnknownVariable
from diagrams.parser import parse_diagram
from rewriting.normalize import normalize
from rewriting.rules import structural_rules
from coherence.terms import (
    UNIT, Product, Var, diagram_to_term, parse_term, print_term, read_labels, term_to_diagram,
)

TERMS = ('(x#y)', '((x#y)#z)', '(y#(x#I))', '((z#I)#(x#y))', '(I#(w#((y#x)#z)))', 'I')


class TermParsingTest(SimpleTestCase):
    def test_product_and_unit(self):
        self.assertEqual(parse_term('(x#(I#y))'), Product(Var('x'), Product(UNIT, Var('y'))))

    def test_printing_round_trip(self):
        for text in TERMS:
            self.assertEqual(print_term(parse_term(text)), text)

    def test_unbalanced(self):
        with self.assertRaises(ParseError):
            parse_term('(x#y')
        with self.assertRaises(ParseError):
            parse_term('x y')


class TermToDiagramTest(SimpleTestCase):
    def test_product_is_a_merge(self):
        self.assertEqual(term_to_diagram(parse_term('(x#y)'), ['x', 'y']), parse_diagram('m'))

    def test_swapped_inputs(self):
        result = term_to_diagram(parse_term('(y#(x#I))'), ['x', 'y'])
        self.assertEqual(result, parse_diagram('(s*e);(id1*m);m'))

    def test_repeated_variable(self):
        with self.assertRaises(NonLinearTerm):
            term_to_diagram(parse_term('(x#x)'), ['x'])

    def test_variable_outside_order(self):
        with self.assertRaises(UnknownVariable):
            term_to_diagram(parse_term('(x#y)'), ['x'])
        with self.assertRaises(UnknownVariable):
            term_to_diagram(parse_term('x'), ['x', 'y'])

    def test_reading_back(self):
        for text in TERMS:
            term = parse_term(text)
            names = sorted({n for n in text if n.islower()})
            for order in permutations(names):
                diagram = term_to_diagram(term, order)
                self.assertEqual(diagram_to_term(diagram, order), term, (text, order))

    def test_result_is_structurally_normal(self):
        for text in TERMS:
            term = parse_term(text)
            names = sorted({n for n in text if n.islower()})
            diagram = term_to_diagram(term, names)
            self.assertEqual(normalize(diagram, structural_rules())[0], diagram)

    def test_structural_steps_keep_the_reading(self):
        labels = [Var('x'), Var('y'), Var('z')]
        before = parse_diagram('(m*id1);s;m')
        after = parse_diagram('(id1*s);(s*id1);(id1*m);m')
        self.assertEqual(read_labels(before, labels), read_labels(after, labels))
