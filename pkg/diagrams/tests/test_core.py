import numpy as np
from django.test import SimpleTestCase, override_settings

from diagrams.core import (
    Context, GateKind, WhiskeredGate, canonical_form, equals, extract_block, from_slices, gate,
    identity, par_compose, port_graph, seq_compose,
)
from diagrams.enumeration import enumerate_diagrams, interchange_closure, random_diagram, shuffle_slices
from diagrams.exceptions import ArityMismatch, CapacityExceeded, MalformedDiagram, ParseError
from diagrams.parser import parse_diagram, print_diagram


class CompositionTest(SimpleTestCase):
    def setUp(self):
        self.m = gate('m')
        self.e = gate('e')
        self.s = gate('s')

    def test_identity_prints_its_width(self):
        self.assertEqual(print_diagram(identity(2)), 'id2')
        self.assertEqual(identity(0).inputs, 0)

    def test_associativity_diagram_is_two_stacked_merges(self):
        d = seq_compose(par_compose(self.m, identity(1)), self.m)
        self.assertEqual(d.slices, (WhiskeredGate(0, GateKind.M, 1), WhiskeredGate(0, GateKind.M, 0)))
        self.assertEqual((d.inputs, d.outputs), (3, 1))

    def test_sequential_arity_is_checked(self):
        with self.assertRaises(ArityMismatch):
            seq_compose(self.m, self.m)

    def test_interchange_law(self):
        first = parse_diagram('(m*id2);(id1*m)')
        second = parse_diagram('(id2*m);(m*id1)')
        self.assertEqual(first, second)
        self.assertEqual(print_diagram(first), '(m*m)')

    def test_bracketings_are_different_diagrams(self):
        self.assertFalse(equals(parse_diagram('(m*id1);m'), parse_diagram('(id1*m);m')))

    def test_units_are_scheduled_left_to_right(self):
        d = par_compose(self.e, self.e)
        self.assertEqual(d.slices, (WhiskeredGate(0, GateKind.E, 0), WhiskeredGate(1, GateKind.E, 0)))
        self.assertEqual(print_diagram(d), '(e*e)')

    def test_identity_is_neutral(self):
        d = parse_diagram('(s*id1);(id1*m)')
        self.assertEqual(seq_compose(identity(3), d), d)
        self.assertEqual(par_compose(identity(0), d), d)

    @override_settings(SMC_DIAGRAM_CAPACITY=3)
    def test_capacity_is_enforced(self):
        with self.assertRaises(CapacityExceeded):
            identity(4)
        with self.assertRaises(CapacityExceeded):
            parse_diagram('s;s;s;s')

    def test_malformed_slices_are_rejected(self):
        with self.assertRaises(MalformedDiagram):
            from_slices(2, [WhiskeredGate(1, GateKind.M, 0)])


class ParserTest(SimpleTestCase):
    def test_round_trip_through_printer(self):
        for text in ['id2', 'e', '(e*id1);m', '(s*id1);(id1*s);(s*id1)', 'e;(id1*e);m']:
            d = parse_diagram(text)
            self.assertEqual(parse_diagram(print_diagram(d)), d)

    def test_printer_groups_side_by_side_gates(self):
        for text in ['(e*e);m', '(e*id2);(m*id1);m', '(s*e);(id1*m);m', '(id1*e*id1);(m*id1);m', '(s*id1);(id1*s);(s*id1)']:
            self.assertEqual(print_diagram(parse_diagram(text)), text)
        self.assertEqual(print_diagram(parse_diagram('e;(id1*e);m')), '(e*e);m')

    def test_errors(self):
        for text in ['', 'm;;m', 'x', '(m', 'id', 'm)']:
            with self.assertRaises(ParseError, msg=text):
                parse_diagram(text)


class CanonicalFormTest(SimpleTestCase):
    def test_every_interchange_variant_has_the_same_canonical_form(self):
        for d in enumerate_diagrams(2, 2, 3):
            for variant in interchange_closure(d.inputs, d.slices):
                self.assertEqual(from_slices(d.inputs, variant), d)

    def test_canonical_form_is_idempotent(self):
        for d in enumerate_diagrams(2, 1, 3):
            self.assertEqual(canonical_form(d), d)
            self.assertEqual(canonical_form(canonical_form(d)), canonical_form(d))

    def test_enumeration_lists_each_diagram_once(self):
        found = enumerate_diagrams(1, 1, 2)
        self.assertEqual(len(found), len(set(found)))
        self.assertIn(identity(1), found)
        self.assertIn(parse_diagram('(e*id1);m'), found)
        self.assertIn(parse_diagram('(id1*e);m'), found)
        self.assertTrue(all(d.inputs == 1 and d.outputs == 1 for d in found))

    def test_only_unit_with_one_gate(self):
        self.assertEqual(enumerate_diagrams(0, 1, 1), [gate('e')])

    def test_random_shuffles_keep_the_canonical_form(self):
        rng = np.random.default_rng(11)
        for _ in range(500):
            d = random_diagram(rng, int(rng.integers(0, 5)), int(rng.integers(1, 11)))
            for _ in range(20):
                shuffled = shuffle_slices(rng, d.slices, int(rng.integers(1, 2 * len(d.slices) + 1)))
                self.assertEqual(from_slices(d.inputs, shuffled), d, msg=str(d))

    def test_shuffles_stay_inside_the_interchange_closure(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            d = random_diagram(rng, 2, int(rng.integers(2, 6)))
            closure = interchange_closure(d.inputs, d.slices)
            for _ in range(20):
                self.assertIn(shuffle_slices(rng, d.slices, 3), closure)


class CompositionLawsTest(SimpleTestCase):
    def setUp(self):
        self.rng = np.random.default_rng(3)

    def sample(self, inputs):
        return random_diagram(self.rng, inputs, int(self.rng.integers(0, 5)))

    def test_sequential_composition_is_associative(self):
        for _ in range(200):
            a = self.sample(int(self.rng.integers(0, 4)))
            b = self.sample(a.outputs)
            c = self.sample(b.outputs)
            self.assertEqual(seq_compose(seq_compose(a, b), c), seq_compose(a, seq_compose(b, c)))

    def test_parallel_composition_is_associative(self):
        for _ in range(200):
            a, b, c = (self.sample(int(self.rng.integers(0, 3))) for _ in range(3))
            self.assertEqual(par_compose(par_compose(a, b), c), par_compose(a, par_compose(b, c)))

    def test_identities_are_units(self):
        for _ in range(200):
            a = self.sample(int(self.rng.integers(0, 4)))
            self.assertEqual(seq_compose(identity(a.inputs), a), a)
            self.assertEqual(seq_compose(a, identity(a.outputs)), a)
            self.assertEqual(par_compose(identity(0), a), a)
            self.assertEqual(par_compose(a, identity(0)), a)

    def test_interchange_of_random_diagrams(self):
        for _ in range(100):
            a, b = self.sample(2), self.sample(1)
            stacked = seq_compose(par_compose(a, identity(b.inputs)), par_compose(identity(a.outputs), b))
            self.assertEqual(stacked, par_compose(a, b))


class PortGraphTest(SimpleTestCase):
    def test_wiring_of_associator_source(self):
        graph = port_graph(parse_diagram('(m*id1);m'))
        self.assertEqual(graph.sources[(0, 0)], ('in', 0))
        self.assertEqual(graph.sources[(1, 0)], (0, 0))
        self.assertEqual(graph.sources[(1, 1)], ('in', 2))
        self.assertEqual(graph.sources[('out', 0)], (1, 0))
        self.assertEqual(graph.successors(0), {1})
        self.assertEqual(graph.to_diagram(), parse_diagram('(m*id1);m'))


class BlockTest(SimpleTestCase):
    def test_whole_diagram_is_a_block(self):
        host = parse_diagram('(m*id1);m')
        occurrence = extract_block(host, {0, 1})
        self.assertEqual(occurrence.block, host)
        self.assertTrue(occurrence.context.is_trivial())

    def test_block_with_context(self):
        host = parse_diagram('(s*id1);(id1*m);m')
        occurrence = extract_block(host, {1, 2})
        self.assertEqual(occurrence.block, parse_diagram('(id1*m);m'))
        self.assertEqual(occurrence.top_gates, (0,))
        self.assertEqual(occurrence.context.fill(occurrence.block), host)

    def test_non_convex_set_is_refused(self):
        host = parse_diagram('s;s;s')
        self.assertIsNone(extract_block(host, {0, 2}))

    def test_plug_reports_provenance(self):
        context = Context(parse_diagram('s*id1'), 1, 0, gate('m'))
        host, tags = context.plug(gate('m'))
        self.assertEqual(host, parse_diagram('(s*id1);(id1*m);m'))
        self.assertEqual(tags, (('top', 0), ('mid', 0), ('bottom', 0)))
