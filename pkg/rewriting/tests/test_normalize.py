from io import StringIO

import numpy as np
from django.core.management import call_command
from django.test import SimpleTestCase, override_settings

from diagrams.core import GateKind, identity
from diagrams.enumeration import enumerate_diagrams, random_diagram
from diagrams.exceptions import ArityMismatch, BudgetExhausted, NotJoinable, ParseError
from diagrams.parser import parse_diagram
from rewriting.normalize import (
    RANDOM, bfs_join, closure, is_normal, normal_form, normalize, structural_normal_form,
)
from rewriting.rules import builtin_rule_set, parse_rules, structural_rules


class NormalizeTest(SimpleTestCase):
    def setUp(self):
        self.f = builtin_rule_set('F')
        self.m = builtin_rule_set('M')

    def test_associativity_step(self):
        result, path = normalize(parse_diagram('(m*id1);m'), self.f)
        self.assertEqual(result, parse_diagram('(id1*m);m'))
        self.assertEqual(path.rule_names(), ['alpha'])

    def test_involution_step(self):
        result, path = normalize(parse_diagram('s;s'), self.f)
        self.assertEqual(result, identity(2))
        self.assertEqual(len(path), 1)
        self.assertTrue(path.is_structural())

    def test_structural_normal_form(self):
        result, path = structural_normal_form(parse_diagram('(m*id1);s'))
        self.assertEqual(result, parse_diagram('(id1*s);(s*id1);(id1*m)'))
        self.assertEqual(path.rule_names(), ['merge_left'])

    def test_random_strategies_agree(self):
        source = parse_diagram('(s*id1);(id1*s);(s*id1);(m*id1);m')
        expected, _ = normalize(source, self.f)
        self.assertTrue(is_normal(expected, self.f))
        for seed in range(5):
            result, path = normalize(source, self.f, strategy=RANDOM, seed=seed)
            self.assertEqual(result, expected)
            self.assertEqual(path.target, result)

    def test_pentagon_source_needs_more_than_one_step(self):
        with self.assertRaises(BudgetExhausted):
            normalize(parse_diagram('(m*id2);(m*id1);m'), self.m, budget=1)

    def test_closure_of_pentagon_source(self):
        graph = closure(parse_diagram('(m*id2);(m*id1);m'), self.m)
        self.assertEqual(len(graph), 5)
        sinks = [d for d, out in graph.items() if not out]
        self.assertEqual(sinks, [parse_diagram('(id2*m);(id1*m);m')])

    @override_settings(SMC_STEP_BUDGET=2)
    def test_closure_respects_budget(self):
        with self.assertRaises(BudgetExhausted):
            closure(parse_diagram('(m*id2);(m*id1);m'), self.m)


class UniqueNormalFormTest(SimpleTestCase):
    seeds = range(10)

    def setUp(self):
        self.f = builtin_rule_set('F')

    def assertUniqueNormalForm(self, diagram, rules):
        sinks = [d for d, out in closure(diagram, rules).items() if not out]
        self.assertEqual(len(sinks), 1, msg=str(diagram))
        self.assertEqual(normalize(diagram, rules)[0], sinks[0], msg=str(diagram))
        for seed in self.seeds:
            self.assertEqual(normalize(diagram, rules, strategy=RANDOM, seed=seed)[0], sinks[0], msg=str(diagram))

    def test_enumerated_diagrams(self):
        for inputs in range(5):
            for outputs in range(1, 5):
                for diagram in enumerate_diagrams(inputs, outputs, 3):
                    self.assertUniqueNormalForm(diagram, self.f)

    def test_sampled_diagrams_up_to_six_gates(self):
        rng = np.random.default_rng(17)
        for _ in range(300):
            diagram = random_diagram(rng, int(rng.integers(0, 5)), int(rng.integers(4, 7)))
            self.assertUniqueNormalForm(diagram, self.f)

    def test_swaps_and_units_have_one_structural_form(self):
        allowed = {GateKind.S, GateKind.E}
        for inputs in range(3):
            for outputs in range(1, 5):
                for diagram in enumerate_diagrams(inputs, outputs, 4):
                    if set(diagram.kinds) <= allowed:
                        self.assertUniqueNormalForm(diagram, structural_rules())

    def test_structural_rules_alone_can_leave_two_forms(self):
        graph = closure(parse_diagram('(e*id2);(m*id1);s;s'), structural_rules())
        sinks = {d for d, out in graph.items() if not out}
        self.assertEqual(sinks, {parse_diagram('(e*id2);(m*id1)'), parse_diagram('s;(id1*e*id1);(id1*m);s')})
        self.assertEqual({normal_form(d, self.f) for d in sinks}, {identity(2)})


class JoinSearchTest(SimpleTestCase):
    def test_branches_of_the_triangle_meet(self):
        rules = builtin_rule_set('M')
        left, right = bfs_join(parse_diagram('m'), parse_diagram('(id1*e*id1);(id1*m);m'), rules)
        self.assertEqual(left.target, right.target)
        self.assertEqual(left.target, parse_diagram('m'))

    def test_reversed_merge_rule_leaves_normal_forms_apart(self):
        rules = builtin_rule_set('GM')
        with self.assertRaises(NotJoinable):
            bfs_join(
                parse_diagram('(id1*s);(s*id1);(id1*s);(m*id1)'),
                parse_diagram('(s*id1);(id1*s);(m*id1)'),
                rules, budget=1000,
            )


class RuleFileTest(SimpleTestCase):
    def test_builtin_sets(self):
        self.assertEqual(len(builtin_rule_set('M')), 3)
        self.assertEqual(len(builtin_rule_set('F')), 12)
        self.assertEqual(len(builtin_rule_set('F').structural()), 7)
        self.assertEqual(len(builtin_rule_set('GM')), 11)
        self.assertNotIn('merge_swap', builtin_rule_set('GM'))

    def test_custom_rules(self):
        rules = parse_rules('# comment\nflip structural : s;s => id2\n')
        self.assertTrue(rules.get('flip').structural)

    def test_bad_rules(self):
        with self.assertRaises(ParseError):
            parse_rules('no arrow here')
        with self.assertRaises(ArityMismatch):
            parse_rules('bad : m => s')


class NormalizeCommandTest(SimpleTestCase):
    def test_prints_normal_form(self):
        out = StringIO()
        call_command('normalize', 's;s', stdout=out)
        lines = out.getvalue().split('\n')
        self.assertEqual(lines[0], 'id2')
        self.assertIn('inv@0', lines[1])
