from diagrams.exceptions import DiagramError
from diagrams.parser import print_diagram
from diagrams.management.base import DiagramCommand
from peaks.census import local_confluence_report
from peaks.fixtures import load_fixtures
from peaks.peaks import render_peak
from rewriting.rules import resolve_rule_set


class Command(DiagramCommand):
    help = 'List the critical peaks of a rule set with their classes and join lengths'

    def add_arguments(self, parser):
        parser.add_argument('--rules', default='F', help='M, F, GM or a rule file')
        parser.add_argument('--bound', type=int, default=4)
        parser.add_argument('--fixtures', default=None, help='fixture file naming the expected peaks')
        parser.add_argument('--budget', type=int, default=None, help='join search budget')
        parser.add_argument('--render', action='store_true', help='draw every peak with its join')

    def handle(self, *args, **options):
        try:
            rules = resolve_rule_set(options['rules'])
            fixtures = load_fixtures(options['fixtures']) if options['fixtures'] else None
            report = local_confluence_report(rules, options['bound'], fixtures=fixtures, budget=options['budget'])
        except (DiagramError, KeyError, OSError) as exc:
            self.fail_input(exc)

        for o in report.outcomes:
            klass = o.klass.value if o.klass else 'not_joinable'
            lengths = f'{len(o.result.left_path)}/{len(o.result.right_path)}' if o.result else '-'
            self.stdout.write(f'{o.name:<10} {print_diagram(o.peak.source):<56} {"/".join(o.peak.rule_pair):<24} {klass:<18} {lengths}')
            if options['render']:
                self.stdout.write(render_peak(o.peak, o.result) + '\n')
        for name in report.missing:
            self.stdout.write(self.style.WARNING(f'fixture {name} was not found'))
        self.answer(report.confluent, report.summary())
