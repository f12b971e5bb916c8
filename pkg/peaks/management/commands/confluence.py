from diagrams.exceptions import DiagramError
from diagrams.management.base import DiagramCommand
from peaks.census import local_confluence_report
from peaks.fixtures import load_fixtures
from rewriting.rules import resolve_rule_set


class Command(DiagramCommand):
    help = 'Check local confluence of a rule set; exits 1 naming the peaks that do not join'

    def add_arguments(self, parser):
        parser.add_argument('--rules', default='F', help='M, F, GM or a rule file')
        parser.add_argument('--bound', type=int, default=4)
        parser.add_argument('--fixtures', default=None)
        parser.add_argument('--budget', type=int, default=1000, help='join search budget')

    def handle(self, *args, **options):
        try:
            rules = resolve_rule_set(options['rules'])
            fixtures = load_fixtures(options['fixtures']) if options['fixtures'] else None
            report = local_confluence_report(rules, options['bound'], fixtures=fixtures, budget=options['budget'])
        except (DiagramError, KeyError, OSError) as exc:
            self.fail_input(exc)

        for o in report.failures:
            self.stdout.write(self.style.ERROR(f'{o.peak}: {o.error}'))
        for o in report.mismatches:
            self.stdout.write(self.style.WARNING(
                f'{o.name}: classified {o.klass.value}, expected {o.fixture.expected.value}'
            ))
        for name in report.missing:
            self.stdout.write(self.style.WARNING(f'fixture {name} was not found'))
        if report.extras:
            self.stdout.write(f'{len(report.extras)} further peaks outside the fixture list')
        self.answer(report.confluent, report.summary())
