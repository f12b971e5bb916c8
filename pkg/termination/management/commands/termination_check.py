from pathlib import Path

from diagrams.exceptions import DiagramError
from diagrams.management.base import DiagramCommand
from rewriting.rules import resolve_rule_set
from termination.affine import Interpretation, parse_interpretation, verify_termination


class Command(DiagramCommand):
    help = 'Check that every rule strictly decreases under an affine interpretation'

    def add_arguments(self, parser):
        parser.add_argument('--rules', default='F', help='M, F, GM or a rule file')
        parser.add_argument(
            '--interpretation',
            default=None,
            help='file with lines like `m: 2x+y`, `s: (x+y, x)`, `e: 1`',
        )

    def handle(self, *args, **options):
        try:
            rules = resolve_rule_set(options['rules'])
            interpretation = Interpretation()
            if options['interpretation']:
                interpretation = parse_interpretation(Path(options['interpretation']).read_text(encoding='utf-8'))
            report = verify_termination(rules, interpretation)
        except (DiagramError, KeyError, OSError) as exc:
            self.fail_input(exc)

        self.stdout.write(report.to_frame().to_string(index=False))
        passed = sum(v.decreases for v in report.verdicts)
        self.answer(report.passed, f'{passed}/{len(report.verdicts)} rules decrease')
