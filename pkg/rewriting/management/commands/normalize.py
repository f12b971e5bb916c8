import sys

from diagrams.exceptions import BudgetExhausted, DiagramError
from diagrams.management.base import NEGATIVE, DiagramCommand
from rewriting.normalize import LEFTMOST, RANDOM, normalize
from rewriting.rules import resolve_rule_set


class Command(DiagramCommand):
    help = 'Rewrite a diagram to normal form and print the path taken'

    def add_arguments(self, parser):
        parser.add_argument('diagram', help='diagram expression')
        parser.add_argument('--rules', default='F', help='M, F, GM or a rule file')
        parser.add_argument('--strategy', choices=[LEFTMOST, RANDOM], default=LEFTMOST)
        parser.add_argument('--seed', type=int, default=None)
        parser.add_argument('--budget', type=int, default=None, help='maximum number of steps')

    def handle(self, *args, **options):
        diagram = self.parse(options['diagram'])
        try:
            rules = resolve_rule_set(options['rules'])
            result, path = normalize(
                diagram, rules, strategy=options['strategy'],
                seed=options['seed'], budget=options['budget'],
            )
        except BudgetExhausted as exc:
            self.stdout.write(self.style.ERROR(f'BudgetExhausted: {exc}'))
            sys.exit(NEGATIVE)
        except (DiagramError, KeyError, OSError) as exc:
            self.fail_input(exc)

        self.stdout.write(str(result))
        for s in path:
            self.stdout.write(f'  {s.label():<16} {s.target}')
        self.stdout.write(self.style.SUCCESS(f'{len(path)} steps'))
