from diagrams.exceptions import DiagramError, ExpansionUnavailable, UnknownPeak
from diagrams.management.base import DiagramCommand
from diagrams.parser import print_diagram
from rewriting.rules import resolve_rule_set

from coherence.expansion import expand_kelly, kelly_ids


class Command(DiagramCommand):
    help = 'Derive the expansion of Kelly and weak-Kelly cells into base, foldable and earlier Kelly cells'

    def add_arguments(self, parser):
        parser.add_argument('peak', nargs='?', help='peak id such as kelly-3 or weak-7')
        parser.add_argument('--all', action='store_true', help='expand every Kelly and weak-Kelly peak')
        parser.add_argument('--rules', default='F', help='M, F or a rule file')

    def handle(self, *args, **options):
        if not options['all'] and not options['peak']:
            self.fail_input(ValueError('name a peak or pass --all'))
        names = kelly_ids() if options['all'] else (options['peak'],)
        try:
            rules = resolve_rule_set(options['rules'])
        except (DiagramError, KeyError, OSError) as exc:
            self.fail_input(exc)

        missing, derived = [], 0
        for name in names:
            try:
                expansion = expand_kelly(name, rules)
            except UnknownPeak as exc:
                if options['all']:
                    continue
                self.fail_input(exc)
            except ExpansionUnavailable as exc:
                missing.append(name)
                self.stdout.write(self.style.WARNING(f'{name:<10} unavailable: {exc}'))
                continue
            except DiagramError as exc:
                self.fail_input(exc)
            derived += 1
            cells = ' '.join(expansion.cells()) or '-'
            self.stdout.write(f'{name:<10} lift {print_diagram(expansion.lift.source):<48} {len(expansion.edits):>4} edits  {cells}')
        self.answer(not missing, f'{derived}/{derived + len(missing)} expansions derived')
