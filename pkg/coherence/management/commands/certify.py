import sys
from pathlib import Path

from diagrams.exceptions import DiagramError, ExpansionUnavailable
from diagrams.management.base import NEGATIVE, DiagramCommand
from rewriting.rules import resolve_rule_set

from coherence.expansion import full_expansion, kernel_expansions
from coherence.kernel import validate
from coherence.polygon import certify_polygon, load_polygon
from coherence.scripts import render_certificate, to_script


class Command(DiagramCommand):
    help = 'Certify that the two routes of a polygon of structure maps agree'

    def add_arguments(self, parser):
        parser.add_argument('--terms', required=True, help='polygon file with OBJECT, EDGE and TERMINAL lines')
        parser.add_argument('--rules', default='F', help='M, F or a rule file')
        parser.add_argument('--order', default=None, help='comma separated input order, default from TERMINAL')
        parser.add_argument('--output', default=None, help='write the certificate script here')
        parser.add_argument('--expand', action='store_true', help='replace Kelly cells by their expansions')
        parser.add_argument('--render', action='store_true', help='draw the sides of every non-plumbing cell')

    def handle(self, *args, **options):
        order = options['order'].split(',') if options['order'] else None
        try:
            rules = resolve_rule_set(options['rules'])
            polygon = load_polygon(options['terms'])
            certificate = certify_polygon(polygon, rules, order)
        except (DiagramError, KeyError, OSError) as exc:
            self.fail_input(exc)

        try:
            if options['expand']:
                certificate = full_expansion(certificate, rules)
            expansions = kernel_expansions(certificate, rules)
        except ExpansionUnavailable as exc:
            self.stdout.write(self.style.ERROR(f'ExpansionUnavailable: {exc}'))
            sys.exit(NEGATIVE)
        report = validate(certificate, expansions=expansions)
        script = to_script(certificate, expansions)
        if options['output']:
            Path(options['output']).write_text(script, encoding='utf-8')
        else:
            self.stdout.write(script, ending='')
        if options['render']:
            self.stdout.write(render_certificate(certificate), ending='')

        cells = certificate.non_plumbing()
        listed = ', '.join(f'{name} x{count}' for name, count in sorted(cells.items())) or 'none'
        if not report:
            self.stdout.write(self.style.ERROR(f'edit {report.failed_index}: {report.reason}'))
        self.answer(report.ok, f'{len(certificate)} edits, cells: {listed}')
