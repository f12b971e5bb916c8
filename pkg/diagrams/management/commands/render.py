from diagrams.management.base import DiagramCommand
from diagrams.render import render_diagram


class Command(DiagramCommand):
    help = 'Draw a diagram as ASCII art or as a standalone TikZ document'

    def add_arguments(self, parser):
        parser.add_argument('diagram', help='diagram expression')
        parser.add_argument('--format', choices=['ascii', 'tikz'], default='ascii')

    def handle(self, *args, **options):
        diagram = self.parse(options['diagram'])
        self.stdout.write(render_diagram(diagram, options['format']))
