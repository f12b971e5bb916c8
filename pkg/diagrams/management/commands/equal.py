from diagrams.core import equals
from diagrams.management.base import DiagramCommand


class Command(DiagramCommand):
    help = 'Decide whether two diagram expressions denote the same diagram'

    def add_arguments(self, parser):
        parser.add_argument('first', help='first diagram expression')
        parser.add_argument('second', help='second diagram expression')

    def handle(self, *args, **options):
        first = self.parse(options['first'])
        second = self.parse(options['second'])
        same = equals(first, second)
        self.answer(same, 'true' if same else 'false')
