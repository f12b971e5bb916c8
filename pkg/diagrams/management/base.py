import sys

from django.core.management.base import BaseCommand, CommandError

from diagrams.exceptions import DiagramError
from diagrams.parser import parse_diagram

INPUT_ERROR = 2
NEGATIVE = 1


class DiagramCommand(BaseCommand):
    """
    Shared plumbing for the diagram commands: input errors leave with status 2,
    negative answers with status 1.
    """

    def parse(self, text):
        try:
            return parse_diagram(text)
        except DiagramError as exc:
            raise CommandError(f'{type(exc).__name__}: {exc}', returncode=INPUT_ERROR)

    def fail_input(self, exc):
        raise CommandError(f'{type(exc).__name__}: {exc}', returncode=INPUT_ERROR)

    def answer(self, ok, message):
        style = self.style.SUCCESS if ok else self.style.WARNING
        self.stdout.write(style(message))
        if not ok:
            sys.exit(NEGATIVE)
