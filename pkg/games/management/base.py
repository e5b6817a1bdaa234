"""
Shared plumbing for the analysis commands: file reading, output format and
error translation.
"""
import json
import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from eqlattice.exceptions import EquilibriumError
from games.reporting import render_text
from games.services import AnalysisService

logger = logging.getLogger('games')


class AnalysisCommand(BaseCommand):
    """Runs one AnalysisService method and prints its report."""

    def add_arguments(self, parser):
        parser.add_argument(
            '--format',
            choices=['text', 'json'],
            default='text',
            help='Report format (default: text)'
        )

    def read_input(self, path: str) -> str:
        try:
            return Path(path).read_text(encoding='utf-8')
        except OSError as e:
            raise CommandError(f"Cannot read {path}: {e}")

    def analyse(self, service: AnalysisService, options) -> dict:
        raise NotImplementedError

    def handle(self, *args, **options):
        service = AnalysisService()
        try:
            report = self.analyse(service, options)
        except EquilibriumError as e:
            logger.error(f"{type(e).__name__}: {e}")
            raise CommandError(f"{type(e).__name__}: {e}")

        if options['format'] == 'json':
            self.stdout.write(json.dumps(report, indent=2))
        else:
            self.stdout.write(render_text(report), ending='')
