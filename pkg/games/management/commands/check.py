"""
Management command: supermodularity report.
"""
from games.management.base import AnalysisCommand


class Command(AnalysisCommand):
    help = 'Check supermodularity and increasing differences of a finite game'

    def add_arguments(self, parser):
        parser.add_argument('game', help='Path to the game file')
        parser.add_argument(
            '--max-witnesses',
            type=int,
            default=5,
            help='Counterexamples kept per property (default: 5)'
        )
        super().add_arguments(parser)

    def analyse(self, service, options):
        return service.check(self.read_input(options['game']), max_witnesses=options['max_witnesses'])
