"""
Management command: game with abstract best responses.
"""
from django.core.management.base import CommandError

from games.management.base import AnalysisCommand


class Command(AnalysisCommand):
    help = 'Solve the abstract best-response game and report the approximation error'

    def add_arguments(self, parser):
        parser.add_argument('game', help='Path to the game file')
        parser.add_argument('abstraction', nargs='?', help='Path to the abstraction file')
        parser.add_argument(
            '--ceil',
            type=int,
            help='Use the N-digit ceiling abstraction for every player'
        )
        super().add_arguments(parser)

    def analyse(self, service, options):
        if (options['abstraction'] is None) == (options['ceil'] is None):
            raise CommandError('Give either an abstraction file or --ceil N')
        abstraction = self.read_input(options['abstraction']) if options['abstraction'] else None
        return service.absresp(self.read_input(options['game']), abstraction, ceil=options['ceil'])
