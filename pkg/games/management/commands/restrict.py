"""
Management command: game on abstract strategy spaces.
"""
from games.management.base import AnalysisCommand


class Command(AnalysisCommand):
    help = 'Solve the game restricted to an abstraction and check its equilibria'

    def add_arguments(self, parser):
        parser.add_argument('game', help='Path to the game file')
        parser.add_argument('abstraction', help='Path to the abstraction file')
        super().add_arguments(parser)

    def analyse(self, service, options):
        return service.restrict(self.read_input(options['game']), self.read_input(options['abstraction']))
