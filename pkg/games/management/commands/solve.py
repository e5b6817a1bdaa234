"""
Management command: least, greatest and all equilibria of a game.
"""
from games.management.base import AnalysisCommand
from games.services import SOLVE_MODES


class Command(AnalysisCommand):
    help = 'Compute the equilibria of a game file'

    def add_arguments(self, parser):
        parser.add_argument('game', help='Path to the game file')
        parser.add_argument(
            '--mode',
            choices=SOLVE_MODES,
            default='all',
            help='lfp, gfp, enumerate or all (default: all)'
        )
        super().add_arguments(parser)

    def analyse(self, service, options):
        return service.solve(self.read_input(options['game']), mode=options['mode'])
