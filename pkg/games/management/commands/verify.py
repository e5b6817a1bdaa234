"""
Management command: validate an abstraction and check correctness.
"""
from games.management.base import AnalysisCommand
from games.services import CORRESPONDENCES


class Command(AnalysisCommand):
    help = 'Validate an abstraction and check correctness of the abstract best response'

    def add_arguments(self, parser):
        parser.add_argument('game', help='Path to the game file')
        parser.add_argument('abstraction', help='Path to the abstraction file')
        parser.add_argument(
            '--relation',
            choices=['smyth', 'hoare', 'egli-milner', 's', 'h', 'em'],
            default='egli-milner',
            help='Powerset relation for correctness (default: egli-milner)'
        )
        parser.add_argument(
            '--correspondence',
            choices=CORRESPONDENCES,
            help='restricted game best response or best correct approximation '
                 '(default: restricted for per-player abstractions, bca for a product)'
        )
        super().add_arguments(parser)

    def analyse(self, service, options):
        return service.verify(
            self.read_input(options['game']),
            self.read_input(options['abstraction']),
            relation=options['relation'],
            correspondence=options['correspondence'],
        )
