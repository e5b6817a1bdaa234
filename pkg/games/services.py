"""
Analysis service behind the management commands.

Every public method parses its inputs, runs one analysis and returns a
report document (plain dicts and lists, ready for JSON). Runs are recorded
as AnalysisRun rows unless recording is disabled.
"""
import hashlib
import logging
import time
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from django.conf import settings
from django.db import DatabaseError
from django.utils import timezone

from eqlattice.abstract_games import (
    AbstractGame,
    abstract_best_response_game,
    best_correct_approx,
    check_complete_approx,
    check_correct_approx,
    check_theorem_condition,
    equilibrium_dominance,
    player_correctness,
    restrict_game,
)
from eqlattice.abstraction import (
    GaloisConnection,
    ceil_abstraction,
    is_principal_filter,
    relational_witness,
    validate_gc,
)
from eqlattice.bertrand import bertrand2_exact_equilibria
from eqlattice.exceptions import ContractViolation, UnsupportedOperation
from eqlattice.fixpoint_solvers import (
    Direction,
    SolveTrace,
    enumerate_equilibria,
    fix_set_multivalued,
    rt_solve,
)
from eqlattice.formatting import jsonable, profile_document
from eqlattice.game_model import Game, PropertyVerdict, best_response, is_supermodular_game
from eqlattice.lattice_core import Elem, flatten
from eqlattice.powerset_orders import SetRelation
from games.gamespec import ParsedAbstraction, parse_abstraction, parse_game

logger = logging.getLogger('games')

SOLVE_MODES = ('lfp', 'gfp', 'enumerate', 'all')
CORRESPONDENCES = ('restricted', 'bca')
MAX_LISTED_MEMBERS = 64


def inputs_digest(*texts: str) -> str:
    """sha256 over the input file texts, separated by NUL bytes."""
    digest = hashlib.sha256()
    for text in texts:
        digest.update(text.encode('utf-8'))
        digest.update(b'\0')
    return digest.hexdigest()


def _trace_document(trace: Optional[SolveTrace], concretize: Callable = None) -> Optional[Dict]:
    if trace is None:
        return None
    result = concretize(trace.result) if concretize else trace.result
    return {
        'profile': profile_document(result),
        'best_response_calls': trace.best_response_calls,
        'sweeps': trace.sweeps,
    }


def _profiles(elements) -> List[Dict]:
    return [profile_document(x) for x in sorted(elements)]


def _verdict_document(verdict: PropertyVerdict) -> Dict:
    witness = verdict.counterexample
    return {
        'holds': verdict.holds,
        'pairs_checked': verdict.pairs_checked,
        'counterexample': None if witness is None else {
            'lower': jsonable(witness.lower),
            'upper': jsonable(witness.upper),
            'left': jsonable(witness.left),
            'right': jsonable(witness.right),
            'note': witness.note,
        },
    }


class AnalysisService:
    """Runs the solve/restrict/absresp/verify/check analyses."""

    def __init__(self, max_workers: Optional[int] = None, max_sweeps: Optional[int] = None,
                 record_runs: Optional[bool] = None):
        conf = getattr(settings, 'EQLATTICE', {})
        self.max_workers = max_workers or conf.get('MAX_WORKERS', 4)
        self.max_sweeps = max_sweeps or conf.get('MAX_SWEEPS', 10000)
        self.record_runs = conf.get('RECORD_RUNS', True) if record_runs is None else record_runs

    # Run records

    def _start_record(self, command: str, digest: str, params: Dict):
        if not self.record_runs:
            return None
        from games.models import AnalysisRun
        try:
            return AnalysisRun.objects.create(
                command=command,
                status='in_progress',
                inputs_digest=digest,
                request_params=params,
                metadata={'max_workers': self.max_workers, 'max_sweeps': self.max_sweeps},
            )
        except DatabaseError as e:
            logger.warning(f"Not recording {command} run: {e}")
            return None

    def _finish_record(self, run, status: str, started: float, report: Optional[Dict] = None,
                       error: Optional[str] = None, game_kind: str = '',
                       analysis_seconds: Optional[float] = None):
        if run is None:
            return
        run.status = status
        run.game_kind = game_kind
        run.duration_seconds = time.time() - started
        run.completed_at = timezone.now()
        if analysis_seconds is not None:
            run.metadata = {**run.metadata, 'analysis_seconds': round(analysis_seconds, 6)}
        if report is not None:
            run.report = report
        if error is not None:
            run.error_message = error
        try:
            run.save()
        except DatabaseError as e:
            logger.warning(f"Could not update run {run.id}: {e}")

    def _run(self, command: str, texts: Sequence[str], params: Dict,
             analysis: Callable[[], Dict]) -> Dict:
        """Create the run record, execute ``analysis``, then mark it completed or failed."""
        digest = inputs_digest(*texts)
        started = time.time()
        run = self._start_record(command, digest, params)
        logger.info(f"Starting {command} analysis {run.id if run else '(unrecorded)'}")
        analysis_started = time.time()
        try:
            report = analysis()
        except Exception as e:
            logger.error(f"Error in {command} analysis: {e}")
            self._finish_record(run, 'failed', started, error=str(e),
                                analysis_seconds=time.time() - analysis_started)
            raise
        analysis_seconds = time.time() - analysis_started
        report = {'command': command, 'inputs_digest': digest, **report}
        if run is not None:
            report['run_id'] = str(run.id)
        self._finish_record(run, 'completed', started, report=report, game_kind=report.get('game', ''),
                            analysis_seconds=analysis_seconds)
        logger.info(f"{command} analysis finished in {time.time() - started:.2f}s")
        return report

    # Shared helpers

    def _concrete_extremes(self, G: Game) -> Tuple[Elem, Elem, Dict]:
        """Least and greatest equilibria of G, exactly for the continuous two-firm model."""
        if not G.profile_space.is_finite and G.kind == 'bertrand2':
            lne, gne = bertrand2_exact_equilibria()
            return lne, gne, {'method': 'exact-linear-systems'}
        low = rt_solve(G, Direction.LFP, max_sweeps=self._sweep_cap(G))
        high = rt_solve(G, Direction.GFP, max_sweeps=self._sweep_cap(G))
        return low.result, high.result, {
            'method': 'round-robin',
            'lne_calls': low.best_response_calls,
            'gne_calls': high.best_response_calls,
        }

    def _sweep_cap(self, G: Game) -> Optional[int]:
        return None if G.profile_space.is_finite else self.max_sweeps

    def _per_player(self, parsed: ParsedAbstraction, command: str) -> Tuple[GaloisConnection, ...]:
        if parsed.is_product:
            raise ContractViolation(f"{command} needs one abstraction per player, not a product abstraction")
        return parsed.gcs

    # Commands

    def solve(self, game_text: str, mode: str = 'all') -> Dict:
        """
        Least/greatest equilibria by round-robin iteration and, for finite
        games, the full equilibrium set.

        Args:
            game_text: game file contents
            mode: lfp, gfp, enumerate or all

        Returns:
            Report document with profiles, call counts and the equilibrium set
        """
        if mode not in SOLVE_MODES:
            raise ContractViolation(f"unknown solve mode {mode!r}")

        def analysis():
            G = parse_game(game_text)
            report = {'game': G.kind, 'mode': mode}
            finite = G.profile_space.is_finite
            if mode == 'enumerate' and not finite:
                raise UnsupportedOperation(f"cannot enumerate equilibria of {G!r}: infinite strategy spaces")

            if not finite and G.kind == 'bertrand2':
                lne, gne = bertrand2_exact_equilibria()
                report['method'] = 'exact-linear-systems'
                if mode in ('lfp', 'all'):
                    report['lne'] = {'profile': profile_document(lne), 'best_response_calls': None}
                if mode in ('gfp', 'all'):
                    report['gne'] = {'profile': profile_document(gne), 'best_response_calls': None}
                report['unique'] = lne == gne
                return report

            report['method'] = 'round-robin'
            low = high = None
            if mode in ('lfp', 'all'):
                low = rt_solve(G, Direction.LFP, max_sweeps=self._sweep_cap(G))
                report['lne'] = _trace_document(low)
            if mode in ('gfp', 'all'):
                high = rt_solve(G, Direction.GFP, max_sweeps=self._sweep_cap(G))
                report['gne'] = _trace_document(high)
            if low and high:
                report['unique'] = low.result == high.result
            if mode in ('enumerate', 'all') and finite:
                equilibria = enumerate_equilibria(G, max_workers=self.max_workers)
                report['equilibria'] = _profiles(equilibria)
            return report

        return self._run('solve', [game_text], {'mode': mode}, analysis)

    def restrict(self, game_text: str, abstraction_text: str) -> Dict:
        """Play the game on the abstract strategy spaces and check its equilibria against the original."""
        def analysis():
            G = parse_game(game_text)
            gcs = self._per_player(parse_abstraction(abstraction_text, G), 'restrict')
            game = restrict_game(G, gcs)
            derived = game.derived_game

            low = rt_solve(derived, Direction.LFP, max_sweeps=self._sweep_cap(derived))
            high = rt_solve(derived, Direction.GFP, max_sweeps=self._sweep_cap(derived))
            report = {
                'game': derived.kind,
                'abstractions': [g.label for g in gcs],
                'supermodularity_guaranteed': game.supermodularity_guaranteed,
                'warnings': list(game.warnings),
                'lne': _trace_document(low, game.concretize),
                'gne': _trace_document(high, game.concretize),
                'principal_filters': [is_principal_filter(g) for g in gcs],
            }
            if derived.profile_space.is_finite:
                abstract_eq = enumerate_equilibria(derived, max_workers=self.max_workers)
                report['abstract_equilibria'] = _profiles(game.concretize(a) for a in abstract_eq)

            try:
                theorem = check_theorem_condition(G, gcs)
                report['theorem_condition'] = {
                    'holds': theorem.holds,
                    'holds_unconditionally': theorem.holds_unconditionally,
                    'witnesses': [
                        {'element': jsonable(w.element), 'value': jsonable(w.value)}
                        for w in theorem.witnesses[:10]
                    ],
                    'witness_count': len(theorem.witnesses),
                }
            except UnsupportedOperation as e:
                logger.warning(f"Skipping correctness condition: {e}")
                report['theorem_condition'] = None

            report['dominance'] = self._dominance(game)
            return report

        return self._run('restrict', [game_text, abstraction_text], {}, analysis)

    def _dominance(self, game: AbstractGame) -> Dict:
        extremes = None
        if not (game.base.profile_space.is_finite and game.derived_game.profile_space.is_finite):
            low, high, _ = self._concrete_extremes(game.base)
            extremes = (low, high)
        verdict = equilibrium_dominance(game, concrete_extremes=extremes, max_workers=self.max_workers)
        return {
            'holds': verdict.holds,
            'method': verdict.method,
            'concrete': _profiles(verdict.concrete),
            'abstract': _profiles(verdict.abstract),
        }

    def absresp(self, game_text: str, abstraction_text: Optional[str] = None,
                ceil: Optional[int] = None) -> Dict:
        """
        Solve the abstract best-response game and report its distance from the
        concrete extremal equilibria.

        Args:
            game_text: game file contents
            abstraction_text: abstraction file contents (per-player)
            ceil: apply the N-digit ceiling abstraction to every player instead
        """
        if (abstraction_text is None) == (ceil is None):
            raise ContractViolation("absresp takes either an abstraction file or --ceil, not both")

        def analysis():
            G = parse_game(game_text)
            if ceil is not None:
                gcs = tuple(ceil_abstraction(ceil, space, label=f"cl_{ceil}") for space in G.spaces)
            else:
                gcs = self._per_player(parse_abstraction(abstraction_text, G), 'absresp')
            game = abstract_best_response_game(G, gcs)
            derived = game.derived_game

            low = rt_solve(derived, Direction.LFP, max_sweeps=self._sweep_cap(derived))
            high = rt_solve(derived, Direction.GFP, max_sweeps=self._sweep_cap(derived))
            concrete_low, concrete_high, concrete_info = self._concrete_extremes(G)

            report = {
                'game': derived.kind,
                'abstractions': [g.label for g in gcs],
                'lne': _trace_document(low),
                'gne': _trace_document(high),
                'concrete': {
                    'lne': profile_document(concrete_low),
                    'gne': profile_document(concrete_high),
                    **concrete_info,
                },
                'error': {
                    'lne': profile_document(tuple(
                        a - c for a, c in zip(flatten(low.result), flatten(concrete_low)))),
                    'gne': profile_document(tuple(
                        a - c for a, c in zip(flatten(high.result), flatten(concrete_high)))),
                },
            }
            space = G.profile_space
            report['dominance'] = {
                'holds': space.leq(concrete_low, low.result) and space.leq(concrete_high, high.result),
                'method': 'extremal',
            }
            if space.is_finite:
                report['dominance'] = self._dominance(game)
            return report

        params = {'ceil': ceil} if ceil is not None else {}
        texts = [game_text] + ([abstraction_text] if abstraction_text is not None else [])
        return self._run('absresp', texts, params, analysis)

    def verify(self, game_text: str, abstraction_text: str, relation: str = 'egli-milner',
               correspondence: Optional[str] = None) -> Dict:
        """
        Validate the abstraction and check correctness of an abstract best
        response against the concrete one.

        ``restricted`` compares the best response of the restricted game
        (jointly and per player); ``bca`` compares the best correct
        approximation of B, and also tests completeness and reports its
        fixed points.
        """
        rel = SetRelation.parse(relation)
        if correspondence is not None and correspondence not in CORRESPONDENCES:
            raise ContractViolation(f"unknown correspondence {correspondence!r}")

        def analysis():
            G = parse_game(game_text)
            parsed = parse_abstraction(abstraction_text, G)
            mode = correspondence or ('bca' if parsed.is_product else 'restricted')
            connection = parsed.connection()
            report = {
                'game': G.kind,
                'relation': rel.value,
                'correspondence': mode,
                'connections': self._connection_documents(parsed),
            }
            if connection.concrete.is_finite:
                witness = relational_witness(connection)
                report['relational'] = witness is not None
                report['relational_witness'] = jsonable(witness) if witness is not None else None

            if mode == 'restricted':
                game = restrict_game(G, self._per_player(parsed, 'verify --correspondence restricted'))
                joint = check_correct_approx(best_response(G), best_response(game.derived_game),
                                             connection, rel)
                report['correctness'] = self._correctness_document(joint)
                report['players'] = [
                    {'player': i + 1, **self._correctness_document(player_correctness(game, i, rel))}
                    for i in range(G.players)
                ]
            else:
                B = best_response(G)
                approx = best_correct_approx(B, connection)
                report['correctness'] = self._correctness_document(
                    check_correct_approx(B, approx, connection, rel))
                complete = check_complete_approx(B, approx, connection)
                report['complete'] = {
                    'holds': complete.holds,
                    'lfp_agreement': complete.lfp_agreement,
                    'counterexample': None if complete.counterexample is None
                    else jsonable(complete.counterexample.element),
                }
                fixed = fix_set_multivalued(approx)
                report['fixed_points'] = _profiles(fixed.elements)
                report['fixed_points_form_lattice'] = fixed.is_lattice
            return report

        params = {'relation': rel.value, 'correspondence': correspondence}
        return self._run('verify', [game_text, abstraction_text], params, analysis)

    def _connection_documents(self, parsed: ParsedAbstraction) -> List[Dict]:
        connections = [parsed.product] if parsed.is_product else list(parsed.gcs)
        documents = []
        for gc in connections:
            document = {
                'label': gc.label,
                'finitely_disjunctive': gc.finitely_disjunctive,
                'principal_filter': is_principal_filter(gc),
            }
            if gc.abstract.is_finite and gc.abstract.cardinality() <= MAX_LISTED_MEMBERS:
                document['members'] = _profiles(gc.abstract.enumerate())
            if gc.concrete.is_finite:
                validation = validate_gc(gc)
                document['laws'] = validation.laws
                document['flags'] = validation.flags
                document['valid'] = validation.ok
            else:
                logger.info(f"Skipping exhaustive validation of {gc.label}: infinite concrete lattice")
            documents.append(document)
        return documents

    @staticmethod
    def _correctness_document(verdict) -> Dict:
        counterexample = verdict.counterexample
        return {
            'holds': verdict.holds,
            'fixed_point_condition': verdict.fixed_point_condition,
            'soundness': verdict.soundness,
            'counterexample': None if counterexample is None else {
                'element': jsonable(counterexample.element),
                'concrete': jsonable(counterexample.concrete),
                'abstract': jsonable(counterexample.abstract),
                'reason': counterexample.reason,
            },
        }

    def check(self, game_text: str, max_witnesses: int = 5) -> Dict:
        """Supermodularity report of a finite game."""
        def analysis():
            G = parse_game(game_text)
            result = is_supermodular_game(G, max_witnesses=max_witnesses)
            players = []
            for p in result.players:
                document = {
                    'player': p.player + 1,
                    'supermodular': p.supermodular,
                    'quasisupermodular': p.quasisupermodular,
                    'own_supermodular': _verdict_document(p.own_supermodular),
                    'increasing_differences': _verdict_document(p.increasing_differences),
                }
                if p.own_quasisupermodular is not None:
                    document['own_quasisupermodular'] = _verdict_document(p.own_quasisupermodular)
                if p.single_crossing is not None:
                    document['single_crossing'] = _verdict_document(p.single_crossing)
                players.append(document)
            return {
                'game': G.kind,
                'supermodular': result.supermodular,
                'quasisupermodular': result.quasisupermodular,
                'players': players,
            }

        return self._run('check', [game_text], {'max_witnesses': max_witnesses}, analysis)
