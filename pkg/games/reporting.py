"""
Plain-text rendering of analysis reports.
"""
from typing import Dict, Iterable, List, Optional


def _profile(document: Optional[Dict]) -> str:
    if document is None:
        return '-'
    exact = '(' + ','.join(document['exact']) + ')'
    if all('/' not in v for v in document['exact']):
        return exact
    return f"{exact}  ~ ({', '.join(document['decimal'])})"


def _profile_set(documents: Iterable[Dict]) -> str:
    items = ['(' + ','.join(d['exact']) + ')' for d in documents]
    return ' '.join(items) if items else '(none)'


def _literal(value) -> str:
    if isinstance(value, list):
        return '(' + ','.join(_literal(v) for v in value) + ')'
    return str(value)


def _set_literal(values) -> str:
    return '{' + ', '.join(_literal(v) for v in values) + '}'


def _flags(values) -> str:
    return ', '.join(str(v).lower() for v in values)


def _holds(value) -> str:
    if value is None:
        return 'n/a'
    return 'holds: true' if value else 'holds: false'


def _trace_lines(label: str, trace: Optional[Dict]) -> List[str]:
    if trace is None:
        return []
    line = f"  {label}: {_profile(trace['profile'])}"
    if trace.get('best_response_calls') is not None:
        line += f"   calls: {trace['best_response_calls']}"
    return [line]


def _solve(report: Dict) -> List[str]:
    lines = _trace_lines('lne', report.get('lne')) + _trace_lines('gne', report.get('gne'))
    if 'equilibria' in report:
        lines.append(f"  equilibria: {_profile_set(report['equilibria'])}")
    if 'unique' in report:
        lines.append(f"  unique: {str(report['unique']).lower()}")
    return lines


def _restrict(report: Dict) -> List[str]:
    lines = _trace_lines('abstract lne', report['lne']) + _trace_lines('abstract gne', report['gne'])
    if 'abstract_equilibria' in report:
        lines.append(f"  abstract equilibria: {_profile_set(report['abstract_equilibria'])}")
    lines.append(f"  principal filters: {_flags(report['principal_filters'])}")
    theorem = report.get('theorem_condition')
    if theorem is not None:
        lines.append(f"  correctness condition {_holds(theorem['holds'])}"
                     f" ({theorem['witness_count']} witnesses)")
        for w in theorem['witnesses']:
            lines.append(f"    at {_literal(w['element'])}: {_literal(w['value'])}")
    lines.append(f"  EM-dominance ({report['dominance']['method']}) {_holds(report['dominance']['holds'])}")
    for warning in report.get('warnings', []):
        lines.append(f"  warning: {warning}")
    return lines


def _absresp(report: Dict) -> List[str]:
    lines = _trace_lines('abstract lne', report['lne']) + _trace_lines('abstract gne', report['gne'])
    concrete = report['concrete']
    lines.append(f"  concrete lne: {_profile(concrete['lne'])}")
    lines.append(f"  concrete gne: {_profile(concrete['gne'])}")
    lines.append(f"  error lne: {_profile(report['error']['lne'])}")
    lines.append(f"  error gne: {_profile(report['error']['gne'])}")
    lines.append(f"  EM-dominance ({report['dominance']['method']}) {_holds(report['dominance']['holds'])}")
    return lines


def _correctness(label: str, verdict: Dict) -> List[str]:
    lines = [f"  {label} {_holds(verdict['holds'])}"]
    counterexample = verdict.get('counterexample')
    if counterexample is not None:
        lines.append(f"    {counterexample['reason']} at {_literal(counterexample['element'])}: "
                     f"{_set_literal(counterexample['concrete'])} vs {_set_literal(counterexample['abstract'])}")
    return lines


def _verify(report: Dict) -> List[str]:
    lines = []
    for c in report['connections']:
        status = 'valid' if c.get('valid', True) else 'INVALID'
        lines.append(f"  {c['label']}: {status}, finitely disjunctive: {str(c['finitely_disjunctive']).lower()}, "
                     f"principal filter: {str(c['principal_filter']).lower()}")
    if 'relational' in report:
        lines.append(f"  relational: {str(report['relational']).lower()}")
    lines += _correctness(f"{report['relation']}-correctness ({report['correspondence']})", report['correctness'])
    for player in report.get('players', []):
        lines += _correctness(f"player {player['player']}", player)
    if 'complete' in report:
        lines.append(f"  completeness {_holds(report['complete']['holds'])}")
    if 'fixed_points' in report:
        lines.append(f"  fixed points: {_profile_set(report['fixed_points'])}")
    return lines


def _check(report: Dict) -> List[str]:
    lines = [
        f"  supermodular: {str(report['supermodular']).lower()}",
        f"  quasisupermodular: {str(report['quasisupermodular']).lower()}",
    ]
    for player in report['players']:
        lines.append(f"  player {player['player']}: supermodular {str(player['supermodular']).lower()}, "
                     f"quasisupermodular {str(player['quasisupermodular']).lower()}")
        for key in ('own_supermodular', 'increasing_differences', 'own_quasisupermodular', 'single_crossing'):
            verdict = player.get(key)
            if verdict and verdict['counterexample']:
                w = verdict['counterexample']
                lines.append(f"    {key} fails: {_literal(w['lower'])} -> {_literal(w['upper'])} "
                             f"({_literal(w['left'])} vs {_literal(w['right'])})")
    return lines


RENDERERS = {
    'solve': _solve,
    'restrict': _restrict,
    'absresp': _absresp,
    'verify': _verify,
    'check': _check,
}


def render_text(report: Dict) -> str:
    header = f"{report['command']} {report.get('game', '')}".rstrip()
    return '\n'.join([header] + RENDERERS[report['command']](report)) + '\n'
