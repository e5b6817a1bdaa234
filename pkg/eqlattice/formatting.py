"""Exact and decimal rendering of rationals and profiles."""
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Dict, List

from eqlattice.lattice_core import Elem, flatten


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_decimal(q, places: int = 12) -> str:
    q = Fraction(q)
    with localcontext() as ctx:
        ctx.prec = 60
        value = Decimal(q.numerator) / Decimal(q.denominator)
        text = format(value.quantize(Decimal(1).scaleb(-places)), 'f')
    if '.' in text:
        text = text.rstrip('0').rstrip('.')
    return '0' if text == '-0' else text


def format_profile(x: Elem) -> str:
    """``(2,3)`` style exact rendering; nested coordinates are flattened."""
    if not isinstance(x, tuple):
        return format_rational(x)
    return '(' + ','.join(format_rational(v) for v in flatten(x)) + ')'


def format_profile_decimal(x: Elem, places: int = 6) -> str:
    if not isinstance(x, tuple):
        return format_decimal(x, places)
    return '(' + ', '.join(format_decimal(v, places) for v in flatten(x)) + ')'


def profile_document(x: Elem) -> Dict[str, List[str]]:
    coordinates = flatten(x)
    return {
        'exact': [format_rational(v) for v in coordinates],
        'decimal': [format_decimal(v) for v in coordinates],
    }


def jsonable(value):
    """Element or witness structure with rationals as ``p/q`` strings and collections as lists."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, Fraction)):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return [jsonable(v) for v in sorted(value)]
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return str(value)
