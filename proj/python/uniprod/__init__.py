"""Exact universal products on dual semigroups.

Scalars are exchanged as canonical strings such as ``"5/6+0/1i"``; inputs
also accept ints and ``fractions.Fraction``.
"""

from fractions import Fraction

from ._uniprod import *  # noqa: F401,F403
from ._uniprod import Functional


def parse_scalar(text):
    """Split a canonical scalar string into (real, imaginary) Fractions."""
    body = text[:-1] if text.endswith("i") else text
    if not text.endswith("i"):
        return Fraction(body), Fraction(0)
    cut = max(body.rfind("+"), body.rfind("-"))
    if cut <= 0:
        return Fraction(0), Fraction(body)
    return Fraction(body[:cut]), Fraction(body[cut:])


def real_value(text):
    re, im = parse_scalar(text)
    if im:
        raise ValueError(f"{text} is not real")
    return re


def functional_from_moments(algebra, degree, moments, components=1):
    """Build a Functional from {word: scalar or [scalar per component]}."""
    f = Functional(algebra, components, degree)
    for word, value in moments.items():
        values = value if isinstance(value, (list, tuple)) else [value] * components
        for k, v in enumerate(values):
            f.set(k, word, v)
    return f
