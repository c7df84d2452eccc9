"""Exact causal-model analysis of contextuality and nonlocality.

Functions take document JSON text. Rationals are returned as Fractions.
"""

from fractions import Fraction
import os

from . import _core
from ._core import Error, ParseError, PreconditionError, canonical, kind, dsep

__version__ = _core.__version__

__all__ = [
    "Error", "ParseError", "PreconditionError", "canonical", "kind", "dsep",
    "check_nd", "factorisable", "faithful", "corollary", "summary", "load",
]


def load(path):
    with open(os.fspath(path), encoding="utf-8") as f:
        return f.read()


def check_nd(phenomenon):
    return _core.check_nd(phenomenon)


def factorisable(phenomenon, allow_disturbing=False):
    d = _core.factorisable(phenomenon, allow_disturbing)
    d["weights"] = [(s, Fraction(w)) for s, w in d["weights"]]
    for key in ("witness_value", "witness_bound"):
        if key in d:
            d[key] = Fraction(d[key])
    return d


def faithful(model, phenomenon):
    return _core.faithful(model, phenomenon)


def corollary(phenomenon):
    return _core.corollary(phenomenon)


def summary(report):
    """Key/value pairs between #BEGIN SUMMARY and #END SUMMARY."""
    lines = report.splitlines()
    body = lines[lines.index("#BEGIN SUMMARY") + 1:lines.index("#END SUMMARY")]
    return dict(line.split("=", 1) for line in body)
