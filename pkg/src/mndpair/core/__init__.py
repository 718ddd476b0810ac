"""Exact arithmetic core: rationals, Bernoulli numbers, jets, polynomials, rational functions."""

from __future__ import annotations

from .jet import DeltaJet, jet_extract
from .poly import MultiPoly, PolyRing, y_ring
from .rational import Q, bernoulli, format_rational, parse_rational, to_fraction, to_q
from .ratfunc import RatFunc, ratfunc_arith

__all__ = [
    "DeltaJet",
    "MultiPoly",
    "PolyRing",
    "Q",
    "RatFunc",
    "bernoulli",
    "format_rational",
    "jet_extract",
    "parse_rational",
    "ratfunc_arith",
    "to_fraction",
    "to_q",
    "y_ring",
]
