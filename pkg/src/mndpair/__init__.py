"""Exact intersection pairings on moduli of fixed-determinant bundles via iterated residues."""

from __future__ import annotations

__version__ = "0.1.0"
