"""Deterministic report serialization.

Every number is written as a string: rationals as "p/q", integers in
decimal, floats through an explicit format chosen by the caller.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .core.rational import format_rational


def stringify(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, dict):
        return {str(k): stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [stringify(v) for v in obj]
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return repr(obj)
    if hasattr(obj, "numerator") and hasattr(obj, "denominator"):
        return format_rational(obj)
    return str(obj)


def dumps(report: dict) -> str:
    return json.dumps(stringify(report), sort_keys=True, indent=2, ensure_ascii=False)


def check(name: str, passed: bool, detail: str = "") -> dict:
    return {"name": name, "status": "pass" if passed else "fail", "detail": detail}


def note(name: str, detail: str) -> dict:
    return {"name": name, "status": "note", "detail": detail}


def text_table(report: dict) -> str:
    """Aligned two-column rendering of a report for terminals."""
    rows: list[tuple[str, str]] = []

    def walk(prefix: str, obj: Any) -> None:
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(f"{prefix}.{k}" if prefix else str(k), obj[k])
        elif isinstance(obj, list) and obj and all(isinstance(x, dict) and "name" in x for x in obj):
            for x in obj:
                rows.append((f"{prefix}[{x['name']}]", f"{x.get('status', '')} {x.get('detail', '')}".strip()))
        else:
            rows.append((prefix, json.dumps(obj) if isinstance(obj, list) else str(obj)))

    walk("", stringify(report))
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)
