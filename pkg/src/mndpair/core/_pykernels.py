"""Pure-Python sparse polynomial kernels.

A polynomial is a ``dict`` mapping a packed exponent key to a non-zero
coefficient.  Variable ``i`` occupies bits ``[FIELD*i, FIELD*(i+1))`` of the
key, so monomial multiplication is integer addition.  ``caps`` is a tuple of
``(shift, max_exponent)`` pairs; products exceeding a cap are discarded.

The compiled twin in ``_ckernels.pyx`` implements the same functions with the
same semantics; ``kernels.py`` picks one at import time.
"""

from __future__ import annotations

FIELD = 10
MASK = (1 << FIELD) - 1


def _within(k, caps):
    for shift, cap in caps:
        if (k >> shift) & MASK > cap:
            return False
    return True


def mul(a: dict, b: dict, caps: tuple = ()) -> dict:
    if len(a) < len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    if not caps:
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                v = get(k)
                out[k] = ca * cb if v is None else v + ca * cb
    else:
        for kb, cb in b.items():
            if not _within(kb, caps):
                continue
            for ka, ca in a.items():
                k = ka + kb
                if not _within(k, caps):
                    continue
                v = get(k)
                out[k] = ca * cb if v is None else v + ca * cb
    return {k: v for k, v in out.items() if v}


def add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, c in b.items():
        v = out.get(k)
        if v is None:
            out[k] = c
        else:
            v = v + c
            if v:
                out[k] = v
            else:
                del out[k]
    return out


def axpy(acc: dict, a: dict, c) -> None:
    """acc += c * a, in place."""
    for k, x in a.items():
        v = acc.get(k)
        if v is None:
            acc[k] = c * x
        else:
            v = v + c * x
            if v:
                acc[k] = v
            else:
                del acc[k]


def scale(a: dict, c) -> dict:
    if not c:
        return {}
    return {k: c * x for k, x in a.items()}


def truncate(a: dict, caps: tuple) -> dict:
    return {k: x for k, x in a.items() if _within(k, caps)}


def extract(a: dict, shift: int, e: int) -> dict:
    """Terms whose exponent in the variable at ``shift`` equals e, with it zeroed."""
    off = e << shift
    return {k - off: x for k, x in a.items() if (k >> shift) & MASK == e}


def split(a: dict, shift: int) -> dict:
    """Map exponent e of one variable to the coefficient polynomial of var^e."""
    out: dict = {}
    for k, x in a.items():
        e = (k >> shift) & MASK
        d = out.get(e)
        if d is None:
            d = out[e] = {}
        d[k - (e << shift)] = x
    return out


def deriv(a: dict, shift: int) -> dict:
    one = 1 << shift
    out = {}
    for k, x in a.items():
        e = (k >> shift) & MASK
        if e:
            out[k - one] = x * e
    return out


def shift_key(a: dict, off: int) -> dict:
    """Multiply by the monomial with packed key ``off``."""
    return {k + off: x for k, x in a.items()}
