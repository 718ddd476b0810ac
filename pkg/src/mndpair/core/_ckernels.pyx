# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sparse polynomial kernels.

Same contract as ``_pykernels``.  The product kernel avoids hashing: every
admissible pair of terms is written to a C array as (key, i, j), the array is
sorted by key, and runs of equal keys are summed.  Keys must fit in 62 bits;
wider inputs are handed to the pure-Python kernel.
"""

from libc.stdlib cimport malloc, free, qsort

from . import _pykernels as _py

FIELD = _py.FIELD
MASK = _py.MASK

cdef long long MASK_C = _py.MASK
cdef long long KEY_LIMIT = (<long long>1) << 62
cdef long long MAX_PAIRS = 8000000


cdef struct Triple:
    long long key
    int ia
    int ib


cdef int _cmp(const void* x, const void* y) noexcept nogil:
    cdef long long p = (<Triple*>x).key
    cdef long long q = (<Triple*>y).key
    if p < q:
        return -1
    if p > q:
        return 1
    # tie-break on indices so the summation order is reproducible
    if (<Triple*>x).ia != (<Triple*>y).ia:
        return -1 if (<Triple*>x).ia < (<Triple*>y).ia else 1
    if (<Triple*>x).ib != (<Triple*>y).ib:
        return -1 if (<Triple*>x).ib < (<Triple*>y).ib else 1
    return 0


cdef inline bint _ok(long long k, int ncap, int* shifts, long long* limits) noexcept nogil:
    cdef int t
    for t in range(ncap):
        if ((k >> shifts[t]) & MASK_C) > limits[t]:
            return False
    return True


def _fits(dict d):
    for k in d:
        if k >= KEY_LIMIT:
            return False
    return True


def mul(dict a, dict b, tuple caps=()):
    cdef Py_ssize_t na = len(a), nb = len(b)
    if na == 0 or nb == 0:
        return {}
    if na * nb > MAX_PAIRS or not _fits(a) or not _fits(b):
        return _py.mul(a, b, caps)
    cdef int ncap = len(caps)
    cdef int* shifts = <int*>malloc(sizeof(int) * (ncap + 1))
    cdef long long* limits = <long long*>malloc(sizeof(long long) * (ncap + 1))
    cdef long long* ka = <long long*>malloc(sizeof(long long) * na)
    cdef long long* kb = <long long*>malloc(sizeof(long long) * nb)
    cdef Triple* buf = <Triple*>malloc(sizeof(Triple) * na * nb)
    cdef list ca = list(a.values())
    cdef list cb = list(b.values())
    cdef Py_ssize_t i, j, m = 0, t
    cdef long long k
    cdef dict out = {}
    try:
        for t in range(ncap):
            shifts[t] = caps[t][0]
            limits[t] = caps[t][1]
        i = 0
        for key in a:
            ka[i] = key
            i += 1
        i = 0
        for key in b:
            kb[i] = key
            i += 1
        with nogil:
            for i in range(na):
                if ncap and not _ok(ka[i], ncap, shifts, limits):
                    continue
                for j in range(nb):
                    k = ka[i] + kb[j]
                    if ncap and not _ok(k, ncap, shifts, limits):
                        continue
                    buf[m].key = k
                    buf[m].ia = <int>i
                    buf[m].ib = <int>j
                    m += 1
            qsort(buf, m, sizeof(Triple), _cmp)
        i = 0
        while i < m:
            k = buf[i].key
            s = ca[buf[i].ia] * cb[buf[i].ib]
            i += 1
            while i < m and buf[i].key == k:
                s = s + ca[buf[i].ia] * cb[buf[i].ib]
                i += 1
            if s:
                out[k] = s
    finally:
        free(shifts)
        free(limits)
        free(ka)
        free(kb)
        free(buf)
    return out


def add(dict a, dict b):
    cdef dict out = dict(a)
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


def axpy(dict acc, dict a, c):
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


def scale(dict a, c):
    if not c:
        return {}
    return {k: c * x for k, x in a.items()}


def truncate(dict a, tuple caps):
    return _py.truncate(a, caps)


def extract(dict a, int shift, long long e):
    cdef dict out = {}
    off = e << shift
    for k, x in a.items():
        if (k >> shift) & MASK == e:
            out[k - off] = x
    return out


def split(dict a, int shift):
    return _py.split(a, shift)


def deriv(dict a, int shift):
    return _py.deriv(a, shift)


def shift_key(dict a, off):
    return {k + off: x for k, x in a.items()}
