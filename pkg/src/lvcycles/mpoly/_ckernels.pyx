# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term kernels, same contract as ``_kernels_py``.

Keys and coefficients stay Python objects (keys may exceed 64 bits and
coefficients are big integers or Fractions); the gain comes from C-level
dict access and loops without attribute lookups.
"""
from cpython.dict cimport PyDict_GetItem, PyDict_SetItem, PyDict_DelItem, PyDict_Next
from cpython.ref cimport PyObject

import heapq
from fractions import Fraction


cdef inline object _get(dict d, object k):
    cdef PyObject* p = PyDict_GetItem(d, k)
    if p == NULL:
        return None
    return <object>p


def add_terms(dict a, dict b, int sign):
    if len(a) < len(b) and sign == 1:
        a, b = b, a
    cdef dict out = dict(a)
    cdef Py_ssize_t pos = 0
    cdef PyObject* kp
    cdef PyObject* cp
    cdef object k, c, old, s
    while PyDict_Next(b, &pos, &kp, &cp):
        k = <object>kp
        c = <object>cp
        old = _get(out, k)
        if old is None:
            s = c if sign == 1 else -c
        else:
            s = old + c if sign == 1 else old - c
        if s:
            PyDict_SetItem(out, k, s)
        elif old is not None:
            PyDict_DelItem(out, k)
    return out


def iadd_terms(dict acc, dict b):
    if acc is b:
        b = dict(b)
    cdef Py_ssize_t pos = 0
    cdef PyObject* kp
    cdef PyObject* cp
    cdef object k, old, s
    while PyDict_Next(b, &pos, &kp, &cp):
        k = <object>kp
        old = _get(acc, k)
        s = <object>cp if old is None else old + <object>cp
        if s:
            PyDict_SetItem(acc, k, s)
        elif old is not None:
            PyDict_DelItem(acc, k)


cdef dict _nonzero(dict out):
    return {k: c for k, c in out.items() if c}


def mul_terms(dict a, dict b):
    if len(a) < len(b):
        a, b = b, a
    cdef dict out = {}
    cdef list bk = list(b.keys())
    cdef list bc = list(b.values())
    cdef Py_ssize_t nb = len(bk), j
    cdef Py_ssize_t pos = 0
    cdef PyObject* kp
    cdef PyObject* cp
    cdef object ka, ca, k, old
    while PyDict_Next(a, &pos, &kp, &cp):
        ka = <object>kp
        ca = <object>cp
        for j in range(nb):
            k = ka + bk[j]
            old = _get(out, k)
            if old is None:
                PyDict_SetItem(out, k, ca * bc[j])
            else:
                PyDict_SetItem(out, k, old + ca * bc[j])
    return _nonzero(out)


def mul_terms_trunc(dict a, dict b, limit):
    cdef dict out = {}
    cdef list items = sorted(b.items())
    cdef list bk = [t[0] for t in items]
    cdef list bc = [t[1] for t in items]
    cdef Py_ssize_t nb = len(bk), j
    cdef Py_ssize_t pos = 0
    cdef PyObject* kp
    cdef PyObject* cp
    cdef object ka, ca, k, old, bound
    while PyDict_Next(a, &pos, &kp, &cp):
        ka = <object>kp
        ca = <object>cp
        bound = limit - ka
        for j in range(nb):
            if bk[j] >= bound:
                break
            k = ka + bk[j]
            old = _get(out, k)
            if old is None:
                PyDict_SetItem(out, k, ca * bc[j])
            else:
                PyDict_SetItem(out, k, old + ca * bc[j])
    return _nonzero(out)


cdef object _quot(object c, object d):
    if type(c) is int and type(d) is int:
        q, r = divmod(c, d)
        if not r:
            return q
        return Fraction(c, d)
    q = Fraction(c) / d
    return q.numerator if q.denominator == 1 else q


def divexact_terms(vars, dict a, dict b):
    """Quotient terms of a/b if exact, else None.  Returns an MPoly."""
    from .poly import MPoly, W, MASK

    cdef Py_ssize_t nv = len(vars), i
    if not a:
        return MPoly(vars, {})
    kb = max(b)
    lcb = b[kb]
    cdef list shifts = [W * (nv - 1 - i) for i in range(nv)]
    cdef list eb = [(kb >> s) & MASK for s in shifts]
    cdef list rest = [(key, c) for key, c in b.items() if key != kb]
    cdef dict rem = dict(a)
    cdef list heap = [-key for key in rem]
    heapq.heapify(heap)
    cdef dict quot = {}
    cdef object key, c, dk, q, nk, old, s, kk, cc
    heappop = heapq.heappop
    heappush = heapq.heappush
    while rem:
        key = -heappop(heap)
        c = _get(rem, key)
        if c is None:
            continue
        while heap and heap[0] == -key:
            heappop(heap)
        for i in range(nv):
            if ((key >> shifts[i]) & MASK) < eb[i]:
                return None
        dk = key - kb
        q = _quot(c, lcb)
        quot[dk] = q
        PyDict_DelItem(rem, key)
        for kk, cc in rest:
            nk = dk + kk
            old = _get(rem, nk)
            if old is None:
                PyDict_SetItem(rem, nk, -q * cc)
                heappush(heap, -nk)
            else:
                s = old - q * cc
                if s:
                    PyDict_SetItem(rem, nk, s)
                else:
                    PyDict_DelItem(rem, nk)
    return MPoly(vars, quot)
