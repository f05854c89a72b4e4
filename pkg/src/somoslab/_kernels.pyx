# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sparse kernels; same contract as ``_kernels_py``."""

from heapq import heapify, heappop, heappush

__all__ = ["add", "sub", "scale", "mul", "sqr", "divexact", "shift"]


def add(dict a, dict b):
    cdef dict out
    cdef object k, c, v
    if len(a) < len(b):
        a, b = b, a
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


def sub(dict a, dict b):
    cdef dict out = dict(a)
    cdef object k, c, v
    for k, c in b.items():
        v = out.get(k)
        if v is None:
            out[k] = -c
        else:
            v = v - c
            if v:
                out[k] = v
            else:
                del out[k]
    return out


def scale(dict a, object c):
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def shift(dict a, object m):
    return {k + m: v for k, v in a.items()}


def mul(dict a, dict b):
    cdef dict out
    cdef list akeys, avals
    cdef Py_ssize_t i, n
    cdef object kb, cb, k, v, m, c
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return {}
    if len(b) == 1:
        for m, c in b.items():
            if c == 1:
                return {k + m: v for k, v in a.items()}
            return {k + m: v * c for k, v in a.items()}
    akeys = list(a.keys())
    avals = list(a.values())
    n = len(akeys)
    out = {}
    for kb, cb in b.items():
        for i in range(n):
            k = akeys[i] + kb
            v = out.get(k)
            if v is None:
                out[k] = avals[i] * cb
            else:
                out[k] = v + avals[i] * cb
    return {k: v for k, v in out.items() if v}


def sqr(dict a):
    cdef list keys = list(a.keys())
    cdef list vals = list(a.values())
    cdef Py_ssize_t n = len(keys), i, j
    cdef dict out = {}
    cdef object ki, ci, c2, k, v
    for i in range(n):
        ki = keys[i]
        ci = vals[i]
        k = ki + ki
        v = out.get(k)
        out[k] = ci * ci if v is None else v + ci * ci
        c2 = ci + ci
        for j in range(i + 1, n):
            k = ki + keys[j]
            v = out.get(k)
            if v is None:
                out[k] = c2 * vals[j]
            else:
                out[k] = v + c2 * vals[j]
    return {k: v for k, v in out.items() if v}


def divexact(dict a, dict b, inbox):
    cdef dict r, q
    cdef list heap, restk, restc
    cdef Py_ssize_t i, nb
    cdef object lb, lc, k, c, qc, rem, qk, nk, old, v
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a:
        return {}
    lb = max(b)
    lc = b[lb]
    restk = [k for k in b if k != lb]
    restc = [b[k] for k in restk]
    nb = len(restk)
    r = dict(a)
    heap = [-k for k in r]
    heapify(heap)
    q = {}
    while heap:
        k = -heappop(heap)
        c = r.get(k)
        if c is None:
            continue
        qc, rem = divmod(c, lc)
        if rem:
            return None
        qk = k - lb
        if not inbox(qk):
            return None
        q[qk] = qc
        del r[k]
        for i in range(nb):
            nk = qk + restk[i]
            old = r.get(nk)
            if old is None:
                r[nk] = -qc * restc[i]
                heappush(heap, -nk)
            else:
                v = old - qc * restc[i]
                if v:
                    r[nk] = v
                else:
                    del r[nk]
    return q
