"""Pure-Python sparse kernels over packed monomial keys.

A polynomial is a ``dict`` mapping a packed monomial key (``int``) to a
nonzero ``int`` coefficient.  Keys add under monomial multiplication and
integer order on keys is a monomial order, so nothing here needs to unpack
exponents except the box test in :func:`divexact`.

The Cython module ``_kernels`` exposes the same functions with the same
semantics; :mod:`somoslab.kernels` picks one at import.
"""

from heapq import heapify, heappop, heappush

__all__ = ["add", "sub", "scale", "mul", "sqr", "divexact", "shift"]


def add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    get = out.get
    for k, c in b.items():
        v = get(k, 0) + c
        if v:
            out[k] = v
        else:
            del out[k]
    return out


def sub(a, b):
    out = dict(a)
    get = out.get
    for k, c in b.items():
        v = get(k, 0) - c
        if v:
            out[k] = v
        else:
            del out[k]
    return out


def scale(a, c):
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def shift(a, m):
    """Multiply by the unit monomial with key ``m``."""
    return {k + m: v for k, v in a.items()}


def mul(a, b):
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return {}
    if len(b) == 1:
        (m, c), = b.items()
        if c == 1:
            return {k + m: v for k, v in a.items()}
        return {k + m: v * c for k, v in a.items()}
    out = {}
    get = out.get
    aitems = list(a.items())
    for kb, cb in b.items():
        for ka, ca in aitems:
            k = ka + kb
            out[k] = get(k, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def sqr(a):
    items = list(a.items())
    out = {}
    get = out.get
    n = len(items)
    for i in range(n):
        ki, ci = items[i]
        k = ki + ki
        out[k] = get(k, 0) + ci * ci
        c2 = 2 * ci
        for j in range(i + 1, n):
            kj, cj = items[j]
            k = ki + kj
            out[k] = get(k, 0) + c2 * cj
    return {k: v for k, v in out.items() if v}


def divexact(a, b, inbox):
    """Exact quotient ``a / b`` or ``None`` when no Laurent quotient exists.

    ``inbox(key)`` must return False for any monomial that cannot occur in a
    true quotient (Newton-box bound); it bounds the loop when ``b`` does not
    divide ``a``.
    """
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    if not a:
        return {}
    lb = max(b)
    lc = b[lb]
    rest = [(k, c) for k, c in b.items() if k != lb]
    r = dict(a)
    heap = [-k for k in r]
    heapify(heap)
    q = {}
    get = r.get
    while heap:
        k = -heappop(heap)
        c = get(k)
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
        for bk, bc in rest:
            nk = qk + bk
            old = get(nk)
            if old is None:
                r[nk] = -qc * bc
                heappush(heap, -nk)
            else:
                v = old - qc * bc
                if v:
                    r[nk] = v
                else:
                    del r[nk]
    return q
