# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled elimination kernel.

Same contract as ``_kernels_py``; the fused ``w - v*c`` update works on the
integer triples of :class:`GaussianRational` directly instead of going
through two operator calls and an intermediate object.
"""

from math import gcd

from .gq import GaussianRational

cdef object _new = object.__new__


cdef inline object _make(object a, object b, object d):
    cdef object g
    if d < 0:
        a = -a
        b = -b
        d = -d
    g = gcd(gcd(a, b), d)
    if g != 1:
        a = a // g
        b = b // g
        d = d // g
    obj = _new(GaussianRational)
    obj._a = a
    obj._b = b
    obj._d = d
    return obj


cdef inline object _fms(object w, object v, object c):
    """``w - v*c``; ``w`` may be ``None`` (treated as zero).  Returns ``None`` for zero."""
    cdef object va = v._a, vb = v._b, ca = c._a, cb = c._b
    cdef object pa = va * ca - vb * cb
    cdef object pb = va * cb + vb * ca
    cdef object pd = v._d * c._d
    cdef object wd, a, b, d
    if w is None:
        return _make(-pa, -pb, pd)
    wd = w._d
    if wd == pd:
        a = w._a - pa
        b = w._b - pb
        d = pd
    else:
        a = w._a * pd - pa * wd
        b = w._b * pd - pb * wd
        d = wd * pd
    if a == 0 and b == 0:
        return None
    return _make(a, b, d)


def reduce_row(dict pivots, row):
    cdef dict r = dict(row)
    cdef dict prow
    cdef list keys = [k for k in r if k in pivots]
    for p in keys:
        c = r.get(p)
        if c is None:
            continue
        prow = pivots[p]
        for k, v in prow.items():
            w = _fms(r.get(k), v, c)
            if w is None:
                del r[k]
            else:
                r[k] = w
    return r


def rref_insert(dict pivots, row):
    cdef dict r = reduce_row(pivots, row)
    cdef dict new, prow
    if not r:
        return None
    p = min(r)
    inv = r[p].inverse()
    new = {k: v * inv for k, v in r.items()}
    for q, prow in pivots.items():
        c = prow.get(p)
        if c is None:
            continue
        for k, v in new.items():
            w = _fms(prow.get(k), v, c)
            if w is None:
                del prow[k]
            else:
                prow[k] = w
    pivots[p] = new
    return p
