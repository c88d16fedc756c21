"""Pure-Python elimination kernel (fallback for the compiled ``_kernels_c``)."""


def reduce_row(pivots, row):
    r = dict(row)
    for p in [k for k in r if k in pivots]:
        c = r.get(p)
        if not c:
            continue
        for k, v in pivots[p].items():
            w = r.get(k)
            if w is None:
                r[k] = -(v * c)
            else:
                w = w - v * c
                if w:
                    r[k] = w
                else:
                    del r[k]
    return r


def rref_insert(pivots, row):
    r = reduce_row(pivots, row)
    if not r:
        return None
    p = min(r)
    inv = r[p].inverse()
    new = {k: v * inv for k, v in r.items()}
    for q, prow in pivots.items():
        c = prow.get(p)
        if c:
            for k, v in new.items():
                w = prow.get(k)
                if w is None:
                    prow[k] = -(v * c)
                else:
                    w = w - v * c
                    if w:
                        prow[k] = w
                    else:
                        del prow[k]
    pivots[p] = new
    return p
