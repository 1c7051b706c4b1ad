# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled term kernels, same contract as _pykernels."""


def mul_terms(dict a, dict b):
    cdef dict out = {}
    cdef object ka, ca, kb, cb, k, c
    if len(a) < len(b):
        a, b = b, a
    for kb, cb in b.items():
        for ka, ca in a.items():
            k = ka + kb
            c = out.get(k)
            if c is None:
                out[k] = ca * cb
            else:
                out[k] = c + ca * cb
    return {k: c for k, c in out.items() if c}


def add_terms(dict a, dict b, scale=1):
    cdef dict out = dict(a)
    cdef object k, c, old, s
    for k, c in b.items():
        old = out.get(k)
        if old is None:
            out[k] = c * scale
        else:
            s = old + c * scale
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def addmul_into(dict acc, dict a, dict b):
    cdef object ka, ca, kb, cb, k, c
    for kb, cb in b.items():
        for ka, ca in a.items():
            k = ka + kb
            c = acc.get(k)
            if c is None:
                acc[k] = ca * cb
            else:
                acc[k] = c + ca * cb
