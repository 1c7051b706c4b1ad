"""Pure-Python term kernels.

A polynomial is a dict mapping a packed monomial (int) to a nonzero exact
coefficient.  Monomial multiplication is integer addition of the keys.
"""


def mul_terms(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = {}
    get = out.get
    for kb, cb in b.items():
        for ka, ca in a.items():
            k = ka + kb
            c = get(k)
            out[k] = ca * cb if c is None else c + ca * cb
    return {k: c for k, c in out.items() if c}


def add_terms(a, b, scale=1):
    """Return a + scale*b."""
    out = dict(a)
    get = out.get
    for k, c in b.items():
        old = get(k)
        if old is None:
            out[k] = c * scale
        else:
            s = old + c * scale
            if s:
                out[k] = s
            else:
                del out[k]
    return out


def addmul_into(acc, a, b):
    """acc += a*b, in place; zero entries may be left behind."""
    get = acc.get
    for kb, cb in b.items():
        for ka, ca in a.items():
            k = ka + kb
            c = get(k)
            acc[k] = ca * cb if c is None else c + ca * cb
