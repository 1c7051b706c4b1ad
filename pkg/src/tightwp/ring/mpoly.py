"""Sparse multivariate polynomials with exact rational coefficients.

Terms live in a dict ``{packed monomial: gmpy2.mpq}``.  A packed monomial is
an int holding one ``FIELD``-bit exponent per symbol id, so multiplying
monomials is adding ints.  The top bit of every field is a guard bit: any
product that sets it raises ``OverflowError`` instead of silently carrying
into the neighbouring symbol.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping

import gmpy2
from gmpy2 import mpq

from . import _kernels
from .symbols import B, INV_M0, Symbol, b, from_id, moment, parse_symbol

FIELD = 16
MASK = (1 << FIELD) - 1
MAX_EXP = (1 << (FIELD - 1)) - 1
MAX_ID = 1024
_GUARD = sum(1 << (FIELD * i + FIELD - 1) for i in range(MAX_ID))


def as_rational(x) -> mpq:
    """Coerce an exact scalar to mpq; floats are rejected."""
    if isinstance(x, bool):
        return mpq(int(x))
    if isinstance(x, (int, Fraction)) or type(x) is type(mpq()):
        return mpq(x)
    if type(x) is type(gmpy2.mpz()):
        return mpq(x)
    if isinstance(x, str):
        num, _, den = x.partition("/")
        return mpq(int(num), int(den) if den else 1)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def unpack(key: int) -> list[tuple[int, int]]:
    out = []
    sid = 0
    while key:
        e = key & MASK
        if e:
            out.append((sid, e))
        key >>= FIELD
        sid += 1
    return out


def pack(exps: Mapping[Symbol, int]) -> int:
    key = 0
    for s, e in exps.items():
        if e < 0:
            raise ValueError(f"negative exponent for {s}")
        if e > MAX_EXP:
            raise OverflowError(f"exponent {e} of {s} exceeds {MAX_EXP}")
        sid = s.id
        if sid >= MAX_ID:
            raise OverflowError(f"symbol {s} beyond the supported id range")
        key += e << (FIELD * sid)
    return key


def exponent(key: int, s: Symbol) -> int:
    return (key >> (FIELD * s.id)) & MASK


def _check(terms: dict) -> dict:
    for k in terms:
        if k & _GUARD:
            raise OverflowError("monomial exponent overflow")
    return terms


def _sort_key(key: int):
    # lengths first (highest total degree), then the remaining symbols
    items = unpack(key)
    bdeg = sum(e for sid, e in items if from_id(sid).kind == B)
    bexps = tuple(-e for sid, e in items if from_id(sid).kind == B)
    bids = tuple(sid for sid, e in items if from_id(sid).kind == B)
    rest = [(sid, e) for sid, e in items if from_id(sid).kind != B]
    rdeg = sum(e for _, e in rest)
    return (-bdeg, bids, bexps, -rdeg, tuple((sid, -e) for sid, e in rest))


class MPoly:
    """Immutable polynomial over Q in the symbols of :mod:`symbols`."""

    __slots__ = ("_t", "_h")

    def __init__(self, terms: dict | None = None):
        self._t = terms if terms is not None else {}
        self._h = None

    # construction -------------------------------------------------------
    @classmethod
    def constant(cls, c) -> "MPoly":
        c = as_rational(c)
        return cls({0: c} if c else {})

    @classmethod
    def var(cls, s: Symbol, exp: int = 1) -> "MPoly":
        return cls({pack({s: exp}): mpq(1)})

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[Mapping[Symbol, int], object]]) -> "MPoly":
        out: dict = {}
        for exps, c in terms:
            k = pack({s: e for s, e in exps.items() if e})
            out[k] = out.get(k, 0) + as_rational(c)
        return cls({k: c for k, c in out.items() if c})

    @staticmethod
    def _lift(x) -> "MPoly":
        if isinstance(x, MPoly):
            return x
        return MPoly.constant(x)

    # inspection ---------------------------------------------------------
    @property
    def raw(self) -> dict:
        return self._t

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant_term(self) -> mpq:
        return self._t.get(0, mpq(0))

    def symbols(self) -> set[Symbol]:
        out = set()
        for k in self._t:
            out.update(from_id(sid) for sid, _ in unpack(k))
        return out

    def terms(self) -> list[tuple[dict[Symbol, int], mpq]]:
        """Terms in canonical order as ({symbol: exp}, coeff)."""
        return [({from_id(sid): e for sid, e in unpack(k)}, self._t[k])
                for k in sorted(self._t, key=_sort_key)]

    def coefficient(self, exps: Mapping[Symbol, int]) -> mpq:
        return self._t.get(pack(exps), mpq(0))

    def degree(self, s: Symbol) -> int:
        return max((exponent(k, s) for k in self._t), default=-1)

    def weighted_degrees(self, weight: Callable[[Symbol], int]) -> set[int]:
        return {sum(weight(from_id(sid)) * e for sid, e in unpack(k)) for k in self._t}

    def coefficients(self, s: Symbol) -> dict[int, "MPoly"]:
        """Split as sum_e s^e * c_e; returns {e: c_e} with c_e free of s."""
        shift = FIELD * s.id
        out: dict[int, dict] = {}
        for k, c in self._t.items():
            e = (k >> shift) & MASK
            out.setdefault(e, {})[k - (e << shift)] = c
        return {e: MPoly(t) for e, t in out.items()}

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, MPoly):
            return MPoly(_kernels.add_terms(self._t, other._t))
        try:
            c = as_rational(other)
        except TypeError:
            return NotImplemented
        return MPoly(_kernels.add_terms(self._t, {0: c} if c else {}))

    __radd__ = __add__

    def __neg__(self):
        return MPoly({k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        if isinstance(other, MPoly):
            return MPoly(_kernels.add_terms(self._t, other._t, -1))
        try:
            c = as_rational(other)
        except TypeError:
            return NotImplemented
        return MPoly(_kernels.add_terms(self._t, {0: -c} if c else {}))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, MPoly):
            if not self._t or not other._t:
                return MPoly()
            return MPoly(_check(_kernels.mul_terms(self._t, other._t)))
        try:
            c = as_rational(other)
        except TypeError:
            return NotImplemented
        if not c:
            return MPoly()
        return MPoly({k: v * c for k, v in self._t.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = as_rational(other)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self * (1 / c)

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("only non-negative integer powers are supported")
        if len(self._t) == 1:
            (k, c), = self._t.items()
            if k and max(x for _, x in unpack(k)) * e > MAX_EXP:
                raise OverflowError("monomial exponent overflow")
            return MPoly({k * e: c ** e})
        result = MPoly.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self._t == other._t
        try:
            return self._t == MPoly.constant(other)._t
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self._t.items()))
        return self._h

    # transformations ----------------------------------------------------
    def map_coeffs(self, f: Callable[[mpq], object]) -> "MPoly":
        out = {}
        for k, c in self._t.items():
            v = as_rational(f(c))
            if v:
                out[k] = v
        return MPoly(out)

    def rename(self, mapping: Mapping[Symbol, Symbol]) -> "MPoly":
        """Simultaneous renaming of symbols (images may coincide)."""
        if not mapping:
            return self
        idmap = {s.id: t.id for s, t in mapping.items()}
        out: dict = {}
        for k, c in self._t.items():
            nk = 0
            for sid, e in unpack(k):
                nk += e << (FIELD * idmap.get(sid, sid))
            out[nk] = out.get(nk, 0) + c
        return MPoly(_check({k: c for k, c in out.items() if c}))

    def subs(self, assignments: Mapping) -> "MPoly":
        """Simultaneous substitution of polynomials for symbols."""
        assign = {}
        for s, v in assignments.items():
            if isinstance(s, str):
                s = parse_symbol(s)
            if not isinstance(s, Symbol):
                raise TypeError(f"substitution key {s!r} is not a symbol")
            assign[s.id] = MPoly._lift(v)
        if not assign:
            return self
        powers: dict[tuple[int, int], MPoly] = {}

        def power(sid, e):
            p = powers.get((sid, e))
            if p is None:
                p = assign[sid] ** e
                powers[(sid, e)] = p
            return p

        acc: dict = {}
        for k, c in self._t.items():
            kept = 0
            factors = []
            for sid, e in unpack(k):
                if sid in assign:
                    factors.append(power(sid, e))
                else:
                    kept += e << (FIELD * sid)
            term = {kept: c}
            for f in factors:
                term = _kernels.mul_terms(term, f._t)
                if not term:
                    break
            for tk, tc in term.items():
                acc[tk] = acc.get(tk, 0) + tc
        return MPoly(_check({k: c for k, c in acc.items() if c}))

    def diff(self, s: Symbol) -> "MPoly":
        shift = FIELD * s.id
        out = {}
        for k, c in self._t.items():
            e = (k >> shift) & MASK
            if e:
                out[k - (1 << shift)] = c * e
        return MPoly(out)

    def integrate_even(self, i: int) -> "MPoly":
        """Apply  f(L_i) -> int_0^{L_i} f(t) t dt,  i.e. b^k -> b^{k+1}/(2k+2)."""
        shift = FIELD * b(i).id
        out = {}
        for k, c in self._t.items():
            e = (k >> shift) & MASK
            out[k + (1 << shift)] = c / (2 * e + 2)
        return MPoly(_check(out))

    def inverse(self) -> "MPoly":
        """Inverse of a unit: a nonzero rational times a power of M0 or 1/M0."""
        if len(self._t) != 1:
            raise ValueError("polynomial is not invertible in the ring")
        (k, c), = self._t.items()
        items = unpack(k)
        if not items:
            return MPoly({0: 1 / c})
        if len(items) == 1:
            sid, e = items[0]
            if sid == INV_M0.id:
                return MPoly({pack({moment(0): e}): 1 / c})
            if sid == moment(0).id:
                return MPoly({pack({INV_M0: e}): 1 / c})
        raise ValueError("polynomial is not invertible in the ring")

    def cancel_m0(self) -> "MPoly":
        """Normalize with M0 * invM0 = 1."""
        s_m0 = FIELD * moment(0).id
        s_inv = FIELD * INV_M0.id
        out: dict = {}
        for k, c in self._t.items():
            a = (k >> s_m0) & MASK
            i = (k >> s_inv) & MASK
            n = min(a, i)
            if n:
                k = k - (n << s_m0) - (n << s_inv)
            out[k] = out.get(k, 0) + c
        return MPoly({k: c for k, c in out.items() if c})

    # evaluation ---------------------------------------------------------
    def map_eval(self, value: Callable[[Symbol], object], one=1, zero=0):
        """Evaluate in any commutative ring; ``value`` maps each symbol."""
        cache: dict[tuple[int, int], object] = {}
        total = zero
        for k, c in self._t.items():
            term = one
            for sid, e in unpack(k):
                p = cache.get((sid, e))
                if p is None:
                    base = value(from_id(sid))
                    p = base
                    for _ in range(e - 1):
                        p = p * base
                    cache[(sid, e)] = p
                term = term * p
            total = total + term * c
        return total

    def evaluate(self, values: Mapping, ctx=None):
        """Numeric value; ``values`` maps symbols (or names) to numbers.

        ``ctx`` converts rational coefficients (default: float).
        """
        vals = {}
        for s, v in values.items():
            vals[parse_symbol(s) if isinstance(s, str) else s] = v
        conv = ctx or float
        total = 0
        for exps, c in self.terms():
            term = conv(int(c.numerator)) / conv(int(c.denominator))
            for s, e in exps.items():
                if s not in vals:
                    raise KeyError(f"no value for symbol {s.name}")
                term = term * vals[s] ** e
            total = total + term
        return total

    # serialization ------------------------------------------------------
    def to_json(self) -> list:
        return [{"exponents": {s.name: e for s, e in sorted(exps.items())},
                 "coeff": f"{c.numerator}/{c.denominator}"}
                for exps, c in self.terms()]

    @classmethod
    def from_json(cls, data: list) -> "MPoly":
        return cls.from_terms(({parse_symbol(n): int(e) for n, e in t["exponents"].items()},
                               as_rational(t["coeff"])) for t in data)

    def __str__(self) -> str:
        from .render import text
        return text(self)

    def __repr__(self) -> str:
        return f"MPoly({self})"

    def latex(self) -> str:
        from .render import latex
        return latex(self)


def poly_integrate_even(p: MPoly, i: int) -> MPoly:
    return p.integrate_even(i)


def var(s: Symbol, exp: int = 1) -> MPoly:
    return MPoly.var(s, exp)


def const(c) -> MPoly:
    return MPoly.constant(c)



def sum_of_products(pairs: Iterable[tuple[MPoly, MPoly]]) -> MPoly:
    """sum a*b over the pairs, accumulated in a single term dict."""
    acc: dict = {}
    for a, c in pairs:
        if a._t and c._t:
            _kernels.addmul_into(acc, a._t, c._t)
    return MPoly(_check({k: v for k, v in acc.items() if v}))


def linear_combination(items: Iterable[tuple[object, MPoly]]) -> MPoly:
    """sum c*p for exact scalars c."""
    acc: dict = {}
    for c, p in items:
        c = as_rational(c)
        if not c:
            continue
        for k, v in p._t.items():
            old = acc.get(k)
            acc[k] = v * c if old is None else old + v * c
    return MPoly({k: v for k, v in acc.items() if v})


__all__ = ["MPoly", "as_rational", "poly_integrate_even", "var", "const",
           "sum_of_products", "linear_combination",
           "pack", "unpack", "exponent"]
