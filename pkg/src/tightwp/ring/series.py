"""Truncated power series and Laurent series over an arbitrary coefficient ring.

Coefficients may be numbers, :class:`MPoly` or series themselves (nesting is
used for series in u whose coefficients are series in a weight parameter).
"""

from __future__ import annotations

from gmpy2 import mpq

from .mpoly import MPoly, sum_of_products


def _is_zero(c) -> bool:
    if hasattr(c, "is_zero"):
        return c.is_zero()
    return c == 0


def _inverse(c):
    if hasattr(c, "inverse"):
        return c.inverse()
    if isinstance(c, int):
        return mpq(1, c)
    return 1 / c


def _dot(pairs):
    pairs = [(x, y) for x, y in pairs if not _is_zero(x) and not _is_zero(y)]
    if pairs and all(isinstance(x, MPoly) and isinstance(y, MPoly) for x, y in pairs):
        return sum_of_products(pairs)
    total = 0
    for x, y in pairs:
        total = total + x * y
    return total


class TruncSeries:
    """sum_{k<=order} c_k x^k + O(x^{order+1})."""

    __slots__ = ("coeffs", "order", "var")

    def __init__(self, coeffs, order: int, var: str = "u"):
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        cs = list(coeffs)[: order + 1]
        cs += [0] * (order + 1 - len(cs))
        self.coeffs = cs
        self.order = order
        self.var = var

    @classmethod
    def constant(cls, c, order: int, var: str = "u") -> "TruncSeries":
        return cls([c], order, var)

    def __getitem__(self, k: int):
        if k < 0:
            return 0
        if k > self.order:
            raise IndexError(f"coefficient {k} beyond truncation order {self.order}")
        return self.coeffs[k]

    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.coeffs)

    def valuation(self) -> int | None:
        for k, c in enumerate(self.coeffs):
            if not _is_zero(c):
                return k
        return None

    def truncate(self, order: int) -> "TruncSeries":
        return TruncSeries(self.coeffs, min(order, self.order), self.var)

    def _like(self, other):
        if isinstance(other, TruncSeries):
            if other.var != self.var:
                raise ValueError(f"series in {self.var} and {other.var} do not mix")
            return other
        return None

    def __add__(self, other):
        o = self._like(other)
        if o is None:
            cs = list(self.coeffs)
            cs[0] = cs[0] + other
            return TruncSeries(cs, self.order, self.var)
        n = min(self.order, o.order)
        return TruncSeries([self.coeffs[k] + o.coeffs[k] for k in range(n + 1)], n, self.var)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-c for c in self.coeffs], self.order, self.var)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._like(other)
        if o is None:
            if isinstance(other, TruncSeries):
                return NotImplemented
            return TruncSeries([c * other for c in self.coeffs], self.order, self.var)
        n = min(self.order, o.order)
        a, b = self.coeffs, o.coeffs
        return TruncSeries([_dot((a[i], b[k - i]) for i in range(k + 1)) for k in range(n + 1)],
                           n, self.var)

    def __rmul__(self, other):
        return self * other

    def recip(self) -> "TruncSeries":
        """Multiplicative inverse; the constant term must be a unit."""
        a = self.coeffs
        if _is_zero(a[0]):
            raise ZeroDivisionError("series with zero constant term is not invertible")
        inv0 = _inverse(a[0])
        out = [inv0]
        for k in range(1, self.order + 1):
            s = _dot((a[i], out[k - i]) for i in range(1, k + 1))
            out.append(-(s * inv0) if not _is_zero(s) else 0)
        return TruncSeries(out, self.order, self.var)

    inverse = recip

    def __truediv__(self, other):
        if isinstance(other, TruncSeries):
            return self * other.recip()
        return self * _inverse(other)

    def __rtruediv__(self, other):
        return self.recip() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.recip() ** (-e)
        result = TruncSeries.constant(1, self.order, self.var)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        o = self._like(other)
        if o is None:
            return self == TruncSeries.constant(other, self.order, self.var)
        n = min(self.order, o.order)
        return all(_is_zero(self.coeffs[k] - o.coeffs[k]) for k in range(n + 1))

    __hash__ = None

    def map(self, f) -> "TruncSeries":
        return TruncSeries([f(c) for c in self.coeffs], self.order, self.var)

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*{self.var}^{k}" for k, c in enumerate(self.coeffs)
                          if not _is_zero(c))
        return f"{body or '0'} + O({self.var}^{self.order + 1})"


def poly_eval(coeffs, x):
    """sum_k coeffs[k] x^k for a ring element x (Horner)."""
    acc = 0
    for c in reversed(list(coeffs)):
        acc = acc * x + c
    return acc


class LaurentSeries:
    """sum_{min_exp<=e<=order} c_e x^e + O(x^{order+1})."""

    __slots__ = ("min_exp", "coeffs", "order", "var")

    def __init__(self, min_exp: int, coeffs, order: int, var: str = "u"):
        if order < min_exp - 1:
            raise ValueError("order below the leading exponent")
        n = order - min_exp + 1
        cs = list(coeffs)[:n]
        cs += [0] * (n - len(cs))
        self.min_exp, self.coeffs, self.order, self.var = min_exp, cs, order, var

    @classmethod
    def from_trunc(cls, ts: TruncSeries, shift: int = 0) -> "LaurentSeries":
        return cls(shift, ts.coeffs, ts.order + shift, ts.var)

    @classmethod
    def from_terms(cls, terms: dict, order: int, var: str = "u") -> "LaurentSeries":
        """From {exponent: coeff}; exponents above ``order`` are dropped."""
        lo = min(terms, default=order)
        lo = min(lo, order)
        cs = [0] * (order - lo + 1)
        for e, c in terms.items():
            if e <= order:
                cs[e - lo] = cs[e - lo] + c
        return cls(lo, cs, order, var)

    def coefficient(self, e: int):
        if e > self.order:
            raise IndexError(f"coefficient {e} beyond truncation order {self.order}")
        if e < self.min_exp:
            return 0
        return self.coeffs[e - self.min_exp]

    def residue(self):
        return self.coefficient(-1)

    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.coeffs)

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            return self + LaurentSeries(0, [other], self.order, self.var)
        lo = min(self.min_exp, other.min_exp)
        hi = min(self.order, other.order)
        return LaurentSeries(lo, [self.coefficient(e) + other.coefficient(e)
                                  for e in range(lo, hi + 1)], hi, self.var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.min_exp, [-c for c in self.coeffs], self.order, self.var)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return LaurentSeries(self.min_exp, [c * other for c in self.coeffs],
                                 self.order, self.var)
        lo = self.min_exp + other.min_exp
        hi = min(self.order + other.min_exp, other.order + self.min_exp)
        out = []
        for e in range(lo, hi + 1):
            out.append(_dot((self.coefficient(i), other.coefficient(e - i))
                            for i in range(self.min_exp, e - other.min_exp + 1)))
        return LaurentSeries(lo, out, hi, self.var)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*{self.var}^{self.min_exp + i}"
                          for i, c in enumerate(self.coeffs) if not _is_zero(c))
        return f"{body or '0'} + O({self.var}^{self.order + 1})"


def residue_of_product(a: LaurentSeries, b: LaurentSeries):
    """Residue of a*b, computing only the coefficient at exponent -1."""
    known = min(a.order + b.min_exp, b.order + a.min_exp)
    if known < -1:
        raise ValueError("series truncated too early to determine the residue")
    lo = max(a.min_exp, -1 - b.order)
    hi = min(a.order, -1 - b.min_exp)
    return _dot((a.coefficient(e), b.coefficient(-1 - e)) for e in range(lo, hi + 1))


def laurent_residue(a: LaurentSeries):
    return a.residue()
