"""Volume polynomials, basis changes and the kernel recursion for tight volumes.

Conventions: ``b(i)`` stands for L_i^2, ``PI2`` for pi^2.  Tight volumes are
computed in the kernel-coefficient basis ``beta_m`` (the coefficients of
1/eta(u) in u^2); they convert to the moment basis (M_k, 1/M_0) and
specialize to Weil-Petersson volumes at zero weight, where
beta_m -> [u^{2m}] 2 pi u / sin(2 pi u).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import factorial

from gmpy2 import mpq

from ._memo import memoize
from .ring import (INV_M0, PI2, MPoly, TruncSeries, b, beta, const, moment,
                   small_m, sum_of_products, var)
from .ring.symbols import BETA, INVM0, M, SMALLM

BASES = ("beta", "moments", "m", "wp")


def check_stable(g: int, n: int, min_n: int = 0) -> None:
    if not isinstance(g, int) or not isinstance(n, int):
        raise TypeError("g and n must be integers")
    if g < 0 or n < min_n:
        raise ValueError(f"invalid (g, n) = ({g}, {n})")
    if 2 * g - 2 + n <= 0:
        raise ValueError(f"(g, n) = ({g}, {n}) is unstable (2g - 2 + n must be positive)")


def is_stable(g: int, n: int) -> bool:
    return g >= 0 and n >= 0 and 2 * g - 2 + n > 0


@dataclass(frozen=True)
class VolumePoly:
    """A volume polynomial with its labels.

    ``p`` counts trailing defect slots b(n+1)..b(n+p) (zero for plain volumes).
    """

    g: int
    n: int
    basis: str
    poly: MPoly
    p: int = 0

    def __post_init__(self):
        if self.basis not in BASES:
            raise ValueError(f"unknown basis {self.basis!r}")

    def to_json(self) -> dict:
        return {"g": self.g, "n": self.n, "p": self.p, "basis": self.basis,
                "poly": self.poly.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "VolumePoly":
        return cls(int(data["g"]), int(data["n"]), data["basis"],
                   MPoly.from_json(data["poly"]), int(data.get("p", 0)))

    def specialize_wp(self) -> "VolumePoly":
        return VolumePoly(self.g, self.n, "wp", specialize_wp(self.poly), self.p)


# basis data ---------------------------------------------------------------

@memoize
def _eta_zero(order: int) -> TruncSeries:
    # sin(2 pi u)/(2 pi u) = sum_p (-4 pi^2)^p u^{2p} / (2p+1)!, as a series in u^2
    return TruncSeries([var(PI2, p) * mpq((-4) ** p, factorial(2 * p + 1)) if p else const(1)
                        for p in range(order + 1)], order)


@memoize
def beta_at_zero(order: int) -> tuple[MPoly, ...]:
    """beta_m at zero weight, m = 0..order, as polynomials in pi^2."""
    return tuple(_eta_zero(order).recip().coeffs)


def double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


@memoize
def eta_in_moments(order: int) -> TruncSeries:
    """eta(u) = sum_p M_p u^{2p} / (2p+1)!!, as a series in u^2."""
    return TruncSeries([var(moment(p)) * mpq(1, double_factorial(2 * p + 1))
                        for p in range(order + 1)], order)


@memoize
def beta_in_moments(order: int) -> tuple[MPoly, ...]:
    """beta_m in terms of 1/M_0 and M_1, M_2, ... (M_0 itself never appears)."""
    return tuple(eta_in_moments(order).recip().coeffs)


def wp_moment(k: int) -> MPoly:
    """M_k at zero weight: (-2 pi^2)^k / k!."""
    return var(PI2, k) * mpq((-2) ** k, factorial(k)) if k else const(1)


def _max_index(p: MPoly, kind: str) -> int:
    return max((s.index for s in p.symbols() if s.kind == kind), default=-1)


def beta_to_moments(p: MPoly) -> MPoly:
    k = _max_index(p, BETA)
    if k < 0:
        return p
    table = beta_in_moments(k)
    return p.subs({beta(i): table[i] for i in range(k + 1)})


def normalized_to_moments(p: MPoly, weight: int) -> MPoly:
    """M_0^{-weight} * p(m_k -> M_k / M_0)."""
    k = _max_index(p, SMALLM)
    sub = {small_m(i): var(moment(i)) * var(INV_M0) for i in range(1, k + 1)}
    return p.subs(sub) * var(INV_M0, weight)


def specialize_wp(p: MPoly) -> MPoly:
    """Zero-weight specialization of any basis to a polynomial in pi^2 and lengths."""
    sub = {}
    kb = _max_index(p, BETA)
    if kb >= 0:
        table = beta_at_zero(kb)
        sub.update({beta(i): table[i] for i in range(kb + 1)})
    for i in range(_max_index(p, M) + 1):
        sub[moment(i)] = wp_moment(i)
    for i in range(1, _max_index(p, SMALLM) + 1):
        sub[small_m(i)] = wp_moment(i)
    if any(s.kind == INVM0 for s in p.symbols()):
        sub[INV_M0] = const(1)
    return p.subs(sub)


# kernel moments -----------------------------------------------------------

@memoize
def _double_kernel(s: int) -> MPoly:
    # sum_{m=0}^{s} beta_m * (1/2L1) int_0^{L1} t^{2(s-m)}/(2(s-m))! dt
    return MPoly.from_terms(({beta(m): 1, b(1): s - m}, mpq(1, 2 * factorial(2 * (s - m) + 1)))
                            for m in range(s + 1))


def kernel_double_moment(i: int, j: int) -> MPoly:
    """(1/2L1) int_0^{L1} dt int int x^{2i-1} y^{2j-1}/((2i-1)!(2j-1)!) K(x+y, t) dx dy.

    Only i + j matters; i, j >= 1.
    """
    if i < 1 or j < 1:
        raise ValueError("kernel moments need i, j >= 1")
    return _double_kernel(i + j)


@memoize
def kernel_single_moment(i: int, j: int) -> MPoly:
    """(1/2L1) int_0^{L1} dt int x^{2i-1}/(2i-1)! [K(x, t+L_j) + K(x, t-L_j)] dx.

    Even polynomial in L_1, L_j with beta coefficients; i >= 1, j >= 2.
    """
    if i < 1 or j < 2:
        raise ValueError("kernel moments need i >= 1 and j >= 2")
    terms = []
    for m in range(i + 1):
        k = i - m
        for l in range(k + 1):
            terms.append(({beta(m): 1, b(1): l, b(j): k - l},
                          mpq(1, factorial(2 * l + 1) * factorial(2 * k - 2 * l))))
    return MPoly.from_terms(terms)


# kernel recursion ---------------------------------------------------------

def _relabel(p: MPoly, labels) -> MPoly:
    """Send slot s (s = 2, 3, ...) to b(labels[s - 2])."""
    return p.rename({b(s + 2): b(lab) for s, lab in enumerate(labels) if s + 2 != lab})


def _slot_coeffs(p: MPoly, slot: int) -> dict[int, MPoly]:
    return p.coefficients(b(slot))


@memoize
def tight_volume(g: int, n: int) -> VolumePoly:
    """Tight volume T_{g,n} in the beta basis, by the kernel recursion."""
    check_stable(g, n, min_n=1)
    if (g, n) == (0, 3):
        return VolumePoly(0, 3, "beta", var(beta(0)))
    if (g, n) == (1, 1):
        return VolumePoly(1, 1, "beta", var(beta(1)) / 8 + var(beta(0)) * var(b(1)) / 48)

    rest = list(range(2, n + 1))
    # S[s] collects sum (2a+1)!(2c+1)! [x^{2a} y^{2c}] with a + c + 2 = s
    S: dict[int, list] = {}

    def push(a, c, poly):
        S.setdefault(a + c + 2, []).append((mpq(factorial(2 * a + 1) * factorial(2 * c + 1)), poly))

    if g >= 1 and is_stable(g - 1, n + 1):
        prev = tight_volume(g - 1, n + 1).poly
        for a, pa in _slot_coeffs(prev, 1).items():
            for c, pac in pa.coefficients(b(2)).items():
                push(a, c, pac.rename({b(k): b(k - 1) for k in range(3, n + 2)}))

    for g1 in range(g + 1):
        g2 = g - g1
        for r in range(len(rest) + 1):
            for I in combinations(rest, r):
                J = [x for x in rest if x not in I]
                if not (is_stable(g1, 1 + len(I)) and is_stable(g2, 1 + len(J))):
                    continue
                t1 = _slot_coeffs(tight_volume(g1, 1 + len(I)).poly, 1)
                t2 = _slot_coeffs(tight_volume(g2, 1 + len(J)).poly, 1)
                t1 = {a: _relabel(p, I) for a, p in t1.items()}
                t2 = {c: _relabel(p, J) for c, p in t2.items()}
                for a, pa in t1.items():
                    for c, pc in t2.items():
                        push(a, c, pa * pc)

    pairs = []
    for s, items in S.items():
        acc = MPoly()
        for w, poly in items:
            acc = acc + poly * w
        pairs.append((acc, _double_kernel(s)))

    if n >= 2:
        prev = _slot_coeffs(tight_volume(g, n - 1).poly, 1)
        for j in rest:
            others = [x for x in rest if x != j]
            for a, pa in prev.items():
                pairs.append((_relabel(pa, others) * factorial(2 * a + 1),
                              kernel_single_moment(a + 1, j)))

    return VolumePoly(g, n, "beta", sum_of_products(pairs))


def tight_volume_moments(g: int, n: int) -> VolumePoly:
    return VolumePoly(g, n, "moments", beta_to_moments(tight_volume(g, n).poly))


@memoize
def wp_volume(g: int, n: int) -> VolumePoly:
    """Weil-Petersson volume V_{g,n}(L), the zero-weight specialization.

    n = 0 (g >= 2) comes from the vacuum seeds of the n-recursion.
    """
    if n == 0:
        check_stable(g, n)
        from .nrecursion import normalized_volume
        return VolumePoly(g, 0, "wp", specialize_wp(normalized_volume(g, 0).poly))
    return tight_volume(g, n).specialize_wp()
