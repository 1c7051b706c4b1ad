"""Residue recursion for the spectral-curve correlators.

A correlator omega_{g,n} is a polynomial in z_i^{-2} (symbol ``zinv(i)``) and
the kernel coefficients; the entry at prod z_i^{-2k_i-2} corresponds to
prod L_i^{2k_i} / (2k_i+1)! of the tight volume (Laplace transform).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import factorial

from gmpy2 import mpq

from ._memo import memoize
from .ring import (LaurentSeries, MPoly, b, beta, const, linear_combination,
                   residue_of_product, var, zinv)
from .ring.mpoly import FIELD, pack, unpack
from .ring.symbols import B, Z, from_id
from .volumes import VolumePoly, beta_at_zero, check_stable, is_stable


@dataclass(frozen=True)
class CorrelatorLaurent:
    g: int
    n: int
    basis: str
    poly: MPoly

    def table(self) -> dict[tuple[int, ...], MPoly]:
        """{(k_1..k_n): coefficient of prod z_i^{-2k_i-2}}."""
        out: dict[tuple, dict] = {}
        zids = {zinv(i).id: i for i in range(1, self.n + 1)}
        for key, c in self.poly.raw.items():
            ks = [None] * self.n
            rest = 0
            for sid, e in unpack(key):
                if sid in zids:
                    ks[zids[sid] - 1] = e - 1
                else:
                    rest += e << (FIELD * sid)
            out.setdefault(tuple(ks), {})[rest] = c
        return {k: MPoly(v) for k, v in sorted(out.items())}

    def to_json(self) -> dict:
        return {"g": self.g, "n": self.n, "basis": self.basis,
                "terms": [{"k": list(k), "coeff": c.to_json()} for k, c in self.table().items()]}

    @classmethod
    def from_json(cls, data: dict) -> "CorrelatorLaurent":
        n = int(data["n"])
        poly = MPoly()
        for t in data["terms"]:
            mono = MPoly.from_terms([({zinv(i + 1): k + 1 for i, k in enumerate(t["k"])}, 1)])
            poly = poly + mono * MPoly.from_json(t["coeff"])
        return cls(int(data["g"]), n, data.get("basis", "beta"), poly)


def _beta_values(basis: str, order: int) -> list[MPoly]:
    if basis == "beta":
        return [var(beta(m)) for m in range(order + 1)]
    if basis == "wp":
        return list(beta_at_zero(order))
    raise ValueError(f"unknown correlator basis {basis!r}")


@memoize
def _kernel(order: int, basis: str) -> LaurentSeries:
    """(1 / (2u (z_1^2 - u^2) eta(u))), expanded at u = 0 up to u^order."""
    smax = (order + 1) // 2
    bet = _beta_values(basis, smax)
    coeffs = {}
    for s in range(smax + 1):
        acc = linear_combination((mpq(1, 2), bet[m] * var(zinv(1), s - m + 1)) for m in range(s + 1))
        coeffs[2 * s - 1] = acc
    return LaurentSeries.from_terms(coeffs, order)


def _u_pieces(p: MPoly, slot_sym, labels) -> dict[int, MPoly]:
    """Substitute z_slot -> u: {u exponent: coefficient}, other slots relabelled.

    ``labels`` gives the new label of slots 2, 3, ... in order.
    """
    ren = {zinv(s + 2): zinv(lab) for s, lab in enumerate(labels)}
    out = {}
    for e, c in p.coefficients(slot_sym).items():
        out[-2 * e] = c.rename(ren)
    return out


def _add_into(acc: dict, e: int, c: MPoly):
    acc[e] = acc[e] + c if e in acc else c


@memoize
def omega(g: int, n: int, basis: str = "beta") -> CorrelatorLaurent:
    """omega_{g,n} by the residue recursion; ``basis`` is 'beta' or 'wp'."""
    check_stable(g, n, min_n=1)
    if (g, n) == (0, 3):
        b0 = _beta_values(basis, 0)[0]
        return CorrelatorLaurent(0, 3, basis, b0 * var(zinv(1)) * var(zinv(2)) * var(zinv(3)))

    depth = 3 * g - 3 + n
    rest = list(range(2, n + 1))
    bracket: dict[int, MPoly] = {}

    # omega_{g-1,n+1}(u, -u, z_rest)
    if g >= 1:
        if (g - 1, n + 1) == (0, 2):
            _add_into(bracket, -2, const(mpq(1, 4)))
        else:
            w = omega(g - 1, n + 1, basis).poly
            for e1, c1 in w.coefficients(zinv(1)).items():
                for e2, c2 in c1.coefficients(zinv(2)).items():
                    c = c2.rename({zinv(k): zinv(k - 1) for k in range(3, n + 2)})
                    _add_into(bracket, -2 * (e1 + e2), c)

    # stable splittings omega_{g1}(u, z_I) omega_{g2}(-u, z_J)
    for g1 in range(g + 1):
        for r in range(len(rest) + 1):
            for I in combinations(rest, r):
                J = [x for x in rest if x not in I]
                g2 = g - g1
                if not (is_stable(g1, 1 + len(I)) and is_stable(g2, 1 + len(J))):
                    continue
                p1 = _u_pieces(omega(g1, 1 + len(I), basis).poly, zinv(1), I)
                p2 = _u_pieces(omega(g2, 1 + len(J), basis).poly, zinv(1), J)
                for e1, c1 in p1.items():
                    for e2, c2 in p2.items():
                        _add_into(bracket, e1 + e2, c1 * c2)

    # omega_{0,2}(+-u, z_j) omega_{g,n-1}(-+u, ...), even part 2 sum (2p+1) u^{2p} z_j^{-2p-2}
    if n >= 2 and is_stable(g, n - 1):
        for j in rest:
            others = [x for x in rest if x != j]
            pieces = _u_pieces(omega(g, n - 1, basis).poly, zinv(1), others)
            for e, c in pieces.items():
                for p in range(0, (-e) // 2 + 1):
                    _add_into(bracket, e + 2 * p, c * var(zinv(j), p + 1) * (2 * (2 * p + 1)))

    if not bracket:
        return CorrelatorLaurent(g, n, basis, MPoly())
    B_series = LaurentSeries.from_terms(bracket, 0)
    K = _kernel(2 * depth - 1, basis)
    return CorrelatorLaurent(g, n, basis, residue_of_product(K, B_series))


def omega_from_T(T: VolumePoly) -> CorrelatorLaurent:
    """Laplace transform: prod L_i^{2k_i} -> prod (2k_i+1)! z_i^{-2k_i-2}."""
    out = {}
    for key, c in T.poly.raw.items():
        exps = dict.fromkeys(range(1, T.n + 1), 0)
        kept = 0
        for sid, e in unpack(key):
            s = from_id(sid)
            if s.kind == B and 1 <= s.index <= T.n:
                exps[s.index] = e
            else:
                kept += e << (FIELD * sid)
        w = 1
        for i, k in exps.items():
            w *= factorial(2 * k + 1)
            kept += pack({zinv(i): k + 1})
        out[kept] = out.get(kept, 0) + c * w
    basis = "wp" if T.basis == "wp" else T.basis
    return CorrelatorLaurent(T.g, T.n, basis, MPoly({k: v for k, v in out.items() if v}))


def T_from_omega(w: CorrelatorLaurent) -> VolumePoly:
    """Inverse Laplace transform of :func:`omega_from_T`."""
    out = {}
    for key, c in w.poly.raw.items():
        kept = 0
        seen = set()
        div = 1
        for sid, e in unpack(key):
            s = from_id(sid)
            if s.kind == Z:
                if not 1 <= s.index <= w.n:
                    raise ValueError(f"correlator has an unexpected variable z{s.index}")
                seen.add(s.index)
                div *= factorial(2 * e - 1)
                kept += pack({b(s.index): e - 1})
            else:
                kept += e << (FIELD * sid)
        if len(seen) != w.n:
            raise ValueError("correlator term is not a pure pole in every variable")
        out[kept] = out.get(kept, 0) + c / div
    return VolumePoly(w.g, w.n, w.basis, MPoly({k: v for k, v in out.items() if v}))


def tight_volume_residue(g: int, n: int) -> VolumePoly:
    """Tight volume obtained from the residue recursion."""
    return T_from_omega(omega(g, n, "beta"))
