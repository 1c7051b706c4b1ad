"""Tight decomposition of Weil-Petersson volumes.

A surface with n boundaries and p extra defect boundaries decomposes into a
tight part and half-tight cylinders, one per tight boundary that carries
defects.  Inverting the gluing gives exact tables of

* half-tight cylinder volumes H_p(L_1, L_2, L_3..L_{2+p}) (L_1 outer, L_2 inner),
* tight volumes with defects T_{g,n,p}(L_1..L_n, L_{n+1}..L_{n+p}),

as polynomials in b(i) = L_i^2 and pi^2.  Gluing along a boundary of length K
means int_0^{L_i} (...) K dK.
"""

from __future__ import annotations

import math
from itertools import combinations, product

import mpmath
from gmpy2 import mpq

from ._memo import memoize
from .ring import MPoly, TruncSeries, b, var
from .volumes import VolumePoly, check_stable, wp_volume

# scratch labels for glued boundaries, well above any boundary in use
_SCRATCH = 200


def _glue(poly: MPoly, scratch: int, target: int) -> MPoly:
    """int_0^{L_target} poly(K) K dK where K is the scratch label."""
    return poly.integrate_even(scratch).rename({b(scratch): b(target)})


def _subsets(items):
    for r in range(len(items) + 1):
        yield from combinations(items, r)


def _place_half_tight(p: int, outer: int, inner: int, defects) -> MPoly:
    """H_p with slot 1 -> outer, slot 2 -> inner, slots 3.. -> defects."""
    ren = {b(1): b(outer), b(2): b(inner)}
    ren.update({b(3 + s): b(d) for s, d in enumerate(defects)})
    return half_tight_volume(p).rename(ren)


@memoize
def half_tight_volume(p: int) -> MPoly:
    """H_p(L_1, L_2, L_3..L_{2+p}); H_1 = 1.  Requires p >= 1."""
    if p < 1:
        raise ValueError("half-tight cylinders carry at least one defect")
    V = wp_volume(0, 2 + p).poly
    defects = list(range(3, 3 + p))
    out = V
    for I1 in _subsets(defects):
        I2 = [x for x in defects if x not in I1]
        if not I1 or not I2:
            continue
        k = _SCRATCH
        left = _place_half_tight(len(I1), 1, k, I1)
        right = _place_half_tight(len(I2), 2, k, I2)
        out = out - _glue(left * right, k, 2)
    return out


def _assignments(n: int, defects):
    """Ways to distribute the defect labels over the tight part (0) and boundaries 1..n."""
    for labels in product(range(n + 1), repeat=len(defects)):
        groups = [[] for _ in range(n + 1)]
        for d, lab in zip(defects, labels):
            groups[lab].append(d)
        yield groups


def _glued_term(g: int, n: int, groups, T: MPoly) -> MPoly:
    """Glue half-tight cylinders onto the tight volume T_{g,n,|I_0|}."""
    I0 = groups[0]
    ren = {b(n + 1 + s): b(d) for s, d in enumerate(I0)}
    scratch = {}
    for i in range(1, n + 1):
        if groups[i]:
            scratch[i] = _SCRATCH + i
            ren[b(i)] = b(scratch[i])
    term = T.rename(ren)
    for i, k in scratch.items():
        term = term * _place_half_tight(len(groups[i]), i, k, groups[i])
    for i, k in scratch.items():
        term = _glue(term, k, i)
    return term


@memoize
def extract_tight(g: int, n: int, p: int) -> VolumePoly:
    """T_{g,n,p}: tight boundaries 1..n, defects n+1..n+p (basis 'wp')."""
    check_stable(g, n, min_n=1)
    if p < 0:
        raise ValueError("number of defects must be non-negative")
    V = wp_volume(g, n + p).poly
    if p == 0:
        return VolumePoly(g, n, "wp", V, 0)
    defects = list(range(n + 1, n + p + 1))
    out = V
    for groups in _assignments(n, defects):
        if len(groups[0]) == p:
            continue
        T = extract_tight(g, n, len(groups[0])).poly
        out = out - _glued_term(g, n, groups, T)
    return VolumePoly(g, n, "wp", out, p)


def glue_tight(g: int, n: int, p: int) -> MPoly:
    """Reassemble V_{g,n+p} from the extracted tight and half-tight tables."""
    check_stable(g, n, min_n=1)
    defects = list(range(n + 1, n + p + 1))
    total = MPoly()
    for groups in _assignments(n, defects):
        T = extract_tight(g, n, len(groups[0])).poly
        total = total + _glued_term(g, n, groups, T)
    return total


def regluing_check(g: int, n: int, p: int) -> bool:
    return (glue_tight(g, n, p) - wp_volume(g, n + p).poly).is_zero()


def identify_defects(poly: MPoly, first: int, p: int, target: int) -> MPoly:
    """Set L_first..L_{first+p-1} all equal to L_target."""
    return poly.rename({b(first + s): b(target) for s in range(p)})


# half-tight cylinder generating function ----------------------------------------

def half_tight_H(order: int) -> TruncSeries:
    """H(L_1, L_2) = sum_l 2^{-l} R^{l+1} (L_1^2 - L_2^2)^l / (l! (l+1)!) as a series in R."""
    d = var(b(1)) - var(b(2))
    cs = [MPoly()]
    for l in range(order):
        cs.append(d ** l * mpq(1, 2 ** l * math.factorial(l) * math.factorial(l + 1)))
    return TruncSeries(cs, order, "R")


def half_tight_H_value(L1, L2, R):
    """Numeric H(L_1, L_2; R) = R f(R (L_1^2 - L_2^2)/2), f(y) = sum y^l/(l!(l+1)!).

    Defined for L_1 >= L_2.
    """
    if L1 < L2:
        raise ValueError("half-tight cylinder needs L1 >= L2")
    from .moments import _F
    with mpmath.workdps(30):
        R = mpmath.mpf(R)
        y = R * (mpmath.mpf(L1) ** 2 - mpmath.mpf(L2) ** 2) / 2
        return R * _F(y, 1)


def half_tight_from_tables(order: int, K_label: int) -> TruncSeries:
    """sum_p w^p/p! H_p(L_1, L_2, K, .., K) as a series in w (defects at L_K)."""
    cs = [MPoly()]
    for p in range(1, order + 1):
        Hp = identify_defects(half_tight_volume(p), 3, p, K_label)
        cs.append(Hp * mpq(1, math.factorial(p)))
    return TruncSeries(cs, order, "w")


# formal defect expansion -----------------------------------------------------

def formal_tight_series(g: int, n: int, order: int) -> TruncSeries:
    """T_{g,n}(L; w delta_K] as a series in w, with K^2 = b(n+1) symbolic."""
    from .moments import formal_moment_data
    from .nrecursion import tight_volume_nrec
    check_stable(g, n, min_n=1)
    data = formal_moment_data([(1, var(b(n + 1)))], order, max(3 * g - 3 + n, 1))
    return data.evaluate(tight_volume_nrec(g, n).poly)


def formal_consistency(g: int, n: int, order: int = 3) -> dict[int, bool]:
    """{p: p! [w^p] T_{g,n}(L; w delta_K] == T_{g,n,p}(L, K, .., K)}."""
    series = formal_tight_series(g, n, order)
    out = {}
    for p in range(order + 1):
        explicit = identify_defects(extract_tight(g, n, p).poly, n + 1, p, n + 1)
        out[p] = (series[p] * math.factorial(p) - explicit).is_zero()
    return out


__all__ = ["formal_tight_series", "formal_consistency", "half_tight_volume", "extract_tight", "glue_tight", "regluing_check",
           "identify_defects", "half_tight_H", "half_tight_H_value", "half_tight_from_tables"]
