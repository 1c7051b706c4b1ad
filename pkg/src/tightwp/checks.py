"""Identity suites shared by the command line and the test-suite.

Each check returns a record ``{"suite", "name", "passed", "detail"}``.
"""

from __future__ import annotations

import random
from math import factorial

import mpmath
from gmpy2 import mpq

from .correlators import T_from_omega, omega
from .decomposition import (formal_consistency, half_tight_H, half_tight_volume,
                            regluing_check)
from .jt import gauss_glue, length_coefficients, tight_trumpet, trumpet, z02
from .moments import (DPS, Atom, Weight, disk_function, disk_function_eta, moment_data,
                      string_function)
from .nrecursion import string_dilaton_check, tight_volume_nrec
from .ring import PI2, MPoly, TruncSeries, b, const, moment, small_m, var
from .volumes import (beta_to_moments, double_factorial, tight_volume,
                      tight_volume_moments, wp_volume)

SUITES = ("ring", "paths", "string-dilaton", "decomposition", "jt", "moments")
DEFAULT_COMPLEXITY = 6
REGLUE_CELLS = ((0, 3, 1), (0, 3, 2), (0, 4, 1), (1, 1, 1), (1, 1, 2))
FORMAL_CELLS = ((0, 3), (1, 1), (0, 4))
QUAD_TOL = 1e-8


def _record(suite, name, passed, **detail):
    return {"suite": suite, "name": name, "passed": bool(passed), "detail": detail}


def stable_cells(max_complexity: int, min_n: int = 1):
    """Stable (g, n) with n >= min_n and 2g - 2 + n <= max_complexity, sorted."""
    out = []
    for g in range(max_complexity // 2 + 2):
        for n in range(min_n, max_complexity + 3):
            c = 2 * g - 2 + n
            if 0 < c <= max_complexity:
                out.append((g, n))
    return sorted(out, key=lambda gn: (2 * gn[0] - 2 + gn[1], gn))


def string_dilaton_cells(max_complexity: int):
    return [(g, n) for g, n in stable_cells(max_complexity)
            if (g != 0 or n >= 4) and (g != 1 or n >= 2)]


# ring ------------------------------------------------------------------------

def _random_poly(rng, syms, terms=4):
    p = MPoly()
    for _ in range(terms):
        mono = {s: rng.randint(0, 3) for s in rng.sample(syms, 2)}
        p = p + MPoly.from_terms([(mono, mpq(rng.randint(-9, 9), rng.randint(1, 5)))])
    return p


def ring_suite(max_complexity: int = DEFAULT_COMPLEXITY, seed: int = 0):
    rng = random.Random(seed)
    syms = [b(1), b(2), PI2, moment(1), small_m(2)]
    ok_assoc = ok_dist = ok_comm = True
    for _ in range(10 * max(1, max_complexity)):
        x, y, z = (_random_poly(rng, syms) for _ in range(3))
        ok_assoc &= (x * y) * z == x * (y * z)
        ok_dist &= x * (y + z) == x * y + x * z
        ok_comm &= x * y == y * x
    out = [_record("ring", "associativity", ok_assoc),
           _record("ring", "distributivity", ok_dist),
           _record("ring", "commutativity", ok_comm)]
    N = 8
    s = TruncSeries([const(1)] + [_random_poly(rng, syms) for _ in range(N)], N)
    out.append(_record("ring", "series inverse", (s * s.recip()) == TruncSeries.constant(const(1), N)))
    return out


# three computation paths -----------------------------------------------------

def paths_suite(max_complexity: int = DEFAULT_COMPLEXITY):
    out = []
    for g, n in stable_cells(max_complexity):
        kernel = tight_volume_moments(g, n).poly
        residue = T_from_omega(omega(g, n, "beta"))
        res_moments = beta_to_moments(residue.poly)
        nrec = tight_volume_nrec(g, n).poly
        wp_from_nrec = tight_volume_nrec(g, n).specialize_wp().poly
        same = kernel == res_moments == nrec
        collapse = wp_from_nrec == wp_volume(g, n).poly
        out.append(_record("paths", f"T[{g},{n}] three paths", same, g=g, n=n, terms=len(kernel)))
        out.append(_record("paths", f"V[{g},{n}] zero-weight collapse", collapse, g=g, n=n))
    return out


# string and dilaton ------------------------------------------------------------

def string_dilaton_suite(max_complexity: int = DEFAULT_COMPLEXITY):
    out = []
    for g, n in string_dilaton_cells(max_complexity):
        r = string_dilaton_check(g, n)
        out.append(_record("string-dilaton", f"string[{g},{n}]", r["string"], g=g, n=n))
        out.append(_record("string-dilaton", f"dilaton[{g},{n}]", r["dilaton"], g=g, n=n))
    return out


# tight decomposition -------------------------------------------------------------

def h_series_leading_terms() -> bool:
    """H = R + (L1^2 - L2^2) R^2 / 4 + (L1^2 - L2^2)^2 R^3 / 48 + O(R^4)."""
    H = half_tight_H(4)
    d = var(b(1)) - var(b(2))
    return (H[0].is_zero() and H[1] == const(1) and H[2] == d / 4
            and H[3] == d ** 2 / 48)


def decomposition_suite(max_complexity: int = DEFAULT_COMPLEXITY):
    out = [_record("decomposition", "H_1 = 1", half_tight_volume(1) == const(1)),
           _record("decomposition", "H series leading terms", h_series_leading_terms())]
    for g, n, p in REGLUE_CELLS:
        if 2 * g - 2 + n + p <= max_complexity:
            out.append(_record("decomposition", f"reglue[{g},{n},{p}]", regluing_check(g, n, p),
                               g=g, n=n, p=p))
    for g, n in FORMAL_CELLS:
        if 2 * g - 2 + n + 3 <= max_complexity:
            res = formal_consistency(g, n, 3)
            out.append(_record("decomposition", f"formal w-expansion[{g},{n}]", all(res.values()),
                               g=g, n=n, orders=sorted(res)))
    return out


# JT gluing -------------------------------------------------------------------------

def _rel(a, b):
    return float(abs(a - b) / abs(b))


def glue_by_quadrature(g: int, n: int, betas, weight: Weight):
    """Direct quadrature of the gluing integral (n = 1 only)."""
    if n != 1:
        raise ValueError("quadrature oracle implemented for one boundary")
    data = moment_data(weight, max(3 * g - 3 + n, 1))
    coeffs = length_coefficients(tight_volume(g, n).poly, 1, data)
    with mpmath.workdps(30):
        def integrand(K):
            poly = sum(c * K ** (2 * k[0]) for k, c in coeffs.items())
            return K * tight_trumpet(betas[0], K, data.R) * poly
        return mpmath.quad(integrand, [0, mpmath.inf]), data


def z02_by_quadrature(beta1, beta2, R):
    with mpmath.workdps(30):
        f = lambda K: K * tight_trumpet(beta1, K, R) * tight_trumpet(beta2, K, R)
        return mpmath.quad(f, [0, mpmath.inf])


SAMPLE_WEIGHT = Weight((Atom("geodesic", 0.02, length=1.0),))

# weights of magnitude in [1e-3, 1e-1]; positive mass stays below the
# critical value (about 0.03) beyond which the string equation has no real root
STANDARD_WEIGHTS = (
    Weight((Atom("geodesic", 0.01, length=1.0),)),
    Weight((Atom("cusp", 0.001),)),
    Weight((Atom("cone", 0.02, angle=1.0), Atom("cusp", 0.001))),
    Weight((Atom("geodesic", -0.1, length=0.5), Atom("cone", 0.03, angle=2.5))),
    Weight((Atom("geodesic", -0.05, length=2.0), Atom("geodesic", 0.02, length=0.3))),
    Weight((Atom("cone", -0.1, angle=3.0),)),
)


def jt_suite(max_complexity: int = DEFAULT_COMPLEXITY, weight: Weight = SAMPLE_WEIGHT):
    out = []
    betas = (0.5, 1.0, 2.0)
    for w_label, wt in (("mu=0", Weight()), ("sample defect", weight)):
        R = moment_data(wt, 1).R
        for b1 in betas:
            for b2 in betas:
                err = _rel(z02_by_quadrature(b1, b2, R), z02(b1, b2, R))
                out.append(_record("jt", f"Z02 gluing {w_label} beta=({b1},{b2})", err <= QUAD_TOL,
                                   rel_err=err))
        for bt in betas:
            quad, data = glue_by_quadrature(1, 1, [bt], wt)
            coeffs = length_coefficients(tight_volume(1, 1).poly, 1, data)
            closed = gauss_glue(coeffs, [bt], data.R)
            err = _rel(quad, closed)
            out.append(_record("jt", f"Z11 moment map {w_label} beta={bt}", err <= QUAD_TOL,
                               rel_err=err))
    for bt in betas:
        exact = mpmath.sqrt(bt) * (bt + mpmath.pi ** 2) / (12 * mpmath.sqrt(mpmath.pi))
        err = _rel(gauss_glue(length_coefficients(wp_volume(1, 1).poly, 1), [bt]), exact)
        out.append(_record("jt", f"Z11 classical beta={bt}", err <= QUAD_TOL, rel_err=err))
    for k in range(7):
        with mpmath.workdps(30):
            quad = mpmath.quad(lambda K: K ** (2 * k + 1) * mpmath.exp(-K ** 2 / 4), [0, mpmath.inf])
            closed = factorial(k) * mpmath.mpf(4) ** (k + 1) / 2
        err = _rel(quad, closed)
        out.append(_record("jt", f"gaussian moment k={k}", err <= QUAD_TOL, rel_err=err))
    R = moment_data(weight, 1).R
    for bt in betas:
        for K in (0.5, 1.5):
            err = _rel(tight_trumpet_by_half_tight(bt, K, R), tight_trumpet(bt, K, R))
            out.append(_record("jt", f"tight trumpet beta={bt} K={K}", err <= QUAD_TOL, rel_err=err))
    return out


def tight_trumpet_by_half_tight(beta, K, R):
    """Z^Tr(beta, K) + int_K^inf L dL Z^Tr(beta, L) H(L, K; R)."""
    from .decomposition import half_tight_H_value
    with mpmath.workdps(30):
        f = lambda L: L * trumpet(beta, L) * half_tight_H_value(L, K, R)
        return trumpet(beta, K) + mpmath.quad(f, [K, mpmath.inf])


# moment identities -------------------------------------------------------------------

def moments_suite(max_complexity: int = DEFAULT_COMPLEXITY):
    out = []
    for i, wt in enumerate(STANDARD_WEIGHTS):
        data = moment_data(wt, 10)
        res = float(abs(string_function(wt, data.R)))
        out.append(_record("moments", f"string equation residual #{i}", res <= 1e-12, residual=res))
        worst = 0.0
        with mpmath.workdps(DPS):
            for p in range(11):
                s = sum(data.M[m] * data.beta[p - m] / double_factorial(2 * m + 1)
                        for m in range(p + 1))
                worst = max(worst, float(abs(s - (1 if p == 0 else 0))))
        out.append(_record("moments", f"beta-M convolution #{i}", worst <= 1e-10, max_err=worst))
        for z in (2, 3):
            if 4 * abs(data.R) < z * z:
                err = _rel(disk_function(data, z), disk_function_eta(data, z))
                out.append(_record("moments", f"disk identity #{i} z={z}", err <= 1e-6, rel_err=err))
    return out


_RUNNERS = {"ring": ring_suite, "paths": paths_suite, "string-dilaton": string_dilaton_suite,
            "decomposition": decomposition_suite, "jt": jt_suite, "moments": moments_suite}


def run_suite(name: str, max_complexity: int = DEFAULT_COMPLEXITY) -> list[dict]:
    if name == "all":
        return [r for s in SUITES for r in _RUNNERS[s](max_complexity)]
    if name not in _RUNNERS:
        raise ValueError(f"unknown suite {name!r}")
    return _RUNNERS[name](max_complexity)


__all__ = ["SUITES", "run_suite", "stable_cells", "string_dilaton_cells", "glue_by_quadrature",
           "z02_by_quadrature", "STANDARD_WEIGHTS", "SAMPLE_WEIGHT", "tight_trumpet_by_half_tight", "h_series_leading_terms"]
