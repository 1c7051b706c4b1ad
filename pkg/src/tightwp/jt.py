"""JT gravity partition functions from tight volumes.

Z_{g,n}(beta) = int prod_i K_i dK_i Z^TT(beta_i, K_i) T_{g,n}(K; mu]
with the tight trumpet Z^TT(beta, K) = exp(2 R beta) Z^Tr(beta, K).  The
genus-counting factor exp(-S_0 (2g + n - 2)) is not included in ``value``;
its exponent is reported as ``prefactor_exponent``.

A conical defect of JT cone angle 2 pi a (with 2 pi a < pi) is a ``cone``
atom with angle 2 pi a.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath

from .moments import DPS, FZZT, MomentData, Weight, moment_data
from .ring import MPoly
from .ring.mpoly import FIELD, unpack
from .ring.symbols import B, from_id
from .volumes import check_stable, tight_volume


@dataclass
class JTResult:
    value: object
    prefactor_exponent: int
    R: object
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"value": float(self.value), "prefactor_exponent": self.prefactor_exponent,
                "R": float(self.R), "diagnostics": self.diagnostics}


def trumpet(beta, b):
    """Z^Tr(beta, b) = exp(-b^2 / (4 beta)) / (2 sqrt(pi beta))."""
    beta = mpmath.mpf(beta)
    return mpmath.exp(-mpmath.mpf(b) ** 2 / (4 * beta)) / (2 * mpmath.sqrt(mpmath.pi * beta))


def tight_trumpet(beta, K, R):
    """Z^TT(beta, K) = exp(2 R beta) Z^Tr(beta, K)."""
    return mpmath.exp(2 * mpmath.mpf(R) * mpmath.mpf(beta)) * trumpet(beta, K)


def length_coefficients(poly: MPoly, n: int, data: MomentData | None = None) -> dict:
    """{(k_1..k_n): numeric coefficient of prod L_i^{2k_i}}.

    Non-length symbols are evaluated with ``data`` (zero weight if None).
    """
    data = data if data is not None else moment_data(Weight(), 1)
    groups: dict[tuple, dict] = {}
    for key, c in poly.raw.items():
        ks = [0] * n
        rest = 0
        for sid, e in unpack(key):
            s = from_id(sid)
            if s.kind == B:
                if not 1 <= s.index <= n:
                    raise ValueError(f"unexpected length L{s.index}")
                ks[s.index - 1] = e
            else:
                rest += e << (FIELD * sid)
        groups.setdefault(tuple(ks), {})[rest] = c
    with mpmath.workdps(DPS):
        return {k: data.evaluate(MPoly(v)) for k, v in groups.items()}


def gauss_glue(coeffs: dict, betas, R=0):
    """int prod K_i dK_i Z^TT(beta_i, K_i) sum_k c_k prod K_i^{2k_i}.

    Uses int_0^inf K^{2k+1} exp(-K^2/(4 beta)) dK = k! (4 beta)^{k+1} / 2.
    """
    with mpmath.workdps(DPS):
        betas = [mpmath.mpf(x) for x in betas]
        if any(x <= 0 for x in betas):
            raise ValueError("boundary lengths beta must be positive")
        R = mpmath.mpf(R)
        pref = mpmath.mpf(1)
        for bt in betas:
            pref *= mpmath.exp(2 * R * bt) / (2 * mpmath.sqrt(mpmath.pi * bt))
        total = mpmath.mpf(0)
        for ks, c in coeffs.items():
            term = c
            for k, bt in zip(ks, betas):
                term *= mpmath.factorial(k) * (4 * bt) ** (k + 1) / 2
            total += term
        return pref * total


def z02(beta1, beta2, R=0):
    """sqrt(beta1 beta2) / (2 pi (beta1 + beta2)) exp(2 (beta1 + beta2) R)."""
    with mpmath.workdps(DPS):
        b1, b2, R = mpmath.mpf(beta1), mpmath.mpf(beta2), mpmath.mpf(R)
        return mpmath.sqrt(b1 * b2) / (2 * mpmath.pi * (b1 + b2)) * mpmath.exp(2 * (b1 + b2) * R)


def jt_partition(g: int, n: int, betas, weight: Weight | None = None) -> JTResult:
    """Z_{g,n}(beta) for a defect weight (conical defects, cusps, geodesics, FZZT)."""
    betas = list(betas)
    if len(betas) != n:
        raise ValueError(f"expected {n} boundary lengths, got {len(betas)}")
    weight = weight if weight is not None else Weight()
    if (g, n) != (0, 2):
        check_stable(g, n, min_n=1)
    K = max(3 * g - 3 + n, 1)
    data = moment_data(weight, K)
    diag = {"residual": float(abs(data.residual)), "iterations": data.iterations}
    if (g, n) == (0, 2):
        val = z02(betas[0], betas[1], data.R)
    else:
        coeffs = length_coefficients(tight_volume(g, n).poly, n, data)
        val = gauss_glue(coeffs, betas, data.R)
    return JTResult(val, 2 * g + n - 2, data.R, diag)


def fzzt_partition(g: int, n: int, betas, s0: float, z: float,
                   weight: Weight | None = None) -> JTResult:
    """Z_{g,n} with an FZZT brane d mu = -exp(-s0 - z L) dL added to ``weight``."""
    atoms = weight.atoms if weight is not None else ()
    return jt_partition(g, n, betas, Weight(atoms, FZZT(s0, z)))
