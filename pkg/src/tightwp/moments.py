"""Moment geometry of a weight measure mu.

Supported measures are finite sums of atoms (geodesic boundaries of length L,
cone points of angle alpha in (0, pi) entering as L = i*alpha, cusps with
L = 0) plus an optional FZZT brane, d mu = -exp(-s0) exp(-z L) dL.

String function (entire in r):
    Z(r) = sum_k (-2 pi^2)^k r^{k+1} / (k! (k+1)!) - int dmu(L) I_0(L sqrt(2r))
R is the root of Z near 0 and M_k = Z^{(k+1)}(R).

Numeric mode works in mpmath at ``DPS`` digits; formal mode treats the weight
as w*mu and returns exact truncated series in w.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from gmpy2 import mpq

from .ring import (INV_M0, PI2, MPoly, TruncSeries, beta, const, moment,
                   small_m, var, zinv)
from .ring.symbols import BETA, INVM0, M, SMALLM
from .volumes import double_factorial

DPS = 40
BESSEL_SWITCH = 30.0
ATOM_KINDS = ("geodesic", "cone", "cusp")


class ConvergenceError(RuntimeError):
    """The string equation could not be solved; carries diagnostics."""

    def __init__(self, message: str, diagnostics: dict):
        super().__init__(message)
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class Atom:
    kind: str
    weight: float | Fraction
    length: float | Fraction | None = None
    angle: float | Fraction | None = None

    def __post_init__(self):
        if self.kind not in ATOM_KINDS:
            raise ValueError(f"unknown atom kind {self.kind!r}")
        if self.kind == "geodesic":
            if self.length is None or self.length < 0:
                raise ValueError("geodesic atoms need a non-negative length")
        elif self.kind == "cone":
            if self.angle is None or not 0 < self.angle < math.pi:
                raise ValueError("cone angles must lie in (0, pi)")

    @property
    def length_sq(self):
        """L^2: length^2 for geodesics, -angle^2 for cones, 0 for cusps."""
        if self.kind == "geodesic":
            return self.length ** 2
        if self.kind == "cone":
            return -self.angle ** 2
        return 0


@dataclass(frozen=True)
class FZZT:
    s0: float
    z: float

    def __post_init__(self):
        if not self.z > 0:
            raise ValueError("the FZZT parameter z must be positive")


@dataclass(frozen=True)
class Weight:
    atoms: tuple[Atom, ...] = ()
    fzzt: FZZT | None = None

    @property
    def is_zero(self) -> bool:
        return not self.atoms and self.fzzt is None

    def total_mass(self) -> float:
        m = sum(float(a.weight) for a in self.atoms)
        if self.fzzt is not None:
            m -= math.exp(-self.fzzt.s0) / self.fzzt.z
        return m

    def to_json(self) -> dict:
        return {"atoms": [{k: v for k, v in (("kind", a.kind), ("weight", float(a.weight)),
                                             ("length", a.length), ("angle", a.angle))
                           if v is not None} for a in self.atoms],
                "fzzt": None if self.fzzt is None else {"s0": self.fzzt.s0, "z": self.fzzt.z}}


def delta(K, w=1.0) -> Weight:
    """w times a delta measure at length K."""
    return Weight((Atom("geodesic", w, length=K),))


# numeric kernels ------------------------------------------------------------

def _F(y, k: int):
    """sum_i y^i / (i! (i+k)!) = y^{-k/2} I_k(2 sqrt y), entire in y."""
    mp = mpmath.mp
    y = mp.mpf(y)
    if y == 0:
        return 1 / mp.factorial(k)
    arg = 2 * mp.sqrt(abs(y))
    if arg > BESSEL_SWITCH:
        if y > 0:
            return mpmath.besseli(k, arg) / mp.sqrt(y) ** k
        return mpmath.besselj(k, arg) / mp.sqrt(-y) ** k
    term = 1 / mp.factorial(k)
    total = term
    i = 0
    eps = mp.mpf(10) ** (-mp.dps - 5)
    while True:
        i += 1
        term = term * y / (i * (i + k))
        total += term
        if abs(term) < eps * max(1, abs(total)) and i > abs(y):
            return total


def _atom_data(weight: Weight):
    return [(mpmath.mpf(float(a.weight)), mpmath.mpf(float(a.length_sq))) for a in weight.atoms]


def string_function(weight: Weight, r, order: int = 0):
    """Z^{(order)}(r) for a numeric weight."""
    with mpmath.workdps(DPS):
        mp = mpmath.mp
        r = mp.mpf(r)
        x = -2 * mp.pi ** 2
        if order == 0:
            val = r * _F(x * r, 1)
            for w, L2 in _atom_data(weight):
                val -= w * _F(L2 * r / 2, 0)
        else:
            val = x ** (order - 1) * _F(x * r, order - 1)
            for w, L2 in _atom_data(weight):
                val -= w * (L2 / 2) ** order * _F(L2 * r / 2, order)
        if weight.fzzt is not None:
            f = weight.fzzt
            base = mp.mpf(f.z) ** 2 - 2 * r
            if base <= 0:
                raise ValueError("FZZT weight requires z^2 > 2r")
            val += mp.exp(-f.s0) * double_factorial(2 * order - 1) * base ** (-order - mp.mpf(1) / 2)
        return val


def solve_R(weight: Weight, tol: float = 1e-12, max_iter: int = 64):
    """Damped Newton iteration for Z(R) = 0 started at the total mass."""
    with mpmath.workdps(DPS):
        r = mpmath.mpf(weight.total_mass())
        if weight.fzzt is not None:
            r = min(r, mpmath.mpf(weight.fzzt.z) ** 2 / 4)
        zr = string_function(weight, r)
        history = []
        for it in range(1, max_iter + 1):
            d = string_function(weight, r, 1)
            if d == 0:
                break
            step = zr / d
            lam = mpmath.mpf(1)
            for _ in range(40):
                cand = r - lam * step
                try:
                    zc = string_function(weight, cand)
                except ValueError:
                    zc = None
                if zc is not None and abs(zc) <= abs(zr):
                    break
                lam /= 2
            else:
                break
            r, zr = cand, zc
            history.append(float(abs(zr)))
            if abs(zr) <= mpmath.mpf(10) ** (-DPS + 8) or abs(lam * step) <= mpmath.mpf(10) ** (-DPS + 5) * max(1, abs(r)):
                return r, zr, it
        diag = {"iterations": len(history), "last_R": float(r), "residual": float(abs(zr)),
                "history": history[-5:]}
        if abs(zr) <= tol:
            return r, zr, len(history)
        z0 = string_function(weight, 0)
        if z0 < 0:
            # Z(0) < 0: a root needs Z to cross zero before its first maximum
            grid = [mpmath.mpf(i) / 1600 for i in range(401)]
            if weight.fzzt is not None:
                grid = [x for x in grid if 2 * x < mpmath.mpf(weight.fzzt.z) ** 2]
            peak = max(string_function(weight, x) for x in grid)
            if peak < 0:
                diag["max_Z"] = float(peak)
                raise ConvergenceError("string equation has no real root near 0: the weight "
                                       "exceeds the critical mass", diag)
        raise ConvergenceError("string equation did not converge", diag)


def _times_numeric(weight: Weight, K: int):
    mp = mpmath.mp
    out = []
    for k in range(K + 1):
        t = mp.mpf(0)
        for w, L2 in _atom_data(weight):
            t += w * 2 * L2 ** k / (4 ** k * mp.factorial(k))
        if weight.fzzt is not None:
            f = weight.fzzt
            t -= mp.exp(-f.s0) * 2 * mp.factorial(2 * k) / (4 ** k * mp.factorial(k) * mp.mpf(f.z) ** (2 * k + 1))
        out.append(t)
    return out


@dataclass
class MomentData:
    """Numeric moment data: R, M_k, t_k, beta_m, eta_p = M_p/(2p+1)!!."""

    weight: Weight
    R: object
    M: list
    t: list
    beta: list
    eta: list
    residual: object = 0
    iterations: int = 0
    _extra: dict = field(default_factory=dict, repr=False)

    def moment(self, k: int):
        if k < len(self.M):
            return self.M[k]
        if k not in self._extra:
            self._extra[k] = string_function(self.weight, self.R, k + 1)
        return self._extra[k]

    def eta_value(self, u):
        """eta(u) = sum_p M_p u^{2p} / (2p+1)!!, summed to convergence."""
        with mpmath.workdps(DPS):
            u2 = mpmath.mpf(u) ** 2
            total = mpmath.mpf(0)
            power = mpmath.mpf(1)
            small = 0
            for p in range(2000):
                term = self.moment(p) * power / double_factorial(2 * p + 1)
                total += term
                power *= u2
                if abs(term) < mpmath.mpf(10) ** (-DPS + 5) * max(1, abs(total)):
                    small += 1
                    if small >= 3 and p > 10:
                        return total
                else:
                    small = 0
            raise ConvergenceError("eta series did not converge", {"u": float(u)})

    def values(self) -> dict:
        """Symbol -> numeric value map for evaluating polynomials."""
        vals = {PI2: mpmath.pi ** 2, INV_M0: 1 / self.M[0]}
        for k, v in enumerate(self.M):
            vals[moment(k)] = v
            if k:
                vals[small_m(k)] = v / self.M[0]
        for m, v in enumerate(self.beta):
            vals[beta(m)] = v
        return vals

    def evaluate(self, poly: MPoly):
        """Numeric value of a polynomial in any basis (lengths excluded)."""
        with mpmath.workdps(DPS):
            need = [s for s in poly.symbols() if s.kind in (M, BETA, SMALLM)]
            top = max((s.index for s in need), default=0)
            if top >= len(self.M):
                self.extend(top)
            return poly.evaluate(self.values(), ctx=mpmath.mpf)

    def extend(self, K: int):
        with mpmath.workdps(DPS):
            while len(self.M) <= K:
                self.M.append(self.moment(len(self.M)))
            self.eta = [self.M[p] / double_factorial(2 * p + 1) for p in range(len(self.M))]
            self.beta = list(TruncSeries(self.eta, len(self.eta) - 1).recip().coeffs)
            self.t = _times_numeric(self.weight, len(self.M) - 1)

    def to_json(self) -> dict:
        return {"R": float(self.R), "M": [float(x) for x in self.M],
                "t": [float(x) for x in self.t], "beta": [float(x) for x in self.beta],
                "eta": [float(x) for x in self.eta],
                "diagnostics": {"residual": float(abs(self.residual)), "iterations": self.iterations}}


def moment_data(weight: Weight, K: int = 10) -> MomentData:
    """Solve for R and compute M_0..M_K, t_0..t_K, beta_0..beta_K numerically."""
    if K < 0:
        raise ValueError("K must be non-negative")
    with mpmath.workdps(DPS):
        if weight.is_zero:
            R, res, its = mpmath.mpf(0), mpmath.mpf(0), 0
        else:
            R, res, its = solve_R(weight)
        M = [string_function(weight, R, k + 1) for k in range(K + 1)]
        data = MomentData(weight, R, M, [], [], [], res, its)
        data.extend(K)
        return data


# formal mode ------------------------------------------------------------------

def _exact(x):
    if isinstance(x, MPoly):
        return x
    if isinstance(x, float):
        return const(Fraction(repr(x)))
    return const(x)


@dataclass
class FormalMomentData:
    """Exact truncated series in w for the weight w*mu."""

    order: int
    R: TruncSeries
    M: list
    t: list
    beta: list
    eta: list

    def values(self) -> dict:
        N = self.order

        def lift(p):
            return TruncSeries.constant(p, N, "w")

        vals = {PI2: lift(var(PI2)), INV_M0: self.M[0].recip()}
        for k, v in enumerate(self.M):
            vals[moment(k)] = v
            if k:
                vals[small_m(k)] = v * vals[INV_M0]
        for m, v in enumerate(self.beta):
            vals[beta(m)] = v
        return vals

    def evaluate(self, poly: MPoly) -> TruncSeries:
        """Series in w obtained by substituting the moment data into ``poly``.

        Length symbols stay symbolic inside the coefficients.
        """
        vals = self.values()
        N = self.order

        def value(s):
            if s in vals:
                return vals[s]
            if s.kind in (M, BETA, SMALLM, INVM0):
                raise KeyError(f"no formal value for {s.name}; raise K")
            return TruncSeries.constant(var(s), N, "w")

        out = poly.map_eval(value, one=TruncSeries.constant(const(1), N, "w"),
                            zero=TruncSeries.constant(MPoly(), N, "w"))
        return out


def formal_moment_data(atoms, order: int, K: int = 10, fzzt: FZZT | None = None) -> FormalMomentData:
    """Formal moments for w * sum_a c_a delta(L_a).

    ``atoms`` is a list of (c_a, L_a^2) with exact entries (rationals or
    polynomials, e.g. ``var(b(5))`` for a symbolic length).  Floats are read
    as the decimal they print as.  FZZT parameters enter as exact rationals
    of their float values.
    """
    N = order
    if N < 0:
        raise ValueError("formal order must be non-negative")
    atoms = [(_exact(c), _exact(L2)) for c, L2 in atoms]
    q = var(PI2)

    def series(cs):
        return TruncSeries(cs, N, "w")

    def zero():
        return series([MPoly()])

    jmax = N + K + 2
    # phi_j: coefficient of r^j in int dmu I_0(L sqrt(2r)), exact
    phi = []
    for j in range(jmax + 1):
        acc = MPoly()
        for c, L2 in atoms:
            acc = acc + c * L2 ** j * mpq(1, 2 ** j * math.factorial(j) ** 2)
        if fzzt is not None:
            e = _exact(Fraction(math.exp(-fzzt.s0)))
            zz = Fraction(fzzt.z)
            # int -e^{-s0} e^{-zL} L^{2j} dL = -e^{-s0} (2j)!/z^{2j+1}
            acc = acc - e * mpq(math.factorial(2 * j), 2 ** j * math.factorial(j) ** 2) \
                * mpq(zz.denominator ** (2 * j + 1), zz.numerator ** (2 * j + 1))
        phi.append(acc)
    # Z_J(r) = sum_j zj[j] r^{j+1}
    zj = [q ** j * mpq((-2) ** j, math.factorial(j) * math.factorial(j + 1)) for j in range(jmax + 1)]

    # R = w*Phi(R) - sum_{j>=1} zj[j] R^{j+1}, iterated to order N
    R = zero()
    for _ in range(N + 1):
        powers = [series([const(1)])]
        for _ in range(N + 1):
            powers.append(powers[-1] * R)
        wphi = zero()
        for j in range(N + 1):
            wphi = wphi + powers[j] * phi[j]
        wphi = series([MPoly()] + wphi.coeffs[:N])
        corr = zero()
        for j in range(1, N + 1):
            corr = corr + powers[j + 1] * zj[j]
        R = wphi - corr
    powers = [series([const(1)])]
    for _ in range(N + 1):
        powers.append(powers[-1] * R)

    M = []
    for k in range(K + 1):
        # Z_J^{(k+1)} = sum_{j>=k} (-2q)^j R^{j-k} / (j! (j-k)!)
        acc = zero()
        for i in range(0, N + 1):
            j = k + i
            acc = acc + powers[i] * (q ** j * mpq((-2) ** j, math.factorial(j) * math.factorial(i)))
        # w * Phi^{(k+1)}(R) = w * sum_{j>=k+1} phi_j j!/(j-k-1)! R^{j-k-1}
        acc2 = zero()
        for i in range(0, N + 1):
            j = k + 1 + i
            acc2 = acc2 + powers[i] * (phi[j] * mpq(math.factorial(j), math.factorial(i)))
        acc2 = series([MPoly()] + acc2.coeffs[:N])
        M.append(acc - acc2)

    t = []
    for k in range(K + 1):
        acc = MPoly()
        for c, L2 in atoms:
            acc = acc + c * L2 ** k * mpq(2, 4 ** k * math.factorial(k))
        if fzzt is not None:
            e = _exact(Fraction(math.exp(-fzzt.s0)))
            zz = Fraction(fzzt.z)
            acc = acc - e * mpq(2 * math.factorial(2 * k), 4 ** k * math.factorial(k)) \
                * mpq(zz.denominator ** (2 * k + 1), zz.numerator ** (2 * k + 1))
        t.append(series([MPoly(), acc]))

    eta = [M[p] * mpq(1, double_factorial(2 * p + 1)) for p in range(K + 1)]
    bet = list(TruncSeries(eta, K).recip().coeffs)
    return FormalMomentData(N, R, M, t, bet, eta)


def moments(weight: Weight, K: int = 10, mode="numeric"):
    """Dispatch on mode: 'numeric' or ('formal', N) / {'formal': N}."""
    if mode == "numeric":
        return moment_data(weight, K)
    if isinstance(mode, dict) and "formal" in mode:
        N = int(mode["formal"])
    elif isinstance(mode, tuple) and mode and mode[0] == "formal":
        N = int(mode[1])
    else:
        raise ValueError(f"unknown mode {mode!r}")
    atoms = [(a.weight, exact_length_sq(a)) for a in weight.atoms]
    return formal_moment_data(atoms, N, K, weight.fzzt)


def _dec(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(repr(x)) if isinstance(x, float) else Fraction(x)


def exact_length_sq(a: Atom) -> Fraction:
    """L^2 of an atom as an exact rational (floats read as printed)."""
    if a.kind == "geodesic":
        return _dec(a.length) ** 2
    if a.kind == "cone":
        return -_dec(a.angle) ** 2
    return Fraction(0)


# free energies and correlators ------------------------------------------------

def free_energy(g: int, weight: Weight, data: MomentData | None = None):
    """F_0 = 1/2 int_0^R Z^2 dr, F_1 = -log(M_0)/24, F_g = M_0^{2-2g} P_{g,0}(m)."""
    from .nrecursion import free_energy_poly
    if g < 0:
        raise ValueError("genus must be non-negative")
    with mpmath.workdps(DPS):
        if data is None:
            data = moment_data(weight, max(3 * g - 3, 1))
        if g == 0:
            return mpmath.quad(lambda r: string_function(weight, r) ** 2, [0, data.R]) / 2
        if g == 1:
            return -mpmath.log(data.M[0]) / 24
        P = free_energy_poly(g).poly
        return data.M[0] ** (2 - 2 * g) * data.evaluate(P)


def disk_function(data: MomentData, z):
    """W_{0,1}(z) = -int_0^R z (z^2 - 2r)^{-3/2} Z(r) dr by quadrature."""
    with mpmath.workdps(DPS):
        z = mpmath.mpf(z)
        if z ** 2 <= 2 * max(data.R, 0):
            raise ValueError("need z^2 > 2R")
        f = lambda r: z * (z ** 2 - 2 * r) ** (-mpmath.mpf(3) / 2) * string_function(data.weight, r)
        return -mpmath.quad(f, [0, data.R])


def _measure_cosh(weight: Weight, z):
    mp = mpmath.mp
    total = mp.mpf(0)
    for a in weight.atoms:
        w = mp.mpf(float(a.weight))
        if a.kind == "geodesic":
            total += w * mp.cosh(mp.mpf(float(a.length)) * z)
        elif a.kind == "cone":
            total += w * mp.cos(mp.mpf(float(a.angle)) * z)
        else:
            total += w
    if weight.fzzt is not None:
        f = weight.fzzt
        if not f.z > abs(z):
            raise ValueError("FZZT cosh moment needs z_brane > |z|")
        total -= mp.exp(-f.s0) * f.z / (mp.mpf(f.z) ** 2 - z ** 2)
    return total


def disk_function_eta(data: MomentData, z):
    """-z x eta(x) + z sin(2 pi z)/(2 pi) - int dmu cosh(L z), x = sqrt(z^2 - 2R).

    Valid for 4|R| < |z|^2.
    """
    with mpmath.workdps(DPS):
        z = mpmath.mpf(z)
        if not 4 * abs(data.R) < z ** 2:
            raise ValueError("identity only valid for 4|R| < |z|^2")
        x = mpmath.sqrt(z ** 2 - 2 * data.R)
        return (-z * x * data.eta_value(x) + z * mpmath.sin(2 * mpmath.pi * z) / (2 * mpmath.pi)
                - _measure_cosh(data.weight, z))


def cylinder_function(data: MomentData, z1, z2):
    """W_{0,2} in closed form, with the (z1 - z2)^{-2} subtraction."""
    with mpmath.workdps(DPS):
        z1, z2 = mpmath.mpf(z1), mpmath.mpf(z2)
        x1 = mpmath.sqrt(z1 ** 2 - 2 * data.R)
        x2 = mpmath.sqrt(z2 ** 2 - 2 * data.R)
        return z1 * z2 / (x1 * x2) / (x1 - x2) ** 2 - 1 / (z1 - z2) ** 2


def regular_correlator(g: int, n: int, data: MomentData, zs):
    """W_{g,n}(z) = omega_{g,n}(x) prod z_i / x_i with x_i = sqrt(z_i^2 - 2R)."""
    from .correlators import omega
    zs = list(zs)
    if len(zs) != n:
        raise ValueError(f"expected {n} points, got {len(zs)}")
    if (g, n) == (0, 1):
        return disk_function(data, zs[0])
    if (g, n) == (0, 2):
        return cylinder_function(data, *zs)
    with mpmath.workdps(DPS):
        w = omega(g, n, "beta").poly
        xs = [mpmath.sqrt(mpmath.mpf(z) ** 2 - 2 * data.R) for z in zs]
        need = max((s.index for s in w.symbols() if s.kind == BETA), default=0)
        data.extend(need)
        vals = data.values()
        for i, x in enumerate(xs, start=1):
            vals[zinv(i)] = x ** -2
        val = w.evaluate(vals, ctx=mpmath.mpf)
        for z, x in zip(zs, xs):
            val *= mpmath.mpf(z) / x
        return val


__all__ = ["Atom", "FZZT", "Weight", "delta", "string_function", "solve_R", "MomentData",
           "moment_data", "FormalMomentData", "formal_moment_data", "moments", "free_energy",
           "disk_function", "disk_function_eta", "cylinder_function", "regular_correlator",
           "ConvergenceError", "exact_length_sq"]
