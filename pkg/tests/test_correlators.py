from math import factorial

import mpmath
import pytest

from tightwp.correlators import (CorrelatorLaurent, T_from_omega, omega, omega_from_T,
                                 tight_volume_residue)
from tightwp.moments import (cylinder_function, delta, disk_function, moment_data,
                             regular_correlator)
from tightwp.ring import PI2, b, beta, var, zinv
from tightwp.volumes import tight_volume, wp_volume


def test_omega03():
    assert omega(0, 3).poly == var(beta(0)) * var(zinv(1)) * var(zinv(2)) * var(zinv(3))


def test_omega11():
    # T_{1,1} = L^2 beta0/48 + beta1/8  ->  3! beta0/48 z^-4 + beta1/8 z^-2
    w = omega(1, 1).poly
    assert w == var(beta(0)) * var(zinv(1), 2) / 8 + var(beta(1)) * var(zinv(1)) / 8


@pytest.mark.parametrize("g,n", [(0, 4), (0, 5), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1)])
def test_residue_path_equals_kernel_path(g, n):
    assert tight_volume_residue(g, n).poly == tight_volume(g, n).poly


@pytest.mark.parametrize("g,n", [(0, 4), (1, 2), (2, 1)])
def test_wp_basis_omega(g, n):
    assert omega(g, n, "wp").poly == omega_from_T(wp_volume(g, n)).poly


@pytest.mark.parametrize("g,n", [(0, 5), (1, 3)])
def test_laplace_round_trip(g, n):
    T = tight_volume(g, n)
    assert T_from_omega(omega_from_T(T)).poly == T.poly


def test_json_round_trip_and_table():
    w = omega(1, 2)
    again = CorrelatorLaurent.from_json(w.to_json())
    assert again.poly == w.poly
    # total pole order: sum k_i <= 3g - 3 + n
    assert all(len(k) == 2 and min(k) >= 0 and sum(k) <= 2 for k in w.table())
    assert sum(len(c) for c in w.table().values()) == len(w.poly)


def test_omega_symmetric():
    p = omega(0, 5).poly
    assert p.rename({zinv(1): zinv(4), zinv(4): zinv(1)}) == p


def test_unstable_correlator():
    with pytest.raises(ValueError):
        omega(0, 2)


# Laplace-transform oracle for the regular correlators --------------------------
#
# W_{g,n}(z) = sum_p w^p/p! int prod L_i e^{-z_i L_i} V_{g,n+p}(L, K, .., K) dL
# for the weight w * delta_K; every V is an explicit polynomial so the
# transform is sum of (2k+1)!/z^{2k+2}.

W, K = 1e-4, 0.7
PMAX = 5


def _laplace(poly, n, zs):
    total = mpmath.mpf(0)
    subs = {b(j): K ** 2 for j in range(n + 1, n + PMAX + 1)}
    subs[PI2] = mpmath.pi ** 2
    for exps, c in poly.terms():
        term = mpmath.mpf(int(c.numerator)) / int(c.denominator)
        ks = [0] * n
        for s, e in exps.items():
            if s.kind == "B" and s.index <= n:
                ks[s.index - 1] = e
            else:
                term *= mpmath.mpf(subs[s]) ** e
        for k, z in zip(ks, zs):
            term *= factorial(2 * k + 1) / mpmath.mpf(z) ** (2 * k + 2)
        total += term
    return total


def _series(g, n, zs, pmin=0):
    with mpmath.workdps(40):
        total = mpmath.mpf(0)
        for p in range(pmin, PMAX + 1):
            if 2 * g - 2 + n + p <= 0:
                continue
            total += mpmath.mpf(W) ** p / factorial(p) * _laplace(wp_volume(g, n + p).poly, n, zs)
        return total


@pytest.fixture(scope="module")
def data():
    return moment_data(delta(K, W), 6)


@pytest.mark.parametrize("g,n,zs", [(1, 1, [1.3]), (0, 3, [1.1, 1.7, 2.5]), (1, 2, [1.2, 2.0]),
                                    (2, 1, [1.5])])
def test_regular_correlator_matches_volume_series(data, g, n, zs):
    got = regular_correlator(g, n, data, zs)
    assert float(abs(got / _series(g, n, zs) - 1)) < 1e-11


def test_cylinder_matches_volume_series(data):
    got = cylinder_function(data, 1.4, 2.2)
    assert float(abs(got / _series(0, 2, [1.4, 2.2], pmin=1) - 1)) < 1e-11


def test_disk_matches_volume_series(data):
    got = disk_function(data, 1.6)
    assert float(abs(got / _series(0, 1, [1.6], pmin=2) - 1)) < 1e-11
