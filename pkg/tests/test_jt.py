import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tightwp.checks import (SAMPLE_WEIGHT, glue_by_quadrature, tight_trumpet_by_half_tight,
                            z02_by_quadrature)
from tightwp.jt import (fzzt_partition, gauss_glue, jt_partition, length_coefficients,
                        tight_trumpet, trumpet, z02)
from tightwp.moments import FZZT, Atom, Weight, moment_data
from tightwp.volumes import wp_volume


def rel(a, c):
    return float(abs(a - c) / abs(c))


def test_constant_one_slot():
    for bt in (0.5, 1.0, 3.0):
        assert rel(gauss_glue({(0,): 1}, [bt]), mpmath.sqrt(bt / mpmath.pi)) < 1e-14


@pytest.mark.parametrize("k", range(7))
def test_moment_map_against_quadrature(k):
    bt = mpmath.mpf("0.8")
    quad = mpmath.quad(lambda K: K * trumpet(bt, K) * K ** (2 * k), [0, mpmath.inf])
    assert rel(gauss_glue({(k,): 1}, [bt]), quad) < 1e-12


@given(st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 4)),
                       st.floats(-5, 5, allow_nan=False), min_size=1, max_size=5),
       st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 4)),
                       st.floats(-5, 5, allow_nan=False), min_size=1, max_size=5),
       st.floats(0.1, 3), st.floats(0.1, 3), st.floats(-0.05, 0.05))
def test_linear_and_multiplicative(c1, c2, b1, b2, R):
    betas = [b1, b2]
    total = dict(c1)
    for k, v in c2.items():
        total[k] = total.get(k, 0) + v
    lhs = gauss_glue(total, betas, R)
    rhs = gauss_glue(c1, betas, R) + gauss_glue(c2, betas, R)
    assert abs(lhs - rhs) <= 1e-14 * (1 + abs(gauss_glue({k: abs(v) for k, v in total.items()}, betas, R)))
    # product of one-slot polynomials glues to the product of one-slot gluings
    (k1, _), (k2, _) = next(iter(c1)), next(iter(c2))
    prod = gauss_glue({(k1, k2): 1}, betas, R)
    assert rel(prod, gauss_glue({(k1,): 1}, [b1], R) * gauss_glue({(k2,): 1}, [b2], R)) < 1e-14


def test_z11_classical():
    for bt in (0.5, 1.0, 2.0):
        res = jt_partition(1, 1, [bt])
        exact = mpmath.sqrt(bt) * (bt + mpmath.pi ** 2) / (12 * mpmath.sqrt(mpmath.pi))
        assert rel(res.value, exact) < 1e-14
        assert res.prefactor_exponent == 1 and res.R == 0


@pytest.mark.parametrize("weight", [Weight(), SAMPLE_WEIGHT,
                                    Weight((Atom("cone", 0.01, angle=2 * mpmath.pi * 0.3),))])
def test_z11_against_quadrature(weight):
    for bt in (0.5, 1.0, 2.0):
        quad, data = glue_by_quadrature(1, 1, [bt], weight)
        assert rel(jt_partition(1, 1, [bt], weight).value, quad) < 1e-8


@pytest.mark.parametrize("weight", [Weight(), SAMPLE_WEIGHT])
def test_z02(weight):
    R = moment_data(weight, 1).R
    for b1, b2 in [(0.5, 1.0), (1.0, 2.0), (2.0, 2.0)]:
        assert rel(jt_partition(0, 2, [b1, b2], weight).value, z02_by_quadrature(b1, b2, R)) < 1e-8
    assert rel(z02(1, 2), mpmath.sqrt(2) / (6 * mpmath.pi)) < 1e-14


@pytest.mark.parametrize("bt,K", [(0.5, 0.3), (1.0, 1.0), (2.0, 2.5)])
def test_tight_trumpet_from_half_tight(bt, K):
    R = moment_data(SAMPLE_WEIGHT, 1).R
    assert rel(tight_trumpet_by_half_tight(bt, K, R), tight_trumpet(bt, K, R)) < 1e-8


def test_permutation_symmetry():
    betas = [0.5, 1.3, 2.0]
    vals = {float(jt_partition(0, 3, p, SAMPLE_WEIGHT).value)
            for p in (betas, betas[::-1], [betas[1], betas[0], betas[2]])}
    assert max(vals) - min(vals) < 1e-14 * max(vals)
    a = jt_partition(1, 2, [0.7, 1.9], SAMPLE_WEIGHT).value
    c = jt_partition(1, 2, [1.9, 0.7], SAMPLE_WEIGHT).value
    assert rel(a, c) < 1e-14


def test_fzzt_limits():
    base = jt_partition(1, 1, [1.0]).value
    for s0, z in [(80.0, 2.0), (0.0, 1e15)]:
        res = fzzt_partition(1, 1, [1.0], s0, z)
        assert rel(res.value, base) < 1e-10
        assert res.diagnostics["residual"] <= 1e-12


def test_fzzt_finite():
    res = fzzt_partition(1, 1, [1.0], 1.0, 3.0)
    assert res.R < 0 and res.diagnostics["residual"] <= 1e-12


def test_length_coefficients_of_v11():
    coeffs = length_coefficients(wp_volume(1, 1).poly, 1)
    assert rel(coeffs[(1,)], mpmath.mpf(1) / 48) < 1e-14
    assert rel(coeffs[(0,)], mpmath.pi ** 2 / 12) < 1e-14


def test_errors():
    with pytest.raises(ValueError):
        jt_partition(1, 1, [1.0, 2.0])
    with pytest.raises(ValueError):
        jt_partition(0, 1, [1.0])
    with pytest.raises(ValueError):
        gauss_glue({(0,): 1}, [-1.0])


def test_json():
    js = jt_partition(0, 3, [1, 1, 1], Weight((), FZZT(2.0, 3.0))).to_json()
    assert set(js) == {"value", "prefactor_exponent", "R", "diagnostics"}
    assert js["prefactor_exponent"] == 1
