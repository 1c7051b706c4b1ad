from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tightwp.ring import (INV_M0, PI2, LaurentSeries, MPoly, TruncSeries, _kernels, as_rational,
                          b, beta, const, from_id, laurent_residue, moment, parse_symbol,
                          residue_of_product, small_m, var, zinv)
from tightwp.ring import _pykernels
from tightwp.ring.mpoly import MAX_EXP, pack, unpack

from .strategies import SYMS, polys


# symbols -------------------------------------------------------------------

def test_symbol_ids_are_fixed():
    assert PI2.id == 0 and INV_M0.id == 1
    assert b(1).id == 2 + 5 + 0
    assert moment(0).id == 2 + 1
    assert small_m(1).id == 2 + 5 + 2
    assert beta(0).id == 2 + 3
    assert zinv(1).id == 2 + 5 + 4


@pytest.mark.parametrize("sym", SYMS + [zinv(3), INV_M0, beta(12)])
def test_symbol_round_trips(sym):
    assert from_id(sym.id) == sym
    assert parse_symbol(sym.name) == sym


@pytest.mark.parametrize("bad", [lambda: b(0), lambda: small_m(0), lambda: zinv(0), lambda: moment(-1)])
def test_invalid_indices(bad):
    with pytest.raises(ValueError):
        bad()


def test_parse_unknown_symbol():
    with pytest.raises(ValueError):
        parse_symbol("x1")


# coefficients ------------------------------------------------------------------

def test_as_rational_accepts_exact_inputs():
    assert as_rational(3) == 3
    assert as_rational(Fraction(2, 6)) == gmpy2.mpq(1, 3)
    assert as_rational("-5/10") == gmpy2.mpq(-1, 2)
    assert as_rational(gmpy2.mpz(7)) == 7


def test_as_rational_rejects_floats():
    with pytest.raises(TypeError):
        as_rational(0.5)


# packing -----------------------------------------------------------------------

@given(st.dictionaries(st.sampled_from(SYMS), st.integers(1, MAX_EXP), max_size=4))
def test_pack_unpack(exps):
    key = pack(exps)
    assert dict(unpack(key)) == {s.id: e for s, e in exps.items()}


def test_exponent_overflow_is_detected():
    x = var(b(1), MAX_EXP)
    with pytest.raises(OverflowError):
        x * var(b(1))
    with pytest.raises(OverflowError):
        pack({b(1): MAX_EXP + 1})


# ring axioms ---------------------------------------------------------------------

@given(polys(), polys(), polys())
def test_ring_axioms(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == MPoly()
    assert x * 1 == x and x * 0 == MPoly()


@given(polys(), st.integers(0, 4))
def test_power_matches_repeated_product(x, e):
    acc = const(1)
    for _ in range(e):
        acc = acc * x
    assert x ** e == acc


@given(polys(), polys())
def test_hash_consistent_with_equality(x, y):
    if x == y:
        assert hash(x) == hash(y)
    assert hash(x + y) == hash(y + x)


@given(polys(), polys())
def test_derivative_is_a_derivation(x, y):
    s = b(1)
    assert (x * y).diff(s) == x.diff(s) * y + x * y.diff(s)


@given(polys())
def test_integrate_even_then_differentiate(x):
    # d/db of int_0^L f(t) t dt = f / 2 when b = L^2
    assert x.integrate_even(2).diff(b(2)) * 2 == x


@given(polys(), polys())
def test_subs_is_a_homomorphism(x, y):
    sub = {b(1): var(b(2)) + 3, PI2: var(moment(2)) * gmpy2.mpq(1, 2)}
    assert (x * y).subs(sub) == x.subs(sub) * y.subs(sub)
    assert (x + y).subs(sub) == x.subs(sub) + y.subs(sub)


def test_subs_and_rename_are_simultaneous():
    p = var(b(1)) * 2 + var(b(2))
    swapped = p.rename({b(1): b(2), b(2): b(1)})
    assert swapped == var(b(2)) * 2 + var(b(1))
    assert p.subs({b(1): var(b(2)), b(2): var(b(1))}) == swapped
    assert p.subs({"b1": 1}) == 2 + var(b(2))


def test_unit_inverse_and_cancel():
    assert (var(moment(0), 3) * 2).inverse() == var(INV_M0, 3) / 2
    assert (var(moment(0)) * var(INV_M0) * 5 + 1).cancel_m0() == const(6)
    with pytest.raises(ValueError):
        (var(b(1)) + 1).inverse()


@given(polys())
def test_json_round_trip(x):
    assert MPoly.from_json(x.to_json()) == x


@given(polys())
def test_evaluate_matches_map_eval(x):
    vals = {s: Fraction(i + 2, 3) for i, s in enumerate(SYMS)}
    exact = x.map_eval(lambda s: vals[s], one=Fraction(1), zero=Fraction(0))
    assert x.evaluate(vals, ctx=Fraction) == exact


def test_rendering():
    v11 = var(b(1)) / 48 + var(PI2) / 12
    assert str(v11) == "L1^2/48 + pi^2/12"
    assert v11.latex() == "\\frac{L_1^2}{48} + \\frac{\\pi^2}{12}"
    assert str(MPoly()) == "0" and str(const(1)) == "1"
    assert str(var(small_m(1)) * -3 + var(INV_M0, 2)) == "M0^-2 - 3*m1"


@given(polys(), polys())
def test_compiled_and_python_kernels_agree(x, y):
    for name in _kernels.available_backends():
        _kernels.use_backend(name)
        prod = (x * y).raw
        total = (x + y).raw
        assert prod == _pykernels.mul_terms(x.raw, y.raw)
        assert total == _pykernels.add_terms(x.raw, y.raw)
    _kernels.use_backend("compiled" if "compiled" in _kernels.available_backends() else "python")


def test_compiled_backend_is_built():
    assert "compiled" in _kernels.available_backends()


# series --------------------------------------------------------------------------

@given(st.lists(polys(3), min_size=1, max_size=6))
def test_series_reciprocal(cs):
    N = 6
    s = TruncSeries([const(1)] + cs, N)
    one = TruncSeries.constant(const(1), N)
    assert s * s.recip() == one
    assert (s * s) / s == s.truncate(N)


def test_series_scalar_ring():
    # 1/(1 - u) = 1 + u + u^2 + ...
    s = TruncSeries([Fraction(1), Fraction(-1)], 5)
    assert s.recip().coeffs == [1] * 6
    assert (s ** 3)[3] == -1 and (s ** 3)[4] == 0


def test_series_rejects_mismatched_orders():
    with pytest.raises(ValueError):
        TruncSeries([1, 1], 3) + TruncSeries([1], 4, var="w")


def test_laurent_residue():
    # (1/u + 2 + u)(3/u^2 + u): only u * 3/u^2 lands on u^-1
    a = LaurentSeries.from_terms({-1: Fraction(1), 0: Fraction(2), 1: Fraction(1)}, 2)
    c = LaurentSeries.from_terms({-2: Fraction(3), 1: Fraction(1)}, 2)
    assert residue_of_product(a, c) == 3
    assert laurent_residue(a * c) == 3
