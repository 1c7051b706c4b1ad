from fractions import Fraction

import pytest

from tightwp.nrecursion import (compare_with_printed, free_energy_poly, normalized_volume,
                                printed_reference, string_dilaton_check, tight_volume_nrec,
                                vacuum_tight, weight_homogeneous)
from tightwp.ring import PI2, b, const, small_m, var
from tightwp.volumes import specialize_wp, tight_volume_moments, wp_volume


def m(k):
    return var(small_m(k))


def test_seeds():
    assert normalized_volume(0, 3).poly == const(1)
    assert normalized_volume(1, 1).poly == (var(b(1)) / 2 - m(1)) / 24


def test_p04_p05_as_printed():
    ref = printed_reference()
    assert normalized_volume(0, 4).poly == ref[(0, 4)]
    assert normalized_volume(0, 5).poly == ref[(0, 5)]


def test_p12_resolution():
    # recursion gives -m2/24 where the printed table has -m2^2/24
    computed = normalized_volume(1, 2).poly
    assert computed - printed_reference()[(1, 2)] == m(2) ** 2 / 24 - m(2) / 24


def test_printed_report_flags_inhomogeneous_entry():
    rows = {(r["g"], r["n"]): r for r in compare_with_printed()}
    assert rows[(0, 4)]["matches"] and rows[(0, 5)]["matches"]
    assert not rows[(1, 2)]["matches"]
    assert not rows[(1, 2)]["printed_homogeneous"]
    assert rows[(1, 2)]["difference"] == "m2^2/24 - m2/24"


@pytest.mark.parametrize("g,n", [(0, 4), (0, 6), (1, 3), (2, 0), (2, 2), (3, 0), (3, 1)])
def test_weight_homogeneous(g, n):
    assert weight_homogeneous(normalized_volume(g, n))


@pytest.mark.parametrize("g,n", [(0, 5), (1, 2), (1, 4), (2, 1), (2, 3), (3, 2)])
def test_agrees_with_kernel_path(g, n):
    assert tight_volume_nrec(g, n).poly == tight_volume_moments(g, n).poly


@pytest.mark.parametrize("g,n", [(1, 3), (2, 2), (3, 1)])
def test_specializes_to_wp(g, n):
    assert specialize_wp(normalized_volume(g, n).poly) == wp_volume(g, n).poly


def test_p20_from_intersections():
    expected = (-m(1) ** 3 * Fraction(7, 1440) + m(1) * m(2) * Fraction(29, 5760)
                - m(3) * Fraction(1, 1152))
    assert free_energy_poly(2).poly == expected
    assert specialize_wp(expected) == var(PI2, 3) * Fraction(43, 2160)


def test_vacuum_requires_genus_two():
    with pytest.raises(ValueError):
        vacuum_tight(1)
    with pytest.raises(ValueError):
        free_energy_poly(1)


@pytest.mark.parametrize("g,n", [(0, 4), (0, 5), (0, 6), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1)])
def test_string_dilaton(g, n):
    r = string_dilaton_check(g, n)
    assert r["string"] and r["dilaton"]


@pytest.mark.parametrize("g,n", [(0, 3), (1, 1), (0, 0), (2, 0)])
def test_string_dilaton_range(g, n):
    with pytest.raises(ValueError):
        string_dilaton_check(g, n)
