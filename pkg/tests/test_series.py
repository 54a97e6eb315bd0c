import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from inchroot.errors import OrderCapError, ZeroDerivativeError
from inchroot.series import (
    compose_series,
    enumerate_partitions,
    faa_di_bruno,
    invert_series,
    reversion_coefficient,
)


def brute_partition_count(n):
    # count multiplicity vectors with sum i * s_i = n by direct search
    count = 0
    for s in itertools.product(*(range(n // i + 1) for i in range(1, n + 1))):
        if sum(i * si for i, si in enumerate(s, start=1)) == n:
            count += 1
    return count


def test_partitions_small():
    assert enumerate_partitions(1) == [(1,)]
    assert enumerate_partitions(2) == [(2,), (0, 1)]
    assert len(enumerate_partitions(4)) == 5


@pytest.mark.parametrize("n", range(1, 13))
def test_partition_counts_match_brute_force(n):
    parts = enumerate_partitions(n)
    assert len(parts) == brute_partition_count(n)
    assert len(set(parts)) == len(parts)
    for p in parts:
        assert sum(i * s for i, s in enumerate(p, start=1)) == n
        assert p[-1] != 0


def test_partitions_zero_and_negative():
    assert enumerate_partitions(0) == [()]
    with pytest.raises(ValueError):
        enumerate_partitions(-1)


def test_closed_forms_low_orders():
    a = [Fraction(3), Fraction(-2), Fraction(5)]
    A = invert_series(a)
    assert A[0] == Fraction(1, 3)
    assert A[1] == -a[1] / a[0] ** 3
    assert A[2] == (2 * a[1] ** 2 - a[0] * a[2]) / a[0] ** 5


def test_hardcoded_and_general_paths_agree_exactly():
    a = [Fraction(v) for v in (2, 7, -1, 4, 3, -5)]
    assert invert_series(a) == invert_series(a, hardcoded=False)


def test_linear_series():
    assert invert_series([2.0]) == [0.5]


def test_all_ones_alternates():
    assert invert_series([1, 1, 1, 1, 1]) == [1, -1, 1, -1, 1]


def test_quadratic_forward_gives_signed_catalan():
    assert invert_series([1, 1, 0, 0, 0]) == [1, -1, 2, -5, 14]


def test_zero_leading_coefficient():
    with pytest.raises(ZeroDerivativeError):
        invert_series([0.0, 1.0])


def test_order_cap():
    with pytest.raises(OrderCapError):
        invert_series([1.0] * 17)
    assert len(invert_series([1.0] * 17, max_order=17)) == 17


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        invert_series([1.0, math.nan])
    with pytest.raises(ValueError):
        invert_series([])


def test_reversion_coefficient_matches_list():
    a = [1.5, 0.25, -0.75, 2.0]
    assert reversion_coefficient(4, a) == pytest.approx(invert_series(a)[3], rel=1e-14)


coef = st.floats(min_value=-3, max_value=3, allow_nan=False)
lead = st.floats(min_value=0.3, max_value=3) | st.floats(min_value=-3, max_value=-0.3)


@given(lead, st.lists(coef, min_size=0, max_size=7))
def test_composition_is_identity(a1, tail):
    a = [a1] + tail
    m = len(a)
    comp = compose_series(a, invert_series(a), m)
    assert comp[0] == pytest.approx(1.0, rel=1e-10)
    scale = max(1.0, max(abs(v) for v in a) / abs(a1)) ** m
    for c in comp[1:]:
        assert abs(c) <= 1e-10 * scale


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=6), st.integers(1, 5))
def test_composition_identity_exact_rationals(tail, a1):
    a = [Fraction(a1)] + [Fraction(v) for v in tail]
    comp = compose_series(invert_series(a), a, len(a))
    assert comp == [1] + [0] * (len(a) - 1)


def _fd(f, x, n, h):
    # n-th central finite difference
    return sum((-1) ** k * math.comb(n, k) * f(x + (n / 2 - k) * h) for k in range(n + 1)) / h**n


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@given(t=st.floats(min_value=-1.0, max_value=1.0))
def test_faa_di_bruno_vs_finite_differences(n, t):
    # f = exp, u = sin
    u = math.sin(t)
    outer = [math.exp(u)] * (n + 1)
    inner = [math.cos(t), -math.sin(t), -math.cos(t), math.sin(t)][:n]
    expected = _fd(lambda s: math.exp(math.sin(s)), t, n, 10 ** (-3 + 0.5 * (n > 2)))
    assert faa_di_bruno(n, outer, inner) == pytest.approx(expected, rel=1e-4, abs=1e-4)


def test_faa_di_bruno_order_zero_and_errors():
    assert faa_di_bruno(0, [3.0], []) == 3.0
    with pytest.raises(ValueError):
        faa_di_bruno(3, [1.0, 1.0], [1.0])
