import math

import pytest
from hypothesis import given, strategies as st

from qfp.classical import (
    baseline,
    classical_bits,
    classical_bound_bits,
    holevo_rate,
    pie,
)
from qfp.errors import DomainError
from qfp.numerics import thermal_entropy


class TestClassicalBits:
    def test_reference_instance(self):
        # 2 sqrt(2.2e8) * ceil(log2(1e5)/2) = 2 sqrt(2.2e8) * 9.
        n, eps = int(2.2e8), 1e-5
        expected = 2.0 * math.sqrt(n) * 9.0
        assert classical_bits(n, eps) == expected
        assert expected == pytest.approx(2.67e5, rel=2e-3)

    def test_sqrt_scaling(self):
        assert classical_bits(400, 1e-3) == 2.0 * classical_bits(100, 1e-3)

    def test_ceiling_steps(self):
        # The block count ceil(log2(1/eps)/2) is flat between powers of 4.
        assert classical_bits(100, 0.0626) == classical_bits(100, 0.0625)
        assert classical_bits(100, 0.06) > classical_bits(100, 0.25)

    def test_domain(self):
        with pytest.raises(DomainError):
            classical_bits(0, 1e-3)
        with pytest.raises(DomainError):
            classical_bits(10, 0.0)


class TestClassicalBoundBits:
    def test_reference_instance(self):
        n, eps = int(2.2e8), 1e-5
        expected = math.sqrt(n / (2.0 * math.log(2.0))) * (
            0.5 - math.sqrt(eps)
        ) - 0.5
        assert classical_bound_bits(n, eps) == expected
        assert expected == pytest.approx(6.26e3, rel=2e-3)

    def test_below_constructive(self):
        for n in (10**4, 10**6, 10**8):
            for eps in (1e-2, 1e-5, 1e-8):
                assert classical_bound_bits(n, eps) < classical_bits(n, eps)

    def test_clamped_at_zero(self):
        assert classical_bound_bits(1, 0.24) == 0.0

    @given(st.integers(min_value=100, max_value=10**9))
    def test_sqrt_growth(self, n):
        val = classical_bound_bits(n, 1e-4)
        ref = math.sqrt(n / (2.0 * math.log(2.0))) * (0.5 - 1e-2) - 0.5
        assert val == ref

    def test_domain(self):
        with pytest.raises(DomainError):
            classical_bound_bits(10, 0.25)


class TestHolevoRate:
    def test_increasing_in_bandwidth(self):
        rates = [holevo_rate(1.0, b, 1e-7) for b in (1e3, 1e6, 1e9)]
        assert rates[0] < rates[1] < rates[2]

    def test_wideband_supremum_is_pie(self):
        # The rate saturates at s * log2(1 + 1/nu) once B >> s/nu.
        s, nu = 1.0, 1e-7
        wide = holevo_rate(s, 1e13, nu)
        assert wide < s * pie(nu)
        assert wide == pytest.approx(s * pie(nu), rel=1e-4)
        narrower = holevo_rate(s, 1e9, nu)
        assert narrower < wide

    def test_noiseless_form(self):
        # g(0) = 0: the rate reduces to B g(s/B).
        assert holevo_rate(2.0, 8.0, 0.0) == pytest.approx(
            8.0 * thermal_entropy(0.25), rel=1e-12
        )

    def test_domain(self):
        with pytest.raises(DomainError):
            holevo_rate(0.0, 1.0, 1e-7)
        with pytest.raises(DomainError):
            holevo_rate(1.0, 1.0, -1e-9)


class TestPie:
    def test_reference_noise(self):
        assert pie(1e-7) == pytest.approx(23.2535, abs=5e-4)

    def test_finite_difference_of_capacity(self):
        # pie is the marginal capacity per signal photon at vanishing power.
        nu, b = 1e-5, 1.0
        h = 1e-9
        deriv = (
            holevo_rate(h, b, nu) / h
        )  # capacity is ~linear in s near zero
        assert deriv == pytest.approx(pie(nu), rel=1e-3)

    def test_decreasing_in_noise(self):
        assert pie(1e-8) > pie(1e-7) > pie(1e-3)

    def test_domain(self):
        with pytest.raises(DomainError):
            pie(0.0)


class TestBaseline:
    def test_reference_instance(self):
        # Large instance where the quantum advantage is pronounced.
        result = baseline(10**12, 1e-7, 1e-5)
        assert result.n_c == pytest.approx(7.74e5, rel=2e-3)
        assert result.n_b == pytest.approx(1.8147e4, rel=2e-3)

    def test_composition(self):
        n, nu, eps = 10**6, 1e-6, 1e-4
        result = baseline(n, nu, eps)
        assert result.i_c == classical_bits(n, eps)
        assert result.i_b == classical_bound_bits(n, eps)
        assert result.pie == pie(nu)
        assert result.n_c == pytest.approx(result.i_c / result.pie, rel=1e-14)
        assert result.n_b == pytest.approx(result.i_b / result.pie, rel=1e-14)

    def test_ordering(self):
        result = baseline(10**8, 1e-7, 1e-5)
        assert 0.0 < result.n_b < result.n_c
