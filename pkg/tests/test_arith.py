import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dirichlet_hardy.arith import (
    average_order_constant,
    average_order_factor,
    binomial_series_coefficient,
    divisor_function,
    divisor_sieve,
    divisor_weight,
    divisor_weight_prime_power,
    divisor_weight_sum,
    euler_product,
    factorize,
    omega_class_counts,
    omega_sieve,
    pseudomoment_leading_factor,
    pseudomoment_ratio_bounds,
    sieve_primes,
)
from dirichlet_hardy.errors import SieveLimitError


def trial_division_primes(limit):
    out = []
    for n in range(2, limit + 1):
        if all(n % d for d in range(2, math.isqrt(n) + 1)):
            out.append(n)
    return out


_HYP_TABLE = sieve_primes(2000)  # shared by hypothesis cases; fixtures do not mix with @given


class TestSieve:
    def test_small(self):
        assert sieve_primes(10).primes.tolist() == [2, 3, 5, 7]

    def test_boundary(self):
        assert sieve_primes(2).primes.tolist() == [2]

    def test_against_trial_division(self):
        table = sieve_primes(100)
        assert table.primes.tolist() == trial_division_primes(100)
        assert table.prime_count == 25

    def test_invariants(self):
        table = sieve_primes(500)
        prs = table.primes.tolist()
        assert prs == sorted(set(prs))
        assert prs == trial_division_primes(500)
        for p in prs:
            assert table.smallest_factor[p] == p
        # least factor really is least
        for n in range(2, 501):
            spf = int(table.smallest_factor[n])
            assert n % spf == 0
            assert all(n % d for d in range(2, spf))

    def test_limit_too_small(self):
        with pytest.raises(ValueError):
            sieve_primes(1)

    def test_prime_lookup(self):
        table = sieve_primes(100)
        assert table.prime(1) == 2
        assert table.prime(25) == 97
        assert table.prime_index(97) == 25
        with pytest.raises(ValueError):
            table.prime_index(98)


class TestFactorize:
    def test_360(self, table_2k):
        f = factorize(360, table_2k)
        assert f.factors == ((2, 3), (3, 2), (5, 1))
        assert (f.big_omega, f.small_omega, f.mobius) == (6, 3, 0)
        assert f.kappa == (3, 2, 1)

    def test_squarefree(self, table_2k):
        f = factorize(30, table_2k)
        assert f.factors == ((2, 1), (3, 1), (5, 1))
        assert f.mobius == -1

    def test_one(self, table_2k):
        f = factorize(1, table_2k)
        assert f.factors == ()
        assert (f.big_omega, f.mobius) == (0, 1)
        assert f.kappa == ()

    def test_beyond_limit(self, table_2k):
        with pytest.raises(SieveLimitError):
            factorize(2001, table_2k)

    @given(st.integers(min_value=1, max_value=2000))
    @settings(max_examples=80, deadline=None)
    def test_roundtrip(self, n):
        table = _HYP_TABLE
        f = factorize(n, table)
        prod = 1
        for p, e in f.factors:
            prod *= p**e
        assert prod == n
        assert f.big_omega == sum(e for _, e in f.factors)
        assert f.small_omega == len(f.factors)
        rebuilt = 1
        for j, e in enumerate(f.kappa, start=1):
            rebuilt *= table.prime(j) ** e
        assert rebuilt == n
        if f.kappa:
            assert f.kappa[-1] > 0


class TestBinomialSeries:
    def test_alpha_one(self):
        for j in range(20):
            assert binomial_series_coefficient(j, 1.0) == 1.0

    def test_integer(self):
        assert binomial_series_coefficient(2, 3.0) == 6.0
        assert binomial_series_coefficient(5, 2.0) == 6.0

    def test_half(self):
        assert binomial_series_coefficient(1, 0.5) == 0.5

    def test_rejects_nonpositive_alpha(self):
        with pytest.raises(ValueError):
            binomial_series_coefficient(3, 0.0)
        with pytest.raises(ValueError):
            binomial_series_coefficient(3, -1.0)

    @pytest.mark.parametrize("alpha", [1.25, 2.0, 3.5])
    def test_submultiplicative(self, alpha):
        c = [binomial_series_coefficient(j, alpha) for j in range(101)]
        for j in range(0, 51, 5):
            for k in range(0, 51, 5):
                assert c[j + k] <= c[j] * c[k] * (1 + 1e-12)

    @pytest.mark.parametrize("alpha,k", [(1.0, 2), (1.0, 3), (2.0, 2), (2.0, 3)])
    def test_composition_identity(self, alpha, k):
        # c_{alpha k}(j) equals the k-fold convolution of c_alpha at j
        for j in range(11):
            total = 0.0
            stack = [(j, k, 1.0)]
            while stack:
                rem, parts, acc = stack.pop()
                if parts == 1:
                    total += acc * binomial_series_coefficient(rem, alpha)
                    continue
                for first in range(rem + 1):
                    stack.append(
                        (rem - first, parts - 1, acc * binomial_series_coefficient(first, alpha))
                    )
            assert total == pytest.approx(binomial_series_coefficient(j, alpha * k), rel=1e-12)


def ones_convolution_oracle(x, alpha):
    """d_alpha for integer alpha by repeated all-ones Dirichlet convolution."""
    out = np.zeros(x + 1, dtype=np.int64)
    out[1:] = 1
    for _ in range(alpha - 1):
        nxt = np.zeros(x + 1, dtype=np.int64)
        for d in range(1, x + 1):
            nxt[d::d] += out[1 : x // d + 1]
        out = nxt
    return out


class TestDivisorFunction:
    def test_examples(self, table_2k):
        assert divisor_function(12, 2.0, table_2k) == 6.0
        assert divisor_function(4, 0.5, table_2k) == pytest.approx(3 / 8, rel=1e-15)
        for n in (1, 7, 360, 1024):
            assert divisor_function(n, 1.0, table_2k) == 1.0

    @pytest.mark.parametrize("alpha", [1, 2, 3])
    def test_counts_ordered_tuples(self, alpha, table_100k):
        x = 100_000
        oracle = ones_convolution_oracle(x, alpha)
        sieved = divisor_sieve(x, alpha, table_100k)
        assert np.array_equal(oracle, sieved)
        rng = np.random.default_rng(0)
        for n in rng.integers(1, x + 1, size=200):
            assert divisor_function(int(n), float(alpha), table_100k) == oracle[n]


class TestDivisorWeight:
    def test_examples(self, table_2k):
        assert divisor_weight(12, 2.0, table_2k) == 6.0
        assert divisor_weight(2, 1.5, table_2k) == pytest.approx(1.5, rel=1e-15)
        assert divisor_weight(4, 1.5, table_2k) == pytest.approx(2.25, rel=1e-15)

    def test_rejects_alpha_below_one(self, table_2k):
        with pytest.raises(ValueError):
            divisor_weight(10, 0.9, table_2k)
        with pytest.raises(ValueError):
            divisor_weight_prime_power(2, 0.5)

    def test_matches_divisor_function_on_integers_and_squarefree(self, table_20k):
        rng = np.random.default_rng(1)
        for n in rng.integers(1, 20000, size=100):
            n = int(n)
            assert divisor_weight(n, 2.0, table_20k) == divisor_function(n, 2.0, table_20k)
            if factorize(n, table_20k).mobius != 0:
                assert divisor_weight(n, 1.7, table_20k) == pytest.approx(
                    divisor_function(n, 1.7, table_20k), rel=1e-12
                )

    def test_multiplicative_on_coprime_pairs(self, table_100k):
        rng = np.random.default_rng(2)
        alpha = 2.5
        pairs = 0
        while pairs < 60:
            m, n = int(rng.integers(2, 10000)), int(rng.integers(2, 10))
            if math.gcd(m, n) != 1:
                continue
            pairs += 1
            assert divisor_weight(m * n, alpha, table_100k) == pytest.approx(
                divisor_weight(m, alpha, table_100k) * divisor_weight(n, alpha, table_100k),
                rel=1e-12,
            )

    def test_prime_power_weight_consistency(self, table_2k):
        # the n = p^j weight equals the one-variable weight at j
        for alpha in (1.5, 2.25, 3.0):
            for j in range(5):
                assert divisor_weight(2**j, alpha, table_2k) == pytest.approx(
                    divisor_weight_prime_power(j, alpha), rel=1e-12
                )


class TestAverageOrderFactor:
    def test_at_zero(self):
        for alpha in (1.0, 1.5, 2.7):
            assert average_order_factor(0.0, alpha) == 1.0

    def test_integer_alpha_is_one(self):
        for x in (0.0, 0.3, 0.49):
            assert average_order_factor(x, 2.0) == 1.0

    def test_value(self):
        assert average_order_factor(0.5, 1.5) == pytest.approx(1.414214, abs=1e-6)

    def test_domain(self):
        with pytest.raises(ValueError):
            average_order_factor(2 / 3, 1.5)  # floor/alpha = 2/3
        with pytest.raises(ValueError):
            average_order_factor(-0.1, 1.5)

    @pytest.mark.parametrize("alpha", [1.3, 1.9, 2.4, 3.5])
    def test_monotone_in_alpha_and_bounded(self, alpha):
        for i in range(50):
            x = 0.5 * i / 49
            ga = average_order_factor(x, alpha)
            ga1 = average_order_factor(x, alpha + 1)
            assert ga1 <= ga + 1e-12
            bound = 16 * (alpha - 1) / (2 - alpha) ** 3 if alpha < 2 else 384.0
            assert 1 - 1e-12 <= ga <= 1 + x * x * bound + 1e-12


class TestEulerProduct:
    def test_zeta_two(self):
        result = euler_product(lambda p: 1 / (1 - p**-2), 10**5, 2.0, decay_constant=4 / 3)
        # bracket zeta(2) by partial sums plus the integral-test tail
        K = 10**6
        partial = math.fsum(n**-2 for n in range(1, K + 1))
        lo, hi = partial + 1 / (K + 1), partial + 1 / K
        assert result.value <= hi * math.exp(result.tail_bound)
        assert result.value >= lo * math.exp(-result.tail_bound)

    def test_trivial_product(self):
        result = euler_product(lambda p: 1.0, 1000, 2.0, decay_constant=0.0)
        assert result.value == 1.0
        assert result.tail_bound == 0.0

    def test_tail_decreases_with_limit(self):
        a = euler_product(lambda p: 1 / (1 - p**-2), 10**3, 2.0, decay_constant=4 / 3)
        b = euler_product(lambda p: 1 / (1 - p**-2), 10**4, 2.0, decay_constant=4 / 3)
        assert b.tail_bound < a.tail_bound

    def test_rejects_nonpositive_factor(self):
        with pytest.raises(ValueError):
            euler_product(lambda p: 0.0, 100, 2.0)

    def test_rejects_bad_params(self):
        with pytest.raises(ValueError):
            euler_product(lambda p: 1.0, 1, 2.0)
        with pytest.raises(ValueError):
            euler_product(lambda p: 1.0, 100, 1.0)


class TestPseudomomentConstants:
    def test_upper_exactly_one_at_k1(self):
        for limit in (100, 10_000, 100_000):
            upper, _ = pseudomoment_ratio_bounds(1.0, limit)
            assert upper.value == 1.0
            assert upper.tail_bound == 0.0

    def test_lower_at_k1(self):
        _, lower = pseudomoment_ratio_bounds(1.0, 100_000)
        assert 0 < lower.value < 1
        # Gamma(3)^(-1/2) fsum product over primes
        direct = math.fsum(
            math.log((1 - 1 / p) * math.sqrt(1 + 2 / p))
            for p in sieve_primes(100_000).primes.tolist()
        ) - 0.5 * math.log(2)
        assert lower.log_value == pytest.approx(direct, abs=1e-12)

    def test_order_and_stirling_window(self):
        upper, lower = pseudomoment_ratio_bounds(4.0, 10**5)
        assert lower.log_value <= upper.log_value
        # desk-scale check of the super-exponential decay
        assert upper.log_value <= -0.5 * 16 * math.log(4)

    def test_stirling_trend(self):
        # log(constant) / (k^2 log k) drifts toward -1 (upper) and -2 (lower)
        ratios = {}
        for k in (4.0, 8.0, 16.0):
            upper, lower = pseudomoment_ratio_bounds(k, 10**5)
            denom = k * k * math.log(k)
            ratios[k] = (upper.log_value / denom, lower.log_value / denom)
        assert abs(ratios[8.0][0] + 1) < abs(ratios[4.0][0] + 1)
        assert abs(ratios[16.0][0] + 1) < abs(ratios[8.0][0] + 1)
        assert abs(ratios[8.0][1] + 2) < abs(ratios[4.0][1] + 2)
        assert abs(ratios[16.0][1] + 2) < abs(ratios[8.0][1] + 2)

    def test_rejects_small_k(self):
        with pytest.raises(ValueError):
            pseudomoment_ratio_bounds(0.5, 1000)

    def test_leading_factor(self):
        one = pseudomoment_leading_factor(1, 10_000)
        assert one.value == pytest.approx(1.0, abs=1e-12)
        two = pseudomoment_leading_factor(2, 100_000)
        assert two.value == pytest.approx(6 / math.pi**2, abs=2 * two.tail_bound + 1e-9)


class TestOmegaCounts:
    def test_against_brute_force(self, table_2k):
        def brute_omega(n):
            count, d = 0, 2
            while d * d <= n:
                while n % d == 0:
                    count += 1
                    n //= d
                d += 1
            return count + (1 if n > 1 else 0)

        counts = omega_class_counts(100, table_2k)
        brute = [brute_omega(n) for n in range(1, 101)]
        for m in range(counts.size):
            assert counts[m] == sum(1 for b in brute if b == m)
        assert counts[1] == 25
        assert counts[2] == 34

    def test_partition(self, table_20k):
        for x in (1, 2, 100, 12345):
            counts = omega_class_counts(x, table_20k)
            assert counts.sum() == x
            assert counts[0] == 1

    def test_omega_sieve_matches_factorize(self, table_20k):
        om = omega_sieve(5000, table_20k)
        rng = np.random.default_rng(3)
        for n in rng.integers(1, 5001, size=100):
            assert om[n] == factorize(int(n), table_20k).big_omega


class TestDivisorWeightSum:
    @pytest.mark.parametrize("alpha", [1.5, 2.0, 2.7, 3.2])
    def test_matches_direct_sum(self, alpha, table_20k):
        x = 2000
        direct = math.fsum(divisor_weight(n, alpha, table_20k) for n in range(1, x + 1))
        assert divisor_weight_sum(x, alpha, table_20k) == pytest.approx(direct, rel=1e-12)

    def test_average_order_constant_value(self):
        # the alpha = 1.5 constant: independent high-precision partial product
        c = average_order_constant(1.5, 50_000)
        primes = sieve_primes(50_000).primes.tolist()
        direct = math.fsum(
            1.5 * math.log1p(-1 / p) - math.log1p(-1.5 / p) for p in primes
        )
        assert c.log_value == pytest.approx(direct, abs=1e-12)


def test_sieve_memory_cap(monkeypatch):
    from dirichlet_hardy.errors import ResourceLimitError

    monkeypatch.setenv("DIRICHLET_HARDY_MEMORY_CAP", "1000")
    with pytest.raises(ResourceLimitError):
        sieve_primes(10_000)


def test_ratio_bounds_fractional_k():
    upper, lower = pseudomoment_ratio_bounds(1.5, 50_000)
    assert lower.log_value <= upper.log_value
    assert math.isfinite(upper.value) and upper.value > 0
    # integer orders telescope, so the Gamma factor alone sets the scale there
    assert pseudomoment_ratio_bounds(3.0, 1000)[0].value == pytest.approx(
        math.gamma(4) ** -3.0, rel=1e-12
    )
