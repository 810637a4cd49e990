"""Multiplicative number-theory kernel.

Primes and least-factor sieve, factorizations with Bohr exponent vectors,
the binomial-series coefficients c_alpha(j), generalized divisor functions
d_alpha(n), the hybrid weight Phi_alpha(n) = d_floor(alpha)(n) * (alpha/floor(alpha))^Omega(n),
truncated Euler products with certified tail bounds, and counts of integers
by number of prime factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ResourceLimitError, SieveLimitError, memory_cap_bytes


@dataclass(frozen=True)
class PrimeTable:
    """Primes up to `limit` plus a least-prime-factor array for fast factoring.

    `smallest_factor[n]` is the least prime factor of n (0 for n=0, 1 for n=1).
    Immutable after construction; safe to share across threads.
    """

    limit: int
    primes: np.ndarray
    smallest_factor: np.ndarray

    @property
    def prime_count(self) -> int:
        return int(self.primes.size)

    def prime(self, j: int) -> int:
        """The j-th prime, 1-based: prime(1) == 2."""
        if j < 1 or j > self.primes.size:
            raise ValueError(f"prime index {j} out of range 1..{self.primes.size}")
        return int(self.primes[j - 1])

    def prime_index(self, p: int) -> int:
        """1-based index of the prime p in the table."""
        pos = int(np.searchsorted(self.primes, p))
        if pos >= self.primes.size or int(self.primes[pos]) != p:
            raise ValueError(f"{p} is not a prime in this table")
        return pos + 1

    def is_prime(self, n: int) -> bool:
        if n < 2 or n > self.limit:
            return False
        return int(self.smallest_factor[n]) == n


def sieve_primes(limit: int) -> PrimeTable:
    """Least-prime-factor sieve of Eratosthenes up to `limit` inclusive."""
    if limit < 2:
        raise ValueError(f"sieve limit must be >= 2, got {limit}")
    cap = memory_cap_bytes()
    if 4 * (limit + 1) > cap:
        raise ResourceLimitError(f"sieve of size {limit} needs {4 * (limit + 1)} bytes", cap)
    spf = np.zeros(limit + 1, dtype=np.int32)
    spf[1] = 1
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            seg = spf[p * p :: p]
            seg[seg == 0] = p
    # anything still unmarked (index >= 2) is prime
    idx = np.arange(limit + 1, dtype=np.int32)
    unmarked = (spf == 0) & (idx >= 2)
    spf[unmarked] = idx[unmarked]
    primes = np.nonzero((spf == idx) & (idx >= 2))[0].astype(np.int64)
    spf.flags.writeable = False
    primes.flags.writeable = False
    return PrimeTable(limit=limit, primes=primes, smallest_factor=spf)


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of n with the derived arithmetic data.

    kappa is the Bohr exponent vector: kappa[j-1] is the exponent of the j-th
    prime, truncated after the last nonzero entry (kappa(1) is the empty tuple).
    """

    n: int
    factors: tuple[tuple[int, int], ...]
    big_omega: int
    small_omega: int
    mobius: int
    kappa: tuple[int, ...]


def factorize(n: int, table: PrimeTable) -> Factorization:
    """Factor n using the least-prime-factor table."""
    if n < 1:
        raise ValueError(f"cannot factor {n}: need n >= 1")
    if n > table.limit:
        raise SieveLimitError(f"{n} exceeds sieve limit {table.limit}; re-sieve with a larger table")
    spf = table.smallest_factor
    factors: list[tuple[int, int]] = []
    m = n
    while m > 1:
        p = int(spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        factors.append((p, e))
    big_omega = sum(e for _, e in factors)
    small_omega = len(factors)
    mobius = 0 if any(e >= 2 for _, e in factors) else (-1) ** small_omega
    if factors:
        top = table.prime_index(factors[-1][0])
        kappa = [0] * top
        for p, e in factors:
            kappa[table.prime_index(p) - 1] = e
    else:
        kappa = []
    return Factorization(
        n=n,
        factors=tuple(factors),
        big_omega=big_omega,
        small_omega=small_omega,
        mobius=mobius,
        kappa=tuple(kappa),
    )


def binomial_series_coefficient(j: int, alpha: float) -> float:
    """c_alpha(j): the coefficient of z^j in (1-z)^(-alpha).

    Equals prod_{l=1..j} (alpha+l-1)/l; an exact binomial coefficient when
    alpha is a positive integer.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if j < 0:
        raise ValueError(f"j must be nonnegative, got {j}")
    if float(alpha).is_integer():
        return float(math.comb(j + int(alpha) - 1, j))
    value = 1.0
    for l in range(1, j + 1):
        value *= (alpha + l - 1) / l
    return value


def divisor_function(n: int, alpha: float, table: PrimeTable) -> float:
    """d_alpha(n): the multiplicative coefficients of the alpha-th zeta power.

    d_alpha(p^e) = c_alpha(e); for integer alpha this counts ordered
    alpha-tuples of positive integers with product n.
    """
    fac = factorize(n, table)
    value = 1.0
    for _, e in fac.factors:
        value *= binomial_series_coefficient(e, alpha)
    return value


def divisor_weight_prime_power(j: int, alpha: float) -> float:
    """The one-variable weight c_floor(alpha)(j) * (alpha/floor(alpha))^j, alpha >= 1."""
    if alpha < 1:
        raise ValueError(f"weight defined only for alpha >= 1, got {alpha}")
    m = math.floor(alpha)
    return binomial_series_coefficient(j, m) * (alpha / m) ** j


def divisor_weight(n: int, alpha: float, table: PrimeTable) -> float:
    """Phi_alpha(n) = d_floor(alpha)(n) * (alpha/floor(alpha))^Omega(n), alpha >= 1.

    Multiplicative; agrees with d_alpha(n) when alpha is an integer or n is
    square-free, and has the same average order as d_alpha in general.
    """
    if alpha < 1:
        raise ValueError(f"weight defined only for alpha >= 1, got {alpha}")
    fac = factorize(n, table)
    m = math.floor(alpha)
    value = (alpha / m) ** fac.big_omega
    for _, e in fac.factors:
        value *= binomial_series_coefficient(e, m)
    return value


def average_order_factor(x: float, alpha: float) -> float:
    """G_alpha(x) = (1-x)^alpha * (1 - (alpha/floor(alpha)) x)^(-floor(alpha)).

    The local factor whose Euler product over x=1/p gives the constant in the
    average order of Phi_alpha. Defined for 0 <= x < floor(alpha)/alpha; equal
    to 1 identically when alpha is an integer.
    """
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    m = math.floor(alpha)
    if not 0 <= x < m / alpha:
        raise ValueError(f"x={x} outside [0, {m / alpha})")
    if alpha == m:
        return 1.0
    return (1 - x) ** alpha * (1 - (alpha / m) * x) ** (-m)


@dataclass(frozen=True)
class EulerProductValue:
    """A truncated product over primes with a certified tail bound.

    tail_bound bounds |log(true/value)|. log_value is kept alongside value
    because products such as the large-k pseudomoment constants underflow
    double precision.
    """

    value: float
    log_value: float
    prime_limit: int
    tail_bound: float


def euler_product(
    local_factor: Callable[[int], float],
    prime_limit: int,
    tail_exponent: float,
    decay_constant: float = 1.0,
    table: PrimeTable | None = None,
) -> EulerProductValue:
    """prod_{p <= prime_limit} local_factor(p), accumulated in the log domain.

    The caller promises |log local_factor(p)| <= decay_constant * p^(-tail_exponent)
    for p > prime_limit; the tail bound then follows from the integral test:
    sum_{n > L} n^(-e) <= L^(1-e)/(e-1).
    """
    if prime_limit < 2:
        raise ValueError(f"prime_limit must be >= 2, got {prime_limit}")
    if tail_exponent <= 1:
        raise ValueError(f"tail_exponent must exceed 1, got {tail_exponent}")
    if decay_constant < 0:
        raise ValueError(f"decay_constant must be nonnegative, got {decay_constant}")
    if table is not None and table.limit >= prime_limit:
        primes = table.primes[table.primes <= prime_limit]
    else:
        primes = sieve_primes(prime_limit).primes
    logs = []
    for p in primes:
        v = local_factor(int(p))
        if not v > 0:
            raise ValueError(f"local factor at p={int(p)} is {v}; must be positive")
        logs.append(math.log(v))
    log_value = math.fsum(logs)
    if not math.isfinite(log_value):
        raise OverflowError("partial Euler product is not finite")
    tail = decay_constant * prime_limit ** (1 - tail_exponent) / (tail_exponent - 1)
    return EulerProductValue(
        value=math.exp(log_value), log_value=log_value, prime_limit=prime_limit, tail_bound=tail
    )


def average_order_constant(
    alpha: float, prime_limit: int = 100_000, table: PrimeTable | None = None
) -> EulerProductValue:
    """prod_p G_alpha(1/p): the constant in (1/x) sum_{n<=x} Phi_alpha(n) ~ C (log x)^(alpha-1) / Gamma(alpha).

    Well-defined since 1/p <= 1/2 < floor(alpha)/alpha for every alpha >= 1.
    """
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    if prime_limit < 3:
        raise ValueError("prime_limit must be >= 3")
    # |log G_alpha(x)| <= alpha * x^2 / (1 - 2x) for x <= 1/(L+1)
    decay = alpha / (1 - 2 / (prime_limit + 1))
    return euler_product(
        lambda p: average_order_factor(1 / p, alpha),
        prime_limit,
        tail_exponent=2.0,
        decay_constant=decay,
        table=table,
    )


def pseudomoment_ratio_bounds(
    k: float, prime_limit: int = 100_000, table: PrimeTable | None = None
) -> tuple[EulerProductValue, EulerProductValue]:
    """Asymptotic upper and lower constants bounding Psi_k(N) / (log N)^(k^2), k >= 1.

    upper = Gamma(k+1)^(-k) * prod_p (1-1/p)^(k^2) (1 - (k/floor(k)) / p)^(-k*floor(k))
    lower = Gamma(lk+1)^(-k/l) * prod_p (1-1/p)^(k^2) (1 + lk/p)^(k/l),  l = floor(2k)

    Both are limits as N grows, not finite-N brackets. For integer k the upper
    product telescopes to exactly 1 at every truncation.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    fk = math.floor(k)
    c = k / fk
    ksq = k * k

    if c == 1.0:

        def upper_local(p: int) -> float:
            # equal bases: combine the exponents k^2 and -k*floor(k) exactly
            return (1 - 1 / p) ** (ksq - k * fk)

        upper_decay = 0.0
    else:

        def upper_local(p: int) -> float:
            x = 1 / p
            return (1 - x) ** ksq * (1 - c * x) ** (-k * fk)

        # |log(1-x)+x| <= x^2/(2(1-x)); the linear terms cancel exactly
        L = prime_limit
        upper_decay = ksq / (2 * (1 - 1 / L)) + k * fk * c * c / (2 * (1 - c / L))

    upper_prod = euler_product(upper_local, prime_limit, 2.0, upper_decay, table=table)
    upper_log = upper_prod.log_value - k * math.lgamma(k + 1)

    l2k = math.floor(2 * k)

    def lower_local(p: int) -> float:
        x = 1 / p
        return (1 - x) ** ksq * (1 + l2k * k * x) ** (k / l2k)

    lower_decay = ksq / (2 * (1 - 1 / prime_limit)) + l2k * k**3 / 2
    lower_prod = euler_product(lower_local, prime_limit, 2.0, lower_decay, table=table)
    lower_log = lower_prod.log_value - (k / l2k) * math.lgamma(l2k * k + 1)

    upper = EulerProductValue(
        value=math.exp(upper_log),
        log_value=upper_log,
        prime_limit=prime_limit,
        tail_bound=upper_prod.tail_bound,
    )
    lower = EulerProductValue(
        value=math.exp(lower_log),
        log_value=lower_log,
        prime_limit=prime_limit,
        tail_bound=lower_prod.tail_bound,
    )
    return upper, lower


def pseudomoment_leading_factor(
    k: int, prime_limit: int = 100_000, table: PrimeTable | None = None
) -> EulerProductValue:
    """The arithmetic factor prod_p (1-1/p)^(k^2) * sum_j c_k(j)^2 p^(-j) for integer k >= 1.

    This is the arithmetic part of the leading pseudomoment constant; at k=1 it
    is 1, at k=2 it equals 6/pi^2.
    """
    if k < 1 or int(k) != k:
        raise ValueError(f"k must be a positive integer, got {k}")
    k = int(k)
    if prime_limit <= 2 * k * k:
        raise ValueError(f"prime_limit must exceed 2*k^2 = {2 * k * k} for a certified tail")
    ksq = k * k

    def local(p: int) -> float:
        x = 1 / p
        total = 1.0
        term_index = 1
        while True:
            t = binomial_series_coefficient(term_index, k) ** 2 * x**term_index
            total += t
            if t < 1e-20 * total:
                break
            term_index += 1
        return (1 - x) ** ksq * total

    L = prime_limit
    decay = k**4 / (1 - ksq / L) + ksq / (2 * (1 - 1 / L))
    return euler_product(local, prime_limit, 2.0, decay, table=table)


def omega_sieve(x: int, table: PrimeTable) -> np.ndarray:
    """Omega(n) for all 0 <= n <= x as a uint8 array (Omega(0)=Omega(1)=0).

    Strips least prime factors in vectorized passes; the number of passes is
    max Omega(n) <= log2(x).
    """
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    if x > table.limit:
        raise SieveLimitError(f"{x} exceeds sieve limit {table.limit}")
    cap = memory_cap_bytes()
    if 9 * (x + 1) > cap:
        raise ResourceLimitError(f"prime-factor-count sieve of size {x} needs {9 * (x + 1)} bytes", cap)
    spf = table.smallest_factor
    cur = np.arange(x + 1, dtype=np.int64)
    cur[0] = 1
    omega = np.zeros(x + 1, dtype=np.uint8)
    active = np.nonzero(cur > 1)[0]
    while active.size:
        vals = cur[active]
        vals //= spf[vals]
        cur[active] = vals
        omega[active] += 1
        active = active[vals > 1]
    return omega


def divisor_sieve(x: int, order: int, table: PrimeTable) -> np.ndarray:
    """d_order(n) for all 0 <= n <= x (order a positive integer), as int64.

    Per prime power p^e the running factor is updated from c_order(e-1) to
    c_order(e) with exact integer arithmetic.
    """
    if order < 1 or int(order) != order:
        raise ValueError(f"order must be a positive integer, got {order}")
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    if x > table.limit:
        raise SieveLimitError(f"{x} exceeds sieve limit {table.limit}")
    cap = memory_cap_bytes()
    if 8 * (x + 1) > cap:
        raise ResourceLimitError(f"divisor sieve of size {x} needs {8 * (x + 1)} bytes", cap)
    order = int(order)
    d = np.ones(x + 1, dtype=np.int64)
    d[0] = 0
    if order == 1:
        return d
    for p in table.primes[table.primes <= x]:
        p = int(p)
        e = 1
        pe = p
        while pe <= x:
            prev = math.comb(e - 2 + order, e - 1)
            cur = math.comb(e - 1 + order, e)
            seg = d[pe::pe]
            seg //= prev
            seg *= cur
            e += 1
            pe *= p
    return d


def divisor_weight_sum(x: int, alpha: float, table: PrimeTable) -> float:
    """sum_{n<=x} Phi_alpha(n), computed from sieved Omega (and d_floor(alpha)) arrays."""
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    m = math.floor(alpha)
    omega = omega_sieve(x, table)
    ratio_powers = (alpha / m) ** np.arange(256, dtype=np.float64)
    if m == 1:
        counts = np.bincount(omega[1:])
        return float(counts @ ratio_powers[: counts.size])
    d = divisor_sieve(x, m, table).astype(np.float64)
    return float(np.sum(d[1:] * ratio_powers[omega[1:]]))


def omega_class_counts(x: int, table: PrimeTable) -> np.ndarray:
    """N(x, m) = #{n <= x : Omega(n) = m} for m = 0 .. max, as an int64 array.

    The counts partition {1, ..., x}: they sum to x, and N(x, 0) = 1.
    """
    omega = omega_sieve(x, table)
    return np.bincount(omega[1:]).astype(np.int64)
