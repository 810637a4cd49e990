"""Norm engines for Dirichlet polynomials and one-variable disc polynomials.

Exact routes: the l2 norm from coefficients, and even-exponent norms via
convolution (the 2k-norm of f is the l2 norm of f^k to the power 1/k).
Everything else is Monte Carlo over random completely multiplicative unit
coefficients (Steinhaus variables), with a counter-based generator so that a
fixed (seed, samples) pair yields bit-identical estimates no matter how the
samples are partitioned across workers.

One-variable quasi-norms are computed by trapezoidal quadrature on equispaced
circle nodes; this is exact up to rounding for even p and spectrally accurate
otherwise as long as the polynomial has no zeros near the circle.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .arith import PrimeTable, factorize
from .dseries import DirichletPolynomial, dirichlet_power

_CHUNK = 8192  # fixed sample chunk; part of the determinism contract

# splitmix64 increments (odd 64-bit constants)
_GAMMA_SAMPLE = np.uint64(0x9E3779B97F4A7C15)
_GAMMA_PRIME = np.uint64(0xD1B54A32D192ED03)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_U64 = np.uint64(0xFFFFFFFFFFFFFFFF)


def _mix64(x: np.ndarray) -> np.ndarray:
    # uint64 arithmetic wraps mod 2^64 by design
    with np.errstate(over="ignore"):
        x = (x ^ (x >> np.uint64(30))) * _M1
        x = (x ^ (x >> np.uint64(27))) * _M2
        return x ^ (x >> np.uint64(31))


def steinhaus_uniforms(seed: int, first_sample: int, count: int, prime_count: int) -> np.ndarray:
    """Uniform angles in [0,1) for samples [first_sample, first_sample+count) and primes 1..prime_count.

    Entry (i, j) depends only on (seed, first_sample + i, j), so any partition
    of the sample range reproduces the same values.
    """
    s0 = _mix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF))
    idx = np.arange(first_sample + 1, first_sample + count + 1, dtype=np.uint64)
    per_sample = _mix64(s0 + idx * _GAMMA_SAMPLE)
    jdx = np.arange(1, prime_count + 1, dtype=np.uint64)
    h = _mix64(per_sample[:, None] + jdx[None, :] * _GAMMA_PRIME)
    return (h >> np.uint64(11)).astype(np.float64) * 2.0**-53


def pairwise_sum(values: np.ndarray) -> float:
    """Sum by a strict binary fold whose shape depends only on the length.

    Used for all Monte Carlo reductions: the result is bit-identical however
    the input array was produced.
    """
    a = np.asarray(values, dtype=np.float64)
    while a.size > 1:
        if a.size & 1:
            a = np.concatenate([a, [0.0]])
        a = a[0::2] + a[1::2]
    return float(a[0]) if a.size else 0.0


@dataclass(frozen=True)
class NormEstimate:
    """A quasi-norm value with its method and, for Monte Carlo, its precision.

    std_error is the standard error of the p-th power mean (the quantity the
    sampler actually averages); the error of `value` itself follows by the
    delta method, see `value_std_error`.
    """

    p: float
    value: float
    method: str
    samples: int | None = None
    std_error: float = 0.0
    seed: int | None = None

    @property
    def power_mean(self) -> float:
        return self.value**self.p

    @property
    def value_std_error(self) -> float:
        if self.std_error == 0.0 or self.power_mean == 0.0:
            return 0.0
        return self.value * self.std_error / (self.p * self.power_mean)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "value": self.value,
            "method": self.method,
            "samples": self.samples,
            "std_error": self.std_error,
            "seed": self.seed,
        }


def l2_norm(f: DirichletPolynomial) -> NormEstimate:
    """sqrt of the sum of squared coefficient moduli."""
    total = math.fsum(abs(c) ** 2 for c in f.coefficients.values())
    return NormEstimate(p=2.0, value=math.sqrt(total), method="exact_l2")


def even_norm_exact(f: DirichletPolynomial, k: int) -> NormEstimate:
    """The exact 2k-quasi-norm via the l2 norm of the k-th convolution power."""
    if k < 1 or int(k) != k:
        raise ValueError(f"k must be a positive integer, got {k}")
    k = int(k)
    if not f.coefficients:
        return NormEstimate(p=2.0 * k, value=0.0, method="exact_even")
    fk = dirichlet_power(f, k)
    total = math.fsum(abs(c) ** 2 for c in fk.coefficients.values())
    return NormEstimate(p=2.0 * k, value=total ** (1.0 / (2 * k)), method="exact_even")


def _lift_matrices(f: DirichletPolynomial, table: PrimeTable):
    """Support coefficients, the needed prime indices, and the exponent matrix."""
    support = f.support
    coeffs = np.array([f.coefficients[n] for n in support], dtype=np.complex128)
    prime_indices: list[int] = []
    seen = set()
    kappas = []
    for n in support:
        kappa = factorize(n, table).kappa
        kappas.append(kappa)
        for j, e in enumerate(kappa, start=1):
            if e and j not in seen:
                seen.add(j)
                prime_indices.append(j)
    prime_indices.sort()
    pos = {j: i for i, j in enumerate(prime_indices)}
    K = np.zeros((len(prime_indices), len(support)))
    for col, kappa in enumerate(kappas):
        for j, e in enumerate(kappa, start=1):
            if e:
                K[pos[j], col] = e
    return coeffs, prime_indices, K


def _abs_values_chunk(seed, start, count, prime_indices, K, coeffs) -> np.ndarray:
    if not prime_indices:
        # constant polynomial: F is a_1 for every sample
        return np.full(count, abs(complex(coeffs.sum())) if coeffs.size else 0.0)
    u_all = steinhaus_uniforms(seed, start, count, prime_indices[-1])
    u = u_all[:, np.asarray(prime_indices, dtype=np.intp) - 1]
    theta = u @ K
    F = np.exp(2j * np.pi * theta) @ coeffs
    return np.abs(F)


def mc_norm_many(
    f: DirichletPolynomial,
    ps: Sequence[float],
    samples: int,
    seed: int,
    table: PrimeTable,
    workers: int = 1,
) -> list[NormEstimate]:
    """Monte Carlo estimates of several quasi-norms from one shared sample stream.

    Draws `samples` independent Steinhaus samples (one angle per prime up to the
    largest prime factor in the support), evaluates |F| once per sample, and
    forms each p-th power mean from the same |F| values. Deterministic for
    fixed (seed, samples) regardless of `workers`.
    """
    ps = [float(p) for p in ps]
    for p in ps:
        if p <= 0:
            raise ValueError(f"p must be positive, got {p}")
    if samples < 2:
        raise ValueError(f"need at least 2 samples, got {samples}")
    if f.length > table.limit:
        raise ValueError(f"support reaches {f.length}, beyond sieve limit {table.limit}")
    coeffs, prime_indices, K = _lift_matrices(f, table)
    absF = np.empty(samples, dtype=np.float64)
    starts = range(0, samples, _CHUNK)

    def fill(start: int) -> None:
        count = min(_CHUNK, samples - start)
        absF[start : start + count] = _abs_values_chunk(
            seed, start, count, prime_indices, K, coeffs
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, starts))
    else:
        for start in starts:
            fill(start)

    out = []
    for p in ps:
        x = absF**p
        total = pairwise_sum(x)
        mean = total / samples
        sumsq = pairwise_sum(x * x)
        var = max(sumsq - samples * mean * mean, 0.0) / (samples - 1)
        se = math.sqrt(var / samples)
        out.append(
            NormEstimate(
                p=p,
                value=mean ** (1.0 / p),
                method="monte_carlo",
                samples=samples,
                std_error=se,
                seed=seed,
            )
        )
    return out


def mc_norm(
    f: DirichletPolynomial,
    p: float,
    samples: int,
    seed: int,
    table: PrimeTable,
    workers: int = 1,
) -> NormEstimate:
    """Monte Carlo estimate of the p-quasi-norm; see `mc_norm_many`."""
    return mc_norm_many(f, [p], samples, seed, table, workers)[0]


@dataclass(frozen=True)
class SteinhausSample:
    """One draw of unit complex values z(p_j), j = 1..J."""

    values: np.ndarray

    def __post_init__(self):
        if self.values.size and not np.allclose(np.abs(self.values), 1.0):
            raise ValueError("Steinhaus values must have modulus 1")


def steinhaus_sample(seed: int, index: int, prime_count: int) -> SteinhausSample:
    """The sample that `mc_norm` uses at position `index` for the given seed."""
    if prime_count < 0:
        raise ValueError("prime_count must be nonnegative")
    u = steinhaus_uniforms(seed, index, 1, prime_count)[0]
    return SteinhausSample(values=np.exp(2j * np.pi * u))


def evaluate_at_sample(
    f: DirichletPolynomial, sample: SteinhausSample, table: PrimeTable
) -> complex:
    """sum a_n z(n) with z(n) the multiplicative extension of the sampled z(p_j)."""
    total = 0j
    z = sample.values
    for n, c in f.coefficients.items():
        kappa = factorize(n, table).kappa
        if len(kappa) > z.size:
            raise ValueError(
                f"sample covers {z.size} primes but index {n} needs {len(kappa)}"
            )
        zn = 1 + 0j
        for j, e in enumerate(kappa):
            if e:
                zn *= z[j] ** e
        total += c * zn
    return total


@dataclass(frozen=True)
class DiscPolynomial:
    """Dense one-variable polynomial a_0 + a_1 z + ... + a_d z^d."""

    coefficients: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.coefficients, dtype=np.complex128)
        nz = np.nonzero(a)[0]
        a = a[: nz[-1] + 1] if nz.size else a[:1] * 0
        a.flags.writeable = False
        object.__setattr__(self, "coefficients", a)

    @property
    def degree(self) -> int:
        return int(self.coefficients.size - 1)

    def __call__(self, z: np.ndarray | complex) -> np.ndarray | complex:
        return np.polynomial.polynomial.polyval(z, self.coefficients)


def disc_norm(f: DiscPolynomial, p: float, nodes: int = 4096) -> NormEstimate:
    """Boundary quasi-norm: the p-th root of the mean of |f|^p over equispaced circle nodes.

    For periodic integrands the trapezoidal rule is the plain node mean. With
    nodes > 2*degree the p=2 case is aliasing-free and matches the coefficient
    l2 norm to rounding.
    """
    if p <= 0:
        raise ValueError(f"p must be positive, got {p}")
    if nodes < 4 * (f.degree + 1):
        raise ValueError(f"need at least {4 * (f.degree + 1)} nodes for degree {f.degree}")
    z = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    vals = np.abs(f(z)) ** p
    mean = float(np.mean(vals))
    return NormEstimate(p=float(p), value=mean ** (1.0 / p), method="disc_quadrature")


def dilate(f: DiscPolynomial, r: float) -> DiscPolynomial:
    """The dilation f(z) -> f(rz): coefficient a_j becomes a_j r^j.

    Contractive from the p- into the q-quasi-norm exactly when r <= sqrt(p/q).
    """
    if not 0 < r <= 1:
        raise ValueError(f"r must lie in (0, 1], got {r}")
    scale = r ** np.arange(f.coefficients.size)
    return DiscPolynomial(f.coefficients * scale)
