"""Weighted coefficient inequalities and extremal coefficient functionals.

Upper route (p >= 2): the quasi-norm is at most the square root of
sum |a_n|^2 Phi_{p/2}(n). Lower route (p <= 2): the square root of
sum |a_n|^2 / Phi_{2/p}(n) is at most the quasi-norm, with a square-free
variant using |mu(n)| / d_{2/p}(n). The coefficient functional C(k, p) is the
largest k-th Taylor coefficient over the unit ball of the one-variable p-space;
its multiplicative extension over prime powers bounds the n-th coefficient
functional on Dirichlet series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .arith import PrimeTable, binomial_series_coefficient, divisor_weight, factorize
from .dseries import DirichletPolynomial
from .norms import NormEstimate


def hl_upper_sum(f: DirichletPolynomial, p: float, table: PrimeTable) -> float:
    """sum |a_n|^2 Phi_{p/2}(n); its square root dominates the p-quasi-norm for p >= 2."""
    if p < 2:
        raise ValueError(f"upper weighted sum needs p >= 2, got {p}")
    return math.fsum(
        abs(c) ** 2 * divisor_weight(n, p / 2, table) for n, c in f.coefficients.items()
    )


def hl_lower_sum(f: DirichletPolynomial, p: float, table: PrimeTable) -> float:
    """sum |a_n|^2 / Phi_{2/p}(n); its square root is below the p-quasi-norm for 0 < p <= 2."""
    if not 0 < p <= 2:
        raise ValueError(f"lower weighted sum needs 0 < p <= 2, got {p}")
    return math.fsum(
        abs(c) ** 2 / divisor_weight(n, 2 / p, table) for n, c in f.coefficients.items()
    )


def squarefree_lower_sum(f: DirichletPolynomial, p: float, table: PrimeTable) -> float:
    """sum |a_n|^2 |mu(n)| / d_{2/p}(n): the lower weighted sum restricted to square-free indices.

    On square-free support it coincides with `hl_lower_sum` since the hybrid
    weight equals d_{2/p} there; indices with a squared factor drop out.
    """
    if not 0 < p <= 2:
        raise ValueError(f"lower weighted sum needs 0 < p <= 2, got {p}")
    total = 0.0
    parts = []
    for n, c in f.coefficients.items():
        fac = factorize(n, table)
        if fac.mobius == 0:
            continue
        d = 1.0
        for _, e in fac.factors:
            d *= binomial_series_coefficient(e, 2 / p)
        parts.append(abs(c) ** 2 / d)
    return math.fsum(parts)


def coeff_functional_exact(p: float) -> float:
    """C(1, p): the norm of f -> f'(0) on the unit ball of the one-variable p-space.

    1 for p >= 1; sqrt(2/p) (1 - p/2)^(1/p - 1/2) for 0 < p < 1 (continuous at 1).
    """
    if p <= 0:
        raise ValueError(f"p must be positive, got {p}")
    if p >= 1:
        return 1.0
    return math.sqrt(2 / p) * (1 - p / 2) ** (1 / p - 0.5)


def _dilation_bound_objective(x: float, k: int, p: float) -> float:
    return x ** (-k / 2) * (1 - x) ** (1 / x - 1 / p)


def _minimize_dilation_bound(k: int, p: float) -> tuple[float, float]:
    """Minimize x^(-k/2) (1-x)^(1/x - 1/p) over [p, 1): coarse grid, then golden section."""
    lo, hi = p, 1 - 1e-9
    grid = 2048
    xs = [lo + (hi - lo) * i / grid for i in range(grid + 1)]
    vals = [_dilation_bound_objective(x, k, p) for x in xs]
    i = min(range(len(vals)), key=vals.__getitem__)
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, grid)]
    invphi = (math.sqrt(5) - 1) / 2
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc = _dilation_bound_objective(c, k, p)
    fd = _dilation_bound_objective(d, k, p)
    while b - a > 1e-10:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = _dilation_bound_objective(c, k, p)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = _dilation_bound_objective(d, k, p)
    x = (a + b) / 2
    # the minimum may sit exactly on the left endpoint, where the objective is p^(-k/2)
    best_x, best = min(
        ((x, _dilation_bound_objective(x, k, p)), (lo, _dilation_bound_objective(lo, k, p))),
        key=lambda t: t[1],
    )
    return best, best_x


@dataclass(frozen=True)
class CoefficientBound:
    """Best available upper bound on C(k, p) with the per-method values."""

    k: int
    p: float
    value: float
    method: str
    candidates: dict = field(default_factory=dict)


def coeff_functional_bound(k: int, p: float) -> CoefficientBound:
    """Upper bounds on C(k, p) for 0 < p < 1.

    'minimized' comes from the Cauchy integral plus contractive dilation:
    min over x in [p, 1) of x^(-k/2) (1-x)^(1/x-1/p). 'binomial' is
    sqrt(c_ceil(2/p)(k)), stronger for p near 0. The reported value is the
    smaller of the two; for k = 1 the exact closed form is recorded alongside.
    """
    if not 0 < p < 1:
        raise ValueError(f"bounds require 0 < p < 1, got {p}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    minimized, minimizer = _minimize_dilation_bound(k, p)
    binomial = math.sqrt(binomial_series_coefficient(k, math.ceil(2 / p)))
    candidates = {"minimized": minimized, "binomial": binomial, "minimizer_x": minimizer}
    if minimized <= binomial:
        value, method = minimized, "minimized"
    else:
        value, method = binomial, "binomial"
    if k == 1:
        exact = coeff_functional_exact(p)
        candidates["closed_form"] = exact
        if value < exact - 1e-12:
            raise AssertionError(
                f"upper bound {value} fell below the exact value {exact} at k=1, p={p}"
            )
    return CoefficientBound(k=k, p=p, value=value, method="best", candidates=candidates)


def coeff_functional_multiplicative(n: int, p: float, table: PrimeTable) -> float:
    """Upper bound on the n-th coefficient functional: product over prime powers p_j^k || n.

    Exact (the closed form to the power omega(n)) when n is square-free, an
    upper bound otherwise.
    """
    if not 0 < p < 1:
        raise ValueError(f"multiplicative bound requires 0 < p < 1, got {p}")
    fac = factorize(n, table)
    value = 1.0
    for _, e in fac.factors:
        if e == 1:
            value *= coeff_functional_exact(p)
        else:
            value *= coeff_functional_bound(e, p).value
    return value


def point_evaluation_margin(
    f: DirichletPolynomial,
    z: Sequence[complex],
    p: float,
    norm: NormEstimate,
    table: PrimeTable,
) -> float:
    """Slack in the pointwise bound |F(z)| <= prod_j (1 - |z_j|^2)^(-1/p) * norm.

    z lists the first coordinates of the lifted point (missing ones are 0);
    F is the lifted polynomial. Nonnegative, up to statistical error in `norm`.
    """
    if p <= 0:
        raise ValueError(f"p must be positive, got {p}")
    zs = [complex(w) for w in z]
    if any(abs(w) >= 1 for w in zs):
        raise ValueError("all point coordinates must satisfy |z_j| < 1")
    growth = 1.0
    for w in zs:
        growth *= (1 - abs(w) ** 2) ** (-1 / p)
    value = 0j
    for n, c in f.coefficients.items():
        kappa = factorize(n, table).kappa
        if len(kappa) > len(zs) and any(e for e in kappa[len(zs):]):
            continue  # a coordinate beyond the supplied point is 0
        term = c
        for j, e in enumerate(kappa):
            if e:
                term *= zs[j] ** e
        value += term
    return growth * norm.value - abs(value)


def primitive_pairing(f: DirichletPolynomial, beta: float) -> complex:
    """a_1 + sum_{n>=2} a_n n^(-1/2) (log n)^(-beta): pairing against the fractional primitive."""
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    total = complex(f.coeff(1))
    for n, c in f.coefficients.items():
        if n >= 2:
            total += c * n**-0.5 * math.log(n) ** -beta
    return total


@dataclass(frozen=True)
class HLReport:
    """Outcome of checking the weighted coefficient inequalities on one polynomial.

    verdict is derived from the stored numbers only: 'consistent' unless an
    inequality fails by more than `slack_sigma` standard errors of the norm's
    p-th power mean.
    """

    p: float
    norm: NormEstimate
    upper_sum: float | None
    lower_sum: float | None
    squarefree_sum: float | None
    verdict: str
    slack_sigma: float

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "norm": self.norm.to_dict(),
            "upper_sum": self.upper_sum,
            "lower_sum": self.lower_sum,
            "squarefree_sum": self.squarefree_sum,
            "verdict": self.verdict,
            "slack_sigma": self.slack_sigma,
        }


def hl_report(
    f: DirichletPolynomial,
    p: float,
    norm: NormEstimate,
    table: PrimeTable,
    slack_sigma: float = 3.0,
) -> HLReport:
    """Check the applicable weighted inequalities against a norm estimate.

    Comparisons happen on p-th power means, where the Monte Carlo standard
    error lives; inequalities violated by more than `slack_sigma` standard
    errors mark the report 'violation-suspected'.
    """
    upper = hl_upper_sum(f, p, table) if p >= 2 else None
    lower = hl_lower_sum(f, p, table) if p <= 2 else None
    sqfree = squarefree_lower_sum(f, p, table) if p <= 2 else None
    # statistical slack plus a rounding allowance for the exact routes
    slack = slack_sigma * norm.std_error + 1e-10 * max(1.0, norm.power_mean)
    ok = True
    if upper is not None:
        ok &= norm.power_mean <= upper ** (p / 2) + slack
    if lower is not None:
        ok &= lower ** (p / 2) <= norm.power_mean + slack
    if sqfree is not None:
        ok &= sqfree ** (p / 2) <= norm.power_mean + slack
    return HLReport(
        p=p,
        norm=norm,
        upper_sum=upper,
        lower_sum=lower,
        squarefree_sum=sqfree,
        verdict="consistent" if ok else "violation-suspected",
        slack_sigma=slack_sigma,
    )
