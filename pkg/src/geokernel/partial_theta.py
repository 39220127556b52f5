"""Partial theta sums and the analytic bound on the alternating eigenvalue.

S_r(N) = sum_{k>=0} (-1)^k exp(-mu k^2/N^2 - r k/N) is evaluated by
paired-term summation, which keeps the partial sums monotone and makes
the first omitted term a rigorous truncation bound.  On top of it sit
the tail-decomposition identity, the closed-form upper bound for the
alternating Fourier eigenvalue, and its leading 1/N^2 term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp

from .precision import DOUBLE_DIGITS, check_digits, to_mpf, working_dps

# hard cap on summation length; reachable only for degenerate mu, r
MAX_TERMS = 5_000_000


class PartialThetaError(ValueError):
    pass


@dataclass(frozen=True)
class PartialThetaQuery:
    mu: object
    r: object
    n: int
    precision_digits: int = 30

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 1):
            raise PartialThetaError("N must be an integer >= 1")
        check_digits(self.precision_digits)


@dataclass(frozen=True)
class PartialThetaResult:
    value: object
    terms_used: int
    truncation_bound: object
    precision_digits: int


def partial_theta(query: PartialThetaQuery) -> PartialThetaResult:
    """Alternating sum S_r(N), paired so the truncation bound is exact.

    Terms are added in pairs (k = 2m, 2m+1); summation stops when the
    next unpaired term drops below 10^-(digits+5), and that term is the
    reported truncation bound.
    """
    digits = query.precision_digits
    with working_dps(digits):
        mu = to_mpf(query.mu, digits)
        r = to_mpf(query.r, digits)
        if not mu > 0:
            raise PartialThetaError("mu must be positive")
        if not r >= 0:
            raise PartialThetaError("r must be nonnegative")
        n = query.n
        nn = mp.mpf(n) * n
        cutoff = mp.mpf(10) ** (-(digits + 5))

        def term(k: int):
            return mp.exp(-mu * k * k / nn - r * k / n)

        total = mp.mpf(0)
        k = 0
        while True:
            head = term(k)
            if head < cutoff:
                return PartialThetaResult(
                    value=+total,
                    terms_used=k,
                    truncation_bound=+head,
                    precision_digits=digits,
                )
            total += head - term(k + 1)
            k += 2
            if k > MAX_TERMS:
                raise PartialThetaError(
                    f"series did not reach cutoff within {MAX_TERMS} terms"
                )


def s0(mu, n: int, precision_digits: int = 30):
    """Convenience: S_0(N) value only."""
    return partial_theta(
        PartialThetaQuery(mu=mu, r=0, n=n, precision_digits=precision_digits)
    ).value


def _require_quarter(n: int) -> None:
    if not (isinstance(n, int) and n >= 4 and n % 4 == 0):
        raise PartialThetaError(f"N must be divisible by 4, got {n}")


def tail_decomposition_check(mu, n: int, precision_digits: int = 30):
    """Residual of the exact tail-split identity for S_0(N).

    S_0(N) = sum_{k<N/2} (-1)^k e^{-mu k^2/N^2}
             + e^{-mu/4} - e^{-mu/4} e^{-mu/N^2 - mu/N}
             + e^{-mu/4} e^{-4mu/N^2 - 2mu/N} S_{mu(1+4/N)}(N)

    The identity is pure index reshuffling, so the residual measures
    arithmetic error only.
    """
    _require_quarter(n)
    digits = precision_digits
    with working_dps(digits):
        mu = to_mpf(mu, digits)
        if not mu > 0:
            raise PartialThetaError("mu must be positive")
        nn = mp.mpf(n) * n
        lhs = s0(mu, n, digits)
        star = mp.fsum(
            (-1) ** k * mp.exp(-mu * k * k / nn) for k in range(n // 2)
        )
        e4 = mp.exp(-mu / 4)
        tail_r = mu * (1 + mp.mpf(4) / n)
        tail = partial_theta(
            PartialThetaQuery(mu=mu, r=tail_r, n=n, precision_digits=digits)
        ).value
        rhs = (
            star
            + e4
            - e4 * mp.exp(-mu / nn - mu / n)
            + e4 * mp.exp(-4 * mu / nn - 2 * mu / n) * tail
        )
        return abs(lhs - rhs)


def bound_rhs(mu, n: int, precision_digits: int = 30):
    """Closed-form upper bound for the alternating Fourier eigenvalue:

    -1 + 2 S_0(N) + e^{-mu/4} (-1 + 2 e^{-mu/N^2 - mu/N}
                                  - 2 e^{-4mu/N^2 - 2mu/N} S_0(N))
    """
    _require_quarter(n)
    digits = precision_digits
    with working_dps(digits):
        mu = to_mpf(mu, digits)
        if not mu > 0:
            raise PartialThetaError("mu must be positive")
        nn = mp.mpf(n) * n
        s = s0(mu, n, digits)
        e4 = mp.exp(-mu / 4)
        return (
            -1
            + 2 * s
            + e4 * (-1 + 2 * mp.exp(-mu / nn - mu / n) - 2 * mp.exp(-4 * mu / nn - 2 * mu / n) * s)
        )


def leading_term(mu, n: int, precision_digits: int = DOUBLE_DIGITS):
    """Leading 1/N^2 asymptotics of the bound: e^{-mu/4} (2mu - mu^2) / N^2.

    Negative exactly when mu > 2, i.e. lambda > 1/(2 pi^2).
    """
    if not (isinstance(n, int) and n >= 1):
        raise PartialThetaError("N must be an integer >= 1")
    if precision_digits <= DOUBLE_DIGITS:
        m = float(mu)
        if not (math.isfinite(m) and m > 0):
            raise PartialThetaError("mu must be positive")
        return math.exp(-m / 4.0) * (2.0 * m - m * m) / (n * n)
    with working_dps(precision_digits):
        m = to_mpf(mu, precision_digits)
        if not m > 0:
            raise PartialThetaError("mu must be positive")
        return mp.exp(-m / 4) * (2 * m - m * m) / (mp.mpf(n) * n)


def bringmann_coefficient(a: int) -> float:
    """Normalized even-order derivative of 1/(1 - e^{2 pi i z}) at z = 1/2.

    The function is 1/2 plus an odd function of (z - 1/2), so every even
    coefficient past the constant vanishes.
    """
    if not (isinstance(a, int) and a >= 0):
        raise PartialThetaError("order must be a nonnegative integer")
    return 0.5 if a == 0 else 0.0


def mu_of_lambda(lam, precision_digits: int = DOUBLE_DIGITS):
    """mu = 4 pi^2 lambda, the bandwidth in circumference-fraction units."""
    if precision_digits <= DOUBLE_DIGITS:
        val = float(lam)
        if not (math.isfinite(val) and val > 0):
            raise PartialThetaError("lambda must be positive")
        return 4.0 * math.pi * math.pi * val
    with working_dps(precision_digits):
        val = to_mpf(lam, precision_digits)
        if not val > 0:
            raise PartialThetaError("lambda must be positive")
        return 4 * mp.pi * mp.pi * val


def lambda_of_mu(mu, precision_digits: int = DOUBLE_DIGITS):
    """Inverse of mu_of_lambda."""
    if precision_digits <= DOUBLE_DIGITS:
        val = float(mu)
        if not (math.isfinite(val) and val > 0):
            raise PartialThetaError("mu must be positive")
        return val / (4.0 * math.pi * math.pi)
    with working_dps(precision_digits):
        val = to_mpf(mu, precision_digits)
        if not val > 0:
            raise PartialThetaError("mu must be positive")
        return val / (4 * mp.pi * mp.pi)
