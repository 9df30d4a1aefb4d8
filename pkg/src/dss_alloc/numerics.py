"""Exact and log-space combinatorial primitives.

Harmonic numbers, binomial coefficients, and the two access distributions
used throughout: hypergeometric for fixed-size access and binomial for
probabilistic access. Probability masses are assembled in log space and
exponentiated once; the log terms come from exact integer binomials whenever
the arguments are small enough for that to be cheap. Log-domain probabilities
are plain floats (value <= 0, with -inf standing for probability 0).
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache

from .errors import ConfigurationError

__all__ = [
    "EXACT_HARMONIC_LIMIT",
    "binomial",
    "binomial_pmf",
    "harmonic",
    "harmonic_gap",
    "hypergeometric_pmf",
    "hypergeometric_support",
    "log_binomial",
]

EXACT_HARMONIC_LIMIT = 10_000

# Largest n for which log_binomial takes the log-of-exact-integer path.
_EXACT_LOG_LIMIT = 1_000

_EULER_GAMMA = 0.5772156649015329

_harmonic_values = [Fraction(0)]
_harmonic_lock = threading.Lock()


def harmonic(n: int) -> Fraction | float:
    """Return H_n = sum_{i=1}^{n} 1/i, with H_0 = 0.

    Exact rational for n <= EXACT_HARMONIC_LIMIT; asymptotic float beyond
    (ln n + gamma + 1/2n - 1/12n^2, whose error is O(n^-4) there).
    """
    if n < 0:
        raise ConfigurationError(f"harmonic() needs n >= 0, got {n}")
    if n > EXACT_HARMONIC_LIMIT:
        return math.log(n) + _EULER_GAMMA + 1.0 / (2 * n) - 1.0 / (12 * n * n)
    with _harmonic_lock:
        while len(_harmonic_values) <= n:
            i = len(_harmonic_values)
            _harmonic_values.append(_harmonic_values[-1] + Fraction(1, i))
        return _harmonic_values[n]


@lru_cache(maxsize=None)
def harmonic_gap(phi: int, alpha: int) -> float:
    """Return H_phi - H_{phi-alpha} as a float, for 1 <= alpha <= phi.

    The gap is the scaled mean of the alpha-th order statistic of phi
    exponentials; it is computed from exact rationals where available so the
    single rounding happens at the end.
    """
    if not 1 <= alpha <= phi:
        raise ConfigurationError(
            f"harmonic_gap() needs 1 <= alpha <= phi, got alpha={alpha}, phi={phi}"
        )
    return float(harmonic(phi) - harmonic(phi - alpha))


def binomial(n: int, k: int) -> int:
    """Return C(n, k) exactly, with C(n, k) = 0 for k < 0, k > n, or n < 0.

    The zero convention lets truncated pmf sums run over nominal limits
    without boundary special cases.
    """
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def log_binomial(n: int, k: int) -> float:
    """Return ln C(n, k), with -inf for the zero-convention cases."""
    if n < 0 or k < 0 or k > n:
        return -math.inf
    if n <= _EXACT_LOG_LIMIT:
        return math.log(math.comb(n, k))
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def hypergeometric_support(N: int, D: int, r: int) -> range:
    """Return the phi values with nonzero probability for (N, D, r)."""
    return range(max(0, r - (N - D)), min(r, D) + 1)


def hypergeometric_pmf(phi: int, N: int, D: int, r: int) -> float:
    """Return P(phi) = C(D, phi) C(N-D, r-phi) / C(N, r).

    The chance that a uniform r-subset of N nodes contains exactly phi of the
    D data-holding nodes; 0 outside the support.
    """
    if not 0 <= D <= N:
        raise ConfigurationError(f"hypergeometric_pmf() needs 0 <= D <= N, got D={D}, N={N}")
    if not 0 <= r <= N:
        raise ConfigurationError(f"hypergeometric_pmf() needs 0 <= r <= N, got r={r}, N={N}")
    if phi not in hypergeometric_support(N, D, r):
        return 0.0
    log_p = log_binomial(D, phi) + log_binomial(N - D, r - phi) - log_binomial(N, r)
    return math.exp(log_p)


def binomial_pmf(phi: int, n: int, q: float) -> float:
    """Return P(phi) = C(n, phi) q^phi (1-q)^(n-phi); 0 outside [0, n]."""
    if n < 0:
        raise ConfigurationError(f"binomial_pmf() needs n >= 0, got {n}")
    if not 0.0 <= q <= 1.0:
        raise ConfigurationError(f"binomial_pmf() needs 0 <= q <= 1, got {q}")
    if phi < 0 or phi > n:
        return 0.0
    # q in {0, 1} would send a log term to -inf; resolve those exactly
    if q == 0.0:
        return 1.0 if phi == 0 else 0.0
    if q == 1.0:
        return 1.0 if phi == n else 0.0
    log_p = log_binomial(n, phi) + phi * math.log(q) + (n - phi) * math.log1p(-q)
    return math.exp(log_p)
