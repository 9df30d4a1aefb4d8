"""Aggregate metrics over the access distribution.

Service rate mu_s(alpha) = sum_phi P(phi) * mu_s(alpha | phi) and recovery
probability P_s(alpha) = P(phi >= alpha), their closed forms for minimal
(alpha = 1) and maximal (alpha = r) spreading, exhaustive optimal-alpha
search, and parameter sweeps.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ConfigurationError, InfeasibleError, NoClosedFormError
from .models import (
    AccessModel,
    ConstantTime,
    FixedSize,
    Probabilistic,
    ScaledExp,
    ServiceModel,
    ShiftedExp,
    SmallExp,
    SystemConfig,
    conditional_rate,
)
from .numerics import binomial, binomial_pmf, harmonic, hypergeometric_pmf, hypergeometric_support

__all__ = [
    "MetricResult",
    "OptimalResult",
    "Simulated",
    "SweepRow",
    "access_pmf",
    "alpha_table",
    "feasible_alphas",
    "maximal_spreading_rate",
    "minimal_spreading_rate",
    "optimal_alpha",
    "recovery_probability",
    "service_rate",
    "sweep",
]


@dataclass(frozen=True)
class Simulated:
    """Provenance tag for Monte-Carlo results."""

    half_width: float
    trials: int


@dataclass(frozen=True)
class MetricResult:
    """A service rate and/or recovery probability for one allocation."""

    service_rate: float | None
    recovery_probability: float
    alpha: int
    provenance: str | Simulated = "analytic"


@dataclass(frozen=True)
class SweepRow:
    """Both metrics at one spreading parameter."""

    alpha: int
    service_rate: float
    recovery_probability: float


@dataclass(frozen=True)
class OptimalResult:
    """Outcome of the exhaustive search over feasible alpha."""

    alpha_star: int
    value: float
    table: tuple[SweepRow, ...]


def access_pmf(config: SystemConfig, access: AccessModel) -> list[tuple[int, float]]:
    """Return (phi, P(phi)) pairs over the access model's full phi support."""
    D = config.data_nodes
    if isinstance(access, FixedSize):
        if access.r > config.nodes:
            raise ConfigurationError(f"r={access.r} exceeds nodes={config.nodes}")
        return [
            (phi, hypergeometric_pmf(phi, config.nodes, D, access.r))
            for phi in hypergeometric_support(config.nodes, D, access.r)
        ]
    if isinstance(access, Probabilistic):
        q = 1.0 - access.p
        return [(phi, binomial_pmf(phi, D, q)) for phi in range(D + 1)]
    raise ConfigurationError(f"unknown access model {access!r}")


def service_rate(config: SystemConfig, access: AccessModel, service: ServiceModel) -> float:
    """Return mu_s(alpha) = sum_phi P(phi) * mu_s(alpha | phi).

    Returns 0 when no reachable phi meets alpha (e.g. alpha > r under
    fixed-size access).
    """
    total = 0.0
    for phi, prob in access_pmf(config, access):
        if phi >= config.alpha and prob > 0.0:
            total += prob * conditional_rate(service, config.alpha, phi)
    return total


def recovery_probability(config: SystemConfig, access: AccessModel) -> float:
    """Return P_s(alpha) = P(phi >= alpha)."""
    total = sum(prob for phi, prob in access_pmf(config, access) if phi >= config.alpha)
    return min(1.0, max(0.0, total))


def minimal_spreading_rate(access: AccessModel, service: ServiceModel, nodes: int, m: int) -> float:
    """Return the closed-form mu_s(1) of the minimal spreading allocation.

        fixed-size + small/scaled exp   mu * m * r / N
        fixed-size + constant           (1 - C(N-m, r)/C(N, r)) / delta
        probabilistic + small/scaled    mu * m * (1 - p)
        probabilistic + constant        (1 - p^m) / delta

    The shifted-exponential model has no closed form (only bounds), which
    raises NoClosedFormError.
    """
    SystemConfig(nodes, m, 1)  # validates positivity and m <= nodes
    if isinstance(service, ShiftedExp):
        raise NoClosedFormError("no closed form for mu_s(1) under shifted-exponential service")
    if isinstance(access, FixedSize):
        r = access.r
        if r > nodes:
            raise ConfigurationError(f"r={r} exceeds nodes={nodes}")
        if isinstance(service, (SmallExp, ScaledExp)):
            return service.mu * m * r / nodes
        if isinstance(service, ConstantTime):
            miss = binomial(nodes - m, r) / binomial(nodes, r)  # access avoids all data nodes
            return (1.0 - miss) / service.delta
    if isinstance(access, Probabilistic):
        if isinstance(service, (SmallExp, ScaledExp)):
            return service.mu * m * (1.0 - access.p)
        if isinstance(service, ConstantTime):
            return (1.0 - access.p ** m) / service.delta
    raise ConfigurationError(f"unknown access model {access!r}")


def maximal_spreading_rate(access: AccessModel, service: ServiceModel, nodes: int, m: int) -> float:
    """Return the closed-form mu_s(r) of the maximal spreading allocation alpha = r.

        fixed-size + scaled exp   mu * r * C(rm, r) / (H_r * C(N, r))
        fixed-size + constant     r * C(rm, r) / (delta * C(N, r))

    Only fixed-size access is covered, and rm <= N is required for the
    allocation to exist.
    """
    if not isinstance(access, FixedSize):
        raise NoClosedFormError("maximal spreading closed form needs fixed-size access")
    r = access.r
    if r > nodes:
        raise ConfigurationError(f"r={r} exceeds nodes={nodes}")
    if r * m > nodes:
        raise InfeasibleError(
            f"alpha=r={r} needs m*r={m * r} data nodes but the system has only {nodes}"
        )
    if isinstance(service, ScaledExp):
        ratio = Fraction(binomial(r * m, r), binomial(nodes, r)) / harmonic(r)
        return service.mu * r * float(ratio)
    if isinstance(service, ConstantTime):
        return r * binomial(r * m, r) / (service.delta * binomial(nodes, r))
    raise NoClosedFormError(f"no maximal spreading closed form for {service.kind} service")


def feasible_alphas(nodes: int, m: int, access: AccessModel | None = None) -> range:
    """Return the alpha values admitting an allocation (and a nonempty phi range)."""
    if nodes < 1 or m < 1:
        raise ConfigurationError(f"nodes and m must be positive, got nodes={nodes}, m={m}")
    if nodes < m:
        raise InfeasibleError(f"no feasible alpha for nodes={nodes}, m={m}")
    upper = nodes // m
    if isinstance(access, FixedSize):
        upper = min(upper, access.r)
    return range(1, upper + 1)


def optimal_alpha(
    access: AccessModel,
    service: ServiceModel,
    nodes: int,
    m: int,
    objective: str = "service_rate",
) -> OptimalResult:
    """Exhaustively search feasible alpha for the best objective value.

    objective is "service_rate" or "recovery_probability"; ties break toward
    the smallest alpha.
    """
    if objective not in ("service_rate", "recovery_probability"):
        raise ConfigurationError(f"unknown objective {objective!r}")
    rows = []
    best_alpha = 0
    best_value = -1.0
    for alpha in feasible_alphas(nodes, m, access):
        config = SystemConfig(nodes, m, alpha)
        row = SweepRow(
            alpha=alpha,
            service_rate=service_rate(config, access, service),
            recovery_probability=recovery_probability(config, access),
        )
        rows.append(row)
        value = getattr(row, objective)
        if value > best_value:
            best_alpha, best_value = alpha, value
    return OptimalResult(best_alpha, best_value, tuple(rows))


def alpha_table(
    access: AccessModel,
    service: ServiceModel,
    nodes: int,
    m: int,
    alphas: Iterable[int] | None = None,
) -> tuple[SweepRow, ...]:
    """Return one SweepRow per alpha.

    With alphas=None the feasible range is used. An explicit alpha list may
    exceed r under fixed-size access (those rows carry zero metrics); alphas
    with no allocation at all (m*alpha > nodes) are skipped with a warning.
    """
    rows = []
    for alpha in feasible_alphas(nodes, m, access) if alphas is None else alphas:
        if m * alpha > nodes:
            warnings.warn(f"skipping alpha={alpha}: m*alpha={m * alpha} exceeds nodes={nodes}",
                          stacklevel=2)
            continue
        config = SystemConfig(nodes, m, alpha)
        rows.append(
            SweepRow(
                alpha=alpha,
                service_rate=service_rate(config, access, service),
                recovery_probability=recovery_probability(config, access),
            )
        )
    return tuple(rows)


def sweep(
    parameter: str,
    values: Sequence[int | float],
    *,
    service: ServiceModel,
    nodes: int,
    access: AccessModel | None = None,
    m: int | None = None,
    alphas: Iterable[int] | None = None,
) -> list[tuple[int | float, tuple[SweepRow, ...]]]:
    """Return (value, rows) per grid point for one swept parameter.

    parameter is "m", "r", "p", or "alpha"; the remaining parameters stay
    fixed. Infeasible grid points are skipped with a warning instead of
    failing, so figure-style sweeps stay total.
    """
    alpha_list = None if alphas is None else tuple(alphas)
    out: list[tuple[int | float, tuple[SweepRow, ...]]] = []
    for value in values:
        try:
            if parameter == "m":
                if access is None:
                    raise ConfigurationError("sweeping m needs a fixed access model")
                rows = alpha_table(access, service, nodes, int(value), alpha_list)
            elif parameter == "r":
                if m is None:
                    raise ConfigurationError("sweeping r needs a fixed m")
                rows = alpha_table(FixedSize(int(value)), service, nodes, m, alpha_list)
            elif parameter == "p":
                if m is None:
                    raise ConfigurationError("sweeping p needs a fixed m")
                rows = alpha_table(Probabilistic(float(value)), service, nodes, m, alpha_list)
            elif parameter == "alpha":
                if access is None or m is None:
                    raise ConfigurationError("sweeping alpha needs fixed access and m")
                rows = alpha_table(access, service, nodes, m, (int(value),))
                if not rows:
                    continue  # the warning was already emitted
            else:
                raise ConfigurationError(f"unknown sweep parameter {parameter!r}")
        except InfeasibleError as exc:
            warnings.warn(f"skipping {parameter}={value}: {exc}", stacklevel=2)
            continue
        out.append((value, rows))
    return out
