"""Dimension formulas for carpet systems driven by a subshift over A x B.

The carpet system expands the two symbol tracks of a subshift in bases a and
b (a >= b >= 2).  Its mean Hausdorff dimension is the weighted entropy of the
coordinate projection at exponent w = log_a b divided by log b; its metric
mean dimension combines the entropies of the subshift and its projected
image.  For product shifts both reduce to the classical planar carpet
formulas, which this module also evaluates directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from . import symbolic, weighted
from .weighted import PairShiftSystem


@dataclass(frozen=True)
class ValueBracket:
    """A reported value with its certification status.

    `upper` is always a true upper bound; `lower` is populated only when a
    matching certificate exists.  `exact` means value == limit (closed form or
    spectral computation), not merely a finite-size estimate.
    """

    value: float
    upper: float
    lower: float | None
    exact: bool

    @property
    def status(self) -> str:
        return "exact" if self.exact else "upper_bound"


@dataclass(frozen=True)
class CarpetSpec:
    a: int
    b: int
    system: PairShiftSystem

    def __post_init__(self):
        if not (self.a >= self.b >= 2):
            raise DomainError(f"need a >= b >= 2, got a={self.a}, b={self.b}")
        if self.system.a_size != self.a or self.system.b_size != self.b:
            raise DomainError("system alphabet sizes must match (a, b)")

    @property
    def w(self) -> float:
        return math.log(self.b) / math.log(self.a)


def carpet_from_tuples(a: int, b: int, relation) -> CarpetSpec:
    return CarpetSpec(a, b, weighted.pair_system_from_tuples(a, b, relation))


@dataclass(frozen=True)
class DimensionReport:
    w: float
    mdim_h: ValueBracket
    mdim_m: ValueBracket
    h_omega: float
    h_omega_prime: float
    classical: dict | None


def floor_w_m(a: int, b: int, m: int) -> int:
    """floor(M log_a b) computed exactly: the largest t with a^t <= b^M."""
    target = b**m
    t = 0
    power = 1
    while power * a <= target:
        power *= a
        t += 1
    return t


def mean_dims(spec: CarpetSpec, n_max: int = 8, budget: int | None = None) -> DimensionReport:
    w = spec.w
    log_a, log_b = math.log(spec.a), math.log(spec.b)

    wrep = weighted.weighted_entropy(spec.system, w, n_max, budget)
    h_omega_rep = symbolic.entropy(spec.system.omega, n_max, budget)
    image = weighted.image_subshift(spec.system)
    h_prime_rep = symbolic.entropy(image, n_max, budget)

    h_omega = h_omega_rep.best_estimate
    h_prime = h_prime_rep.best_estimate

    mdh_value = wrep.best_estimate / log_b
    mdh = ValueBracket(
        value=mdh_value,
        upper=wrep.upper_bounds[-1] / log_b,
        lower=mdh_value if wrep.exact else None,
        exact=wrep.exact,
    )
    mdm_value = h_omega / log_a + (1.0 / log_b - 1.0 / log_a) * h_prime
    entropies_exact = h_omega_rep.exact and h_prime_rep.exact
    mdm_upper = (
        h_omega_rep.upper_bounds[-1] / log_a
        + (1.0 / log_b - 1.0 / log_a) * h_prime_rep.upper_bounds[-1]
    )
    mdm = ValueBracket(
        value=mdm_value,
        upper=max(mdm_value, mdm_upper),
        lower=mdm_value if entropies_exact else None,
        exact=entropies_exact,
    )

    classical = None
    if spec.system.omega.kind in (symbolic.KIND_TUPLES, symbolic.KIND_FULL):
        rel = _relation_of(spec)
        classical = classical_carpet_dims(spec.a, spec.b, rel)

    return DimensionReport(
        w=w,
        mdim_h=mdh,
        mdim_m=mdm,
        h_omega=h_omega,
        h_omega_prime=h_prime,
        classical=classical,
    )


def _relation_of(spec: CarpetSpec):
    omega = spec.system.omega
    if omega.kind == symbolic.KIND_FULL:
        return [(u, v) for u in range(spec.a) for v in range(spec.b)]
    return sorted(omega.tuple_set)


def classical_carpet_dims(a: int, b: int, relation) -> dict:
    """Hausdorff and Minkowski dimensions of the planar base-(a, b) carpet.

    dim_H = log_b sum_j t_j^{log_a b};  dim_M = log_b s + log_a (r / s)
    with r = |R|, s = number of occupied columns, t_j = column occupancies.
    """
    rel = {(int(u), int(v)) for u, v in relation}
    if not rel:
        raise DomainError("relation R must be nonempty")
    if not (a >= b >= 2):
        raise DomainError(f"need a >= b >= 2, got a={a}, b={b}")
    for u, v in rel:
        if not (0 <= u < a and 0 <= v < b):
            raise DomainError(f"tuple {(u, v)} leaves the {a}x{b} product alphabet")
    w = math.log(b) / math.log(a)
    t = [0] * b
    for _, v in rel:
        t[v] += 1
    r = len(rel)
    s = sum(1 for x in t if x > 0)
    dim_h = math.log(math.fsum(sorted((x**w for x in t if x > 0), reverse=True))) / math.log(b)
    dim_m = math.log(s) / math.log(b) + math.log(r / s) / math.log(a)
    return {
        "dim_h": dim_h,
        "dim_m": dim_m,
        "r": r,
        "s": s,
        "t": t,
    }


def gap_analysis(a: int, b: int, relation) -> dict:
    """Decide whether the two classical carpet dimensions coincide.

    They are equal exactly when a == b or all nonzero column occupancies
    coincide; the numeric comparison is cross-checked against that predicate.
    """
    cl = classical_carpet_dims(a, b, relation)
    distinct = sorted({x for x in cl["t"] if x > 0})
    structural = (a == b) or (len(distinct) == 1)
    numeric = abs(cl["dim_h"] - cl["dim_m"]) <= 1e-9
    if structural != numeric:
        raise AssertionError(
            f"gap criterion mismatch: structural={structural} numeric={numeric} "
            f"(a={a}, b={b}, t={cl['t']})"
        )
    return {
        "equal": numeric,
        "witness": distinct,
        "dim_h": cl["dim_h"],
        "dim_m": cl["dim_m"],
    }
