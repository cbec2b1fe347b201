"""Beta-expansion self-similar systems.

Points are sums sum_k omega_k / beta^k over digit sequences omega_k drawn
from a subshift with digits {0, ..., a-1}, beta >= a.  Distinct digit tuples
keep their expansions at least beta^-n apart, which turns admissible-word
counts into covering-number lower bounds; the system's mean dimension equals
the subshift entropy divided by log beta, and every map S_omega(x) =
(x + omega) / beta contracts all the product metrics by exactly 1/beta.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConstructionFailure, DomainError, ResourceLimit
from .limits import point_budget, word_budget
from . import symbolic
from .metrics import (
    LINF_FINITE,
    SUM_WEIGHTED_ABS,
    MetricDescriptor,
    PointCloud,
    distance,
)

_RATIONAL_DENOM_CAP = 1 << 30  # beta with a denominator this small goes exact


@dataclass(frozen=True)
class BetaSystemSpec:
    a: int
    beta: float
    omega: symbolic.SubshiftSpec

    def __post_init__(self):
        if self.a < 2:
            raise DomainError("digit alphabet needs a >= 2")
        if self.beta < self.a:
            raise DomainError("need beta >= a")
        if self.omega.alphabet != self.a:
            raise DomainError("omega must live on the digit alphabet")

    @property
    def c(self) -> float:
        return 1.0 / self.beta

    def diameter_bound(self) -> float:
        """Strict upper bound for the diameter under the weighted-abs metric."""
        return (self.a - 1) / (self.beta - 1) + 1e-9


def beta_system(a: int, beta: float, omega: symbolic.SubshiftSpec | None = None) -> BetaSystemSpec:
    return BetaSystemSpec(a=a, beta=beta, omega=omega or symbolic.full_shift(a))


def _beta_as_fraction(beta: float) -> Fraction | None:
    frac = Fraction(beta).limit_denominator(_RATIONAL_DENOM_CAP)
    if float(frac) == beta:
        return frac
    return None


def min_gap(a: int, beta: float, n: int, budget: int | None = None) -> float:
    """Exact minimum of |sum u_k beta^-k - sum v_k beta^-k| over distinct
    digit tuples of length n.

    Exhaustive over a^n tuples via a sort; exact rational arithmetic whenever
    beta is a representable rational, otherwise doubles with outward 1e-12
    rounding.  The digit-separation bound guarantees the result >= beta^-n.
    """
    if not (2 <= a <= beta):
        raise DomainError("need 2 <= a <= beta")
    if n < 1:
        raise DomainError("n must be >= 1")
    cap = word_budget(budget)
    if a**n > cap:
        raise ResourceLimit(f"{a}^{n} tuples exceed budget {cap}")
    frac = _beta_as_fraction(beta)
    if frac is not None:
        # with beta = p/q, sum u_k beta^-k = (sum u_k q^k p^(n-k)) / p^n: the
        # minimum gap is an exact integer difference over the denominator p^n
        p, q = frac.numerator, frac.denominator
        scaled = sorted(
            sum(u * q**k2 * p ** (n - k2) for k2, u in zip(range(1, n + 1), tup))
            for tup in itertools.product(range(a), repeat=n)
        )
        best = min(b2 - a2 for a2, b2 in zip(scaled, scaled[1:]))
        return best / float(p) ** n
    values = np.sort(
        np.array(
            [
                math.fsum(u * beta ** -(k + 1) for k, u in enumerate(tup))
                for tup in itertools.product(range(a), repeat=n)
            ]
        )
    )
    return float(np.diff(values).min()) - 1e-12


@dataclass(frozen=True)
class CoveringFamily:
    points: PointCloud
    count: int
    n_words: int  # |pi_N(Omega)|
    eps: float  # beta^-n, the certified linf separation over the first N coords
    dyn_eps: float  # beta^-n / 2, the certified separation under the shift metric


def covering_lower_bound(
    spec: BetaSystemSpec,
    n_coords: int,
    n_layers: int,
    tol: float = 1e-9,
    budget: int | None = None,
) -> CoveringFamily:
    """The separated family {sum_{k<=n} omega_k / beta^k + anchor tail}.

    One point per tuple of admissible N-words; count = |pi_N(Omega)|^n.  Any
    two points differ in some digit column within the first N coordinates, so
    their coordinatewise gap there is >= beta^-n: the family is beta^-n
    separated in linf over the first N coordinates (and beta^-n / 2 separated
    under the dynamical weighted metric, whose leading weight is 1/2).
    """
    omega = symbolic.ensure_pruned(spec.omega)
    aut = omega.automaton
    words = aut.enumerate_words(n_coords, budget)
    count = len(words) ** n_layers
    if count > point_budget(budget):
        raise ResourceLimit(f"family of {count} points exceeds budget")

    depth = n_coords + n_layers * max(1, math.ceil(math.log2(1.0 / tol)))
    depth = min(depth, n_coords + 80)
    anchor = aut.lex_least_stream(depth)
    streams = [aut.lex_least_extension(w, depth) for w in words]

    beta = spec.beta
    pts = []
    digit_rows = []
    for combo in itertools.product(range(len(words)), repeat=n_layers):
        rows = [streams[i] for i in combo]
        coords = [
            math.fsum(rows[k][j] * beta ** -(k + 1) for k in range(n_layers))
            + anchor[j] * (beta**-n_layers) / (beta - 1.0)
            for j in range(depth)
        ]
        pts.append(coords)
        digit_rows.append(tuple(rows))
    eps = beta**-n_layers
    trunc = (spec.a - 1) / (beta - 1) * 2.0 ** -(depth - n_coords)
    cloud = PointCloud(
        points=np.array(pts),
        metric=MetricDescriptor(kind=LINF_FINITE, iterates=n_coords),
        truncation_error=trunc,
        payload={"digits": digit_rows, "anchor": anchor, "depth": depth},
    )
    return CoveringFamily(
        points=cloud,
        count=count,
        n_words=len(words),
        eps=eps,
        dyn_eps=eps / 2.0,
    )


def self_similar_dims(spec: BetaSystemSpec, n_max: int = 12) -> dict:
    """Common mean Hausdorff / metric mean dimension of the system.

    Equal to entropy(Omega) / log beta; the similarity bound
    entropy(Omega) / log(1/c) coincides because the contraction ratio is
    1/beta.  For non-digit driving systems only the upper bound survives.
    """
    rep = symbolic.entropy(spec.omega, n_max)
    h = rep.best_estimate
    value = h / math.log(spec.beta)
    return {
        "mdim": value,
        "similarity_bound": h / math.log(1.0 / spec.c),
        "entropy": h,
        "exact": rep.exact,
        "note": "mean Hausdorff and metric mean dimensions coincide",
    }


def contraction_factor(
    spec: BetaSystemSpec, x, y, omega_stream, n_window: int
) -> tuple[float, float]:
    """(d_N(S x, S y), c * d_N(x, y)) for the map S(x) = (x + omega) / beta."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = np.asarray(omega_stream, dtype=float)
    metric = MetricDescriptor(kind=SUM_WEIGHTED_ABS, iterates=n_window)
    sx = (x + w) / spec.beta
    sy = (y + w) / spec.beta
    return distance(sx, sy, metric), spec.c * distance(x, y, metric)


def ball_similarity_check(
    spec: BetaSystemSpec,
    n_window: int,
    eps: float,
    p_digits,
    sample_digits,
    tol: float = 1e-9,
) -> dict:
    """Contract the whole system into the eps-ball around p and verify it.

    phi composes k digit maps with c^k A <= eps < c^(k-1) A, following p's own
    digit rows; phi maps every point into B_eps(p, d_N) and expands distances
    by exactly c^k >= c eps / A.  Digit rows must be admissible prefixes of
    the driving subshift, otherwise the requested cell does not exist.
    """
    omega = symbolic.ensure_pruned(spec.omega)
    aut = omega.automaton
    a_bound = spec.diameter_bound()
    beta = spec.beta
    c = spec.c

    k = 0
    while c**k * a_bound > eps:
        k += 1
    # now c^k A <= eps; if eps >= A then k == 0 and phi is the identity

    p_digits = [tuple(row) for row in p_digits]
    depth = len(p_digits[0]) if p_digits else 0
    if k > len(p_digits):
        raise ConstructionFailure(
            f"need {k} digit layers to reach the cell of p, got {len(p_digits)}"
        )
    for i in range(k):
        if not _admissible_prefix(aut, p_digits[i]):
            raise ConstructionFailure(
                f"digit layer {i} of p is not an admissible word"
            )

    def point_of(rows):
        rows = [tuple(r) for r in rows]
        return np.array(
            [
                math.fsum(rows[m][j] * beta ** -(m + 1) for m in range(len(rows)))
                for j in range(depth)
            ]
        )

    p_point = point_of(p_digits)

    def phi(x):
        out = np.asarray(x, dtype=float)
        for i in reversed(range(k)):
            out = (out + np.array(p_digits[i], dtype=float)) / beta
        return out

    metric = MetricDescriptor(kind=SUM_WEIGHTED_ABS, iterates=n_window)
    sample_pts = [point_of(rows) for rows in sample_digits]
    images = [phi(x) for x in sample_pts]

    radius_ok = True
    worst_radius = 0.0
    for img in images:
        d = distance(img, p_point, metric)
        worst_radius = max(worst_radius, d)
        radius_ok = radius_ok and d <= eps + tol

    # c^k > c eps / A whenever the bracketing picked k >= 1; for eps >= A the
    # identity map is its own (trivial) expansion certificate
    expansion = min(c**k, c * eps / a_bound)
    expansion_ok = True
    worst_ratio = math.inf
    for (x, ix), (y, iy) in itertools.combinations(zip(sample_pts, images), 2):
        base = distance(x, y, metric)
        mapped = distance(ix, iy, metric)
        if base > 0:
            worst_ratio = min(worst_ratio, mapped / base)
        expansion_ok = expansion_ok and mapped >= expansion * base - tol

    return {
        "k": k,
        "eps": eps,
        "diameter_bound": a_bound,
        "radius_ok": radius_ok,
        "worst_radius": worst_radius,
        "expansion_ok": expansion_ok,
        "required_ratio": expansion,
        "worst_ratio": worst_ratio if worst_ratio != math.inf else c**k,
        "ok": radius_ok and expansion_ok,
    }


def _admissible_prefix(aut, word) -> bool:
    state = aut.root
    for label in word:
        if label not in aut.succ[state]:
            return False
        state = aut.succ[state][label]
    return True
