"""Brute-force metric geometry on finite truncations.

Covering/packing brackets, scale-level Hausdorff exponents, the anisotropic
box machinery for carpet systems, product-measure mass checks, and the
inverse-square-measure construction on the reciprocal sequence space
{0, 1, 1/2, 1/3, ...}^N.  Everything here is an independent check of the
closed forms computed elsewhere in the package: certified brackets, exact
integer certificates, or double precision with outward 1e-12 slack.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateScale,
    DomainError,
    HypothesisViolated,
    ParameterOverflow,
    ResourceLimit,
)
from .limits import point_budget, word_budget
from . import weighted
from .carpet import CarpetSpec, floor_w_m
from .metrics import (
    LINF_FINITE,
    MetricDescriptor,
    PointCloud,
    check_scale,
    pairwise_to_point,
)

SLACK = 1e-12


# ---------------------------------------------------------------------------
# Covering-number brackets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoverBounds:
    """lower <= #(cloud, d, eps) <= upper.

    lower: size of a greedily built maximal eps-separated subset (a set of
    diameter < eps contains at most one of its points).  upper: number of
    greedy centers whose (eps/2 - slack)-balls cover the cloud; each ball has
    diameter < eps.
    """

    lower: int
    upper: int
    separated: tuple
    centers: tuple


def covering_bounds(cloud: PointCloud, eps: float) -> CoverBounds:
    check_scale(cloud, eps)
    n = len(cloud)
    radius = eps / 2.0 - SLACK
    separated: list[int] = []
    centers: list[int] = []
    sep_pts: list = []
    cen_pts: list = []
    for i in range(n):
        p = cloud.points[i]
        if not sep_pts:
            separated.append(i)
            sep_pts.append(p)
        else:
            dists = pairwise_to_point(np.array(sep_pts), p, cloud.metric)
            if float(dists.min()) >= eps:
                separated.append(i)
                sep_pts.append(p)
        if not cen_pts:
            centers.append(i)
            cen_pts.append(p)
        else:
            dists = pairwise_to_point(np.array(cen_pts), p, cloud.metric)
            if float(dists.min()) > radius:
                centers.append(i)
                cen_pts.append(p)
    return CoverBounds(
        lower=len(separated),
        upper=len(centers),
        separated=tuple(separated),
        centers=tuple(centers),
    )


def exact_min_cover(cloud: PointCloud, eps: float) -> int:
    """Exact minimum number of diameter-<eps subsets covering the cloud.

    Exponential set-cover DP; restricted to clouds of at most 12 points.
    """
    n = len(cloud)
    if n > 12:
        raise ResourceLimit("exact cover limited to 12 points")
    check_scale(cloud, eps)
    dist = cloud.pairwise()
    ok = []
    for mask in range(1 << n):
        idx = [i for i in range(n) if mask >> i & 1]
        good = all(dist[i][j] < eps for i, j in itertools.combinations(idx, 2))
        ok.append(good)
    full = (1 << n) - 1
    memo = {0: 0}

    def solve(mask: int) -> int:
        if mask in memo:
            return memo[mask]
        low = (mask & -mask).bit_length() - 1
        best = n + 1
        sub = mask
        while sub:
            if sub >> low & 1 and ok[sub]:
                best = min(best, 1 + solve(mask & ~sub))
            sub = (sub - 1) & mask
        memo[mask] = best
        return best

    return solve(full)


# ---------------------------------------------------------------------------
# Scale-level Hausdorff exponent of a finite cover
# ---------------------------------------------------------------------------


def hausdorff_upper_at_scale(diameters, eps: float, tol: float = 1e-10) -> float:
    """The root s* of sum_i diam_i^s = 1 (0 if a single set suffices).

    Every diameter must lie in (0, min(1, eps)); then s -> sum diam^s is
    strictly decreasing, and the value certifies dimh(., d, eps) <= s* for any
    space covered by sets of these diameters.
    """
    diams = sorted((float(d) for d in diameters), reverse=True)
    if not diams:
        raise DomainError("cover must be nonempty")
    for d in diams:
        if not (0.0 < d < 1.0 and d < eps):
            raise DomainError(f"diameter {d} outside (0, min(1, eps))")
    if len(diams) == 1:
        return 0.0

    def total(s: float) -> float:
        return math.fsum(d**s for d in diams)

    lo, hi = 0.0, 1.0
    while total(hi) >= 1.0:
        hi *= 2.0
        if hi > 1e9:
            raise DomainError("exponent search diverged")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if total(mid) >= 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Anisotropic boxes for carpet systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QBox:
    """Cylinder of carpet points with leading digit layers fixed.

    The first `floor_wm` layers fix full (u, v) digit words, layers up to m
    fix only the v word; the box is the anchor corner plus
    [0, a^-floor_wm]^N x [0, b^-m]^N intersected with the space.
    """

    n: int
    m: int
    floor_wm: int
    x_layers: tuple  # u-words, length floor_wm
    y_layers: tuple  # v-words, length m
    anchor: tuple  # (x corner, y corner), each length n
    diam_bound: float


@dataclass(frozen=True)
class QBoxFamily:
    spec: CarpetSpec
    n: int
    m: int
    floor_wm: int
    count: int  # enumerated
    count_formula: int  # |Omega|_N|^t * |Omega'|_N|^(M-t)
    diam_bound: float  # a^-t, certified < a b^-M
    diam_certified: bool  # exact integer check b^M < a^(t+1)
    separation_certified: bool  # exact digit argument for >= b^-M
    omega_words: tuple
    image_words: tuple
    section: dict  # v-word -> least u-word with (u, v) admissible
    anchor_pair: tuple  # (u-word, v-word), least element of Omega|_N

    def min_separation(self) -> float:
        return float(self.spec.b) ** (-self.m)

    def iter_boxes(self):
        a, b = self.spec.a, self.spec.b
        n, m, t = self.n, self.m, self.floor_wm
        for pair_layers in itertools.product(self.omega_words, repeat=t):
            for v_layers in itertools.product(self.image_words, repeat=m - t):
                x_layers = tuple(p[0] for p in pair_layers)
                y_layers = tuple(p[1] for p in pair_layers) + v_layers
                anchor_x = tuple(
                    math.fsum(x_layers[i][j] * a ** -(i + 1) for i in range(t))
                    for j in range(n)
                )
                anchor_y = tuple(
                    math.fsum(y_layers[i][j] * b ** -(i + 1) for i in range(m))
                    for j in range(n)
                )
                yield QBox(
                    n=n,
                    m=m,
                    floor_wm=t,
                    x_layers=x_layers,
                    y_layers=y_layers,
                    anchor=(anchor_x, anchor_y),
                    diam_bound=self.diam_bound,
                )

    def witness_cloud(self, cap: int | None = None, depth_extra: int = 45) -> PointCloud:
        """The separated family: one point per box, pairwise linf >= b^-m."""
        cap = point_budget(cap)
        if self.count > cap:
            raise ResourceLimit(
                f"witness family has {self.count} points, budget {cap}"
            )
        a, b = self.spec.a, self.spec.b
        n, m, t = self.n, self.m, self.floor_wm
        depth = m + depth_extra
        xi_u, xi_v = self.anchor_pair
        pts = []
        digits = []
        for pair_layers in itertools.product(self.omega_words, repeat=t):
            for v_layers in itertools.product(self.image_words, repeat=m - t):
                u_rows = [p[0] for p in pair_layers] + [
                    self.section[v] for v in v_layers
                ]
                v_rows = [p[1] for p in pair_layers] + list(v_layers)
                u_rows += [xi_u] * (depth - m)
                v_rows += [xi_v] * (depth - m)
                x = [
                    math.fsum(u_rows[i][j] * a ** -(i + 1) for i in range(depth))
                    for j in range(n)
                ]
                y = [
                    math.fsum(v_rows[i][j] * b ** -(i + 1) for i in range(depth))
                    for j in range(n)
                ]
                pts.append(x + y)  # linf over the 2N flattened coordinates
                digits.append((tuple(u_rows[:m]), tuple(v_rows[:m])))
        cloud = PointCloud(
            points=np.array(pts),
            metric=MetricDescriptor(kind=LINF_FINITE),
            truncation_error=float(b) ** (-depth),
            payload={"digits": digits, "depth": depth},
        )
        return cloud


def _lex_least_pair(words):
    return min(words)


def qbox_family(
    spec: CarpetSpec, n: int, m: int, budget: int | None = None
) -> QBoxFamily:
    """Enumerate the level-(n, m) box family and certify its geometry.

    The enumerated box count must equal |Omega|_N|^t * |Omega'|_N|^(M-t) with
    t = floor(M log_a b); every box has linf diameter <= a^-t < a b^-M, and
    the anchored point family is pairwise b^-M separated.  The diameter and
    separation facts are certified by exact integer arithmetic on the digit
    structure; distances on materialized points are double precision.
    """
    a, b = spec.a, spec.b
    t = floor_w_m(a, b, m)
    cap = word_budget(budget)

    # decode admissible N-words of the product system into (u-word, v-word)
    from .symbolic import ensure_pruned

    omega_spec = ensure_pruned(spec.system.omega)
    label_words = omega_spec.automaton.enumerate_words(n, budget)
    pairs = []
    for word in label_words:
        u = tuple(l // b for l in word)
        v = tuple(l % b for l in word)
        pairs.append((u, v))
    pairs.sort()
    image_words = sorted({v for _, v in pairs})
    section = {}
    for u, v in pairs:  # sorted: first hit per v is the least u-word
        if v not in section:
            section[v] = u

    count_formula = len(pairs) ** t * len(image_words) ** (m - t)
    if count_formula > cap:
        raise ResourceLimit(f"box family of size {count_formula} exceeds budget {cap}")

    count = 0
    for _ in itertools.product(range(len(pairs)), repeat=t):
        for _ in itertools.product(range(len(image_words)), repeat=m - t):
            count += 1

    # diameter: a^-t < a * b^-m  <=>  b^m < a^(t+1), exact integers
    diam_certified = b**m < a ** (t + 1) and a**t <= b**m
    # separation: differing v digits give a nonzero integer multiple of b^-m;
    # equal v parts force equal section/anchor layers, so differing u digits
    # give a nonzero integer multiple of a^-t >= b^-m (by a^t <= b^m).
    separation_certified = a**t <= b**m

    return QBoxFamily(
        spec=spec,
        n=n,
        m=m,
        floor_wm=t,
        count=count,
        count_formula=count_formula,
        diam_bound=float(a) ** (-t),
        diam_certified=diam_certified,
        separation_certified=separation_certified,
        omega_words=tuple(pairs),
        image_words=tuple(image_words),
        section=section,
        anchor_pair=_lex_least_pair(pairs),
    )


def _witness_point(family: QBoxFamily, pair_choice, v_choice, depth: int):
    """Coordinates (x then y, flattened) of one anchored family point."""
    a, b = family.spec.a, family.spec.b
    n, m, t = family.n, family.m, family.floor_wm
    xi_u, xi_v = family.anchor_pair
    u_rows = [family.omega_words[i][0] for i in pair_choice]
    v_rows = [family.omega_words[i][1] for i in pair_choice]
    for i in v_choice:
        v = family.image_words[i]
        u_rows.append(family.section[v])
        v_rows.append(v)
    u_rows += [xi_u] * (depth - m)
    v_rows += [xi_v] * (depth - m)
    x = [
        math.fsum(u_rows[i][j] * a ** -(i + 1) for i in range(depth))
        for j in range(n)
    ]
    y = [
        math.fsum(v_rows[i][j] * b ** -(i + 1) for i in range(depth))
        for j in range(n)
    ]
    return x + y


def verify_family_separation(
    family: QBoxFamily,
    full_pair_cap: int = 3000,
    samples: int = 2000,
    seed: int = 0,
) -> dict:
    """Observed pairwise linf separation of the witness family.

    All pairs are checked when the family is small.  For large families a
    seeded sample is measured instead, mixing random pairs with single-layer
    perturbations (the pairs that attain the minimum).  The exact-integer
    certificate in the family record covers every pair regardless.
    """
    from .metrics import distance as metric_distance

    target = family.min_separation()
    if family.count <= full_pair_cap:
        cloud = family.witness_cloud()
        observed = cloud.min_pairwise()
        mode = "all_pairs"
    else:
        rng = random.Random(seed)
        n_pairs = len(family.omega_words)
        n_image = len(family.image_words)
        t, m = family.floor_wm, family.m
        depth = m + 45
        metric = MetricDescriptor(kind=LINF_FINITE)
        observed = math.inf
        for _ in range(samples):
            pc1 = tuple(rng.randrange(n_pairs) for _ in range(t))
            vc1 = tuple(rng.randrange(n_image) for _ in range(m - t))
            if rng.random() < 0.5:
                pc2 = tuple(rng.randrange(n_pairs) for _ in range(t))
                vc2 = tuple(rng.randrange(n_image) for _ in range(m - t))
            else:
                # perturb exactly one layer; these pairs realize the minimum
                pc2, vc2 = list(pc1), list(vc1)
                if t > 0 and (m == t or rng.random() < 0.5):
                    pos = rng.randrange(t)
                    pc2[pos] = (pc2[pos] + 1 + rng.randrange(n_pairs - 1)) % n_pairs
                else:
                    pos = rng.randrange(m - t)
                    vc2[pos] = (vc2[pos] + 1 + rng.randrange(n_image - 1)) % n_image
                pc2, vc2 = tuple(pc2), tuple(vc2)
            if (pc1, vc1) == (pc2, vc2):
                continue
            p = _witness_point(family, pc1, vc1, depth)
            q = _witness_point(family, pc2, vc2, depth)
            observed = min(observed, metric_distance(p, q, metric))
        mode = "sampled_pairs"
    return {
        "observed_min": observed,
        "required": target,
        "mode": mode,
        "ok": observed >= target - SLACK,
        "certified": family.separation_certified,
    }


def qbox_cover_exponent(family: QBoxFamily, eps: float | None = None) -> float:
    """Upper exponent from covering the truncated carpet space by the boxes."""
    a, b = family.spec.a, family.spec.b
    if eps is None:
        eps = float(a) * float(b) ** (-family.m) * (1.0 + 1e-9)
    return hausdorff_upper_at_scale(
        [family.diam_bound] * family.count, eps
    )


def covering_sandwich(spec: CarpetSpec, n: int, m: int, greedy_cap: int = 3000) -> dict:
    """Two-sided covering-number bracket at scales (b^-M, a b^-M).

    The witness family gives #(X|_N, linf, b^-M) >= count; the box cover
    gives #(X|_N, linf, a b^-M) <= count.  Both normalized by N M log b, the
    common value log(count)/(N M log b) brackets the metric mean dimension at
    finite size.
    """
    fam = qbox_family(spec, n, m)
    log_b = math.log(spec.b)
    ratio = math.log(fam.count) / (n * m * log_b)
    greedy = None
    if fam.count <= greedy_cap:
        cloud = fam.witness_cloud()
        eps = fam.min_separation()
        bounds = covering_bounds(cloud, eps)
        greedy = {"lower": bounds.lower, "upper": bounds.upper, "eps": eps}
        if bounds.lower != fam.count:
            raise AssertionError(
                f"greedy separated set lost points: {bounds.lower} < {fam.count}"
            )
    return {
        "n": n,
        "m": m,
        "count": fam.count,
        "ratio": ratio,
        "lower_ratio": ratio,  # from the separated family at eps = b^-M
        "upper_ratio": ratio,  # from the box cover at eps = a b^-M
        "separation": fam.separation_certified,
        "greedy": greedy,
    }


# ---------------------------------------------------------------------------
# Product measures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProductMeasure:
    """IID product of one coordinate distribution over finitely many tracked
    coordinates; untracked coordinates carry full mass (the remainder)."""

    values: tuple
    masses: tuple

    def __post_init__(self):
        if abs(math.fsum(self.masses) - 1.0) > 1e-12:
            raise DomainError("coordinate masses must sum to 1 within 1e-12")

    def coordinate_mass(self, allowed) -> float:
        allowed = set(allowed)
        return math.fsum(m for v, m in zip(self.values, self.masses) if v in allowed)

    def cylinder_mass(self, constraints) -> float:
        """constraints: iterable of per-coordinate allowed sets (None = free)."""
        total = 1.0
        for c in constraints:
            if c is None:
                continue
            total *= self.coordinate_mass(c)
        return total


# ---------------------------------------------------------------------------
# Mass-distribution certificate for carpet boxes
# ---------------------------------------------------------------------------


def mass_distribution_check(
    spec: CarpetSpec,
    n: int,
    m_range,
    s: float,
    identity_samples: int = 100,
    seed: int = 0,
    budget: int | None = None,
) -> dict:
    """Box-granular mass-distribution certificate at exponent s.

    The product measure built from f_N(u, v) = t_N(v)^(w-1) / Z_N gives each
    level-M box the mass mu(P) = prod f_N * prod_{m > floor(wM)} t_N(y_m).
    The check verifies, for every box and every M in m_range, that
    mu(P) <= (a b^-M)^s, the scale-level mass bound that lower-bounds the
    Hausdorff exponent at the box scale; it also confirms the exact product
    identity for (1/NM) log mu(P) on sampled digit sequences and that the
    measure is a probability measure.
    """
    a, b = spec.a, spec.b
    w = spec.w
    cap = word_budget(budget)

    table = weighted.fiber_counts(spec.system, n, budget)
    fibers = table.level(n)  # v-word -> t_N(v)
    t_values = sorted(fibers.values(), reverse=True)
    z_n = math.fsum(tv**w for tv in t_values)
    log_z = math.log(z_n)

    # normalization: sum over Omega|_N of f_N = sum_v t^w / Z = 1
    norm = math.fsum(tv**w for tv in t_values) / z_n
    if abs(norm - 1.0) > 1e-12:
        raise AssertionError(f"f_N normalization off: {norm}")

    log_t = {v: math.log(tv) for v, tv in fibers.items()}
    v_words = sorted(fibers)
    rng = random.Random(seed)

    per_m = {}
    all_passed = True
    for m in m_range:
        t_floor = floor_w_m(a, b, m)
        if len(v_words) ** m > cap:
            raise ResourceLimit(f"{len(v_words)}^{m} y-sequences exceed budget")
        diam = float(a) * float(b) ** (-m)
        log_diam = math.log(a) - m * math.log(b)
        min_s_box = math.inf
        worst = None
        total_mass = 0.0
        n_boxes = 0
        for y_seq in itertools.product(v_words, repeat=m):
            log_mu = -m * log_z + math.fsum(
                (w - 1.0) * log_t[v] for v in y_seq
            ) + math.fsum(log_t[v] for v in y_seq[t_floor:])
            s_box = log_mu / log_diam
            if s_box < min_s_box:
                min_s_box = s_box
                worst = y_seq
            multiplicity = 1
            for v in y_seq[:t_floor]:
                multiplicity *= fibers[v]
            total_mass += multiplicity * math.exp(log_mu)
            n_boxes += multiplicity
        passed = min_s_box >= s - SLACK
        all_passed = all_passed and passed
        per_m[m] = {
            "floor_wm": t_floor,
            "diam_bound": diam,
            "largest_s": min_s_box,
            "passed": passed,
            "worst_y": worst,
            "box_count": n_boxes,
            "total_mass": total_mass,
            "mass_ok": abs(total_mass - 1.0) <= 1e-9,
        }

    # product identity on sampled digit sequences
    m_max = max(m_range)
    identity_max_err = 0.0
    for _ in range(identity_samples):
        m = rng.choice(list(m_range))
        t_floor = floor_w_m(a, b, m)
        y_seq = [rng.choice(v_words) for _ in range(m)]
        log_mu = -m * log_z + math.fsum(
            (w - 1.0) * log_t[v] for v in y_seq
        ) + math.fsum(log_t[v] for v in y_seq[t_floor:])
        lhs = log_mu / (n * m)
        s_m = math.fsum(log_t[v] for v in y_seq) / n
        s_t = math.fsum(log_t[v] for v in y_seq[:t_floor]) / n
        rhs = -log_z / n + w * (s_m / m - s_t / (w * m))
        identity_max_err = max(identity_max_err, abs(lhs - rhs))

    return {
        "w": w,
        "z_n": z_n,
        "s": s,
        "per_m": per_m,
        "all_passed": all_passed,
        "identity_max_err": identity_max_err,
        "identity_ok": identity_max_err <= 1e-10,
    }


# ---------------------------------------------------------------------------
# Measure-based upper bound verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WitnessSet:
    """A Borel witness: diameter, mass, and the sample points it contains."""

    diam: float
    mass: float
    covers: frozenset


def measure_cover_upper(
    n_points: int, witnesses, eps: float, c: float, s: float
) -> dict:
    """Check the hypotheses of the measure-to-dimension upper bound.

    Requires 6 eps^c < 1; every point must lie in a witness set A with
    0 < diam A < eps/6 and mass(A) >= (diam A)^s.  A passing verdict
    certifies dimh(., d, eps) <= (1 + c) s for the sampled space.
    """
    if not (6.0 * eps**c < 1.0):
        raise HypothesisViolated(f"6 eps^c = {6.0 * eps ** c} is not < 1")
    covered = set()
    margin = math.inf
    for k, wset in enumerate(witnesses):
        if not (0.0 < wset.diam < eps / 6.0):
            raise HypothesisViolated(
                f"witness {k}: diam {wset.diam} outside (0, eps/6)"
            )
        if wset.mass < wset.diam**s - SLACK:
            raise HypothesisViolated(
                f"witness {k}: mass {wset.mass} < diam^s {wset.diam ** s}"
            )
        margin = min(margin, wset.mass - wset.diam**s)
        covered.update(wset.covers)
    missing = set(range(n_points)) - covered
    if missing:
        raise HypothesisViolated(f"point {min(missing)} not covered by any witness")
    return {
        "ok": True,
        "dimension_bound": (1.0 + c) * s,
        "eps": eps,
        "mass_margin": margin,
    }


# ---------------------------------------------------------------------------
# The reciprocal sequence space {0, 1, 1/2, 1/3, ...}^N
# ---------------------------------------------------------------------------

INV_SQ_WEIGHT = 3.0 / math.pi**2  # atom at 1/j has mass (3/pi^2) / j^2; atom at 0 has 1/2


def reciprocal_atoms(n_cap: int) -> list[float]:
    """The truncated point set {0} U {1/j : j <= n_cap}, ascending."""
    return [0.0] + [1.0 / j for j in range(n_cap, 0, -1)]


def inverse_square_mass(lo: float, hi: float, enum_cap: int = 1_000_000) -> float:
    """Certified lower bound on the inverse-square measure of [lo, hi].

    Atoms sit at 0 (mass 1/2) and 1/j (mass (3/pi^2)/j^2); ranges wider than
    enum_cap atoms fall back to the integral tail bound, which only
    under-counts.  The full-line mass is exactly 1 by the zeta(2) identity.
    """
    if hi < lo:
        return 0.0
    total = 0.0
    if lo <= 0.0 <= hi:
        total += 0.5
        if hi > 0.0:
            j_min = _least_index_at_most(hi)
            # all atoms 1/j <= hi: enumerate a prefix, bound the rest
            j_stop = j_min + enum_cap
            total += INV_SQ_WEIGHT * math.fsum(
                1.0 / (j * j) for j in range(j_min, j_stop)
            )
            total += INV_SQ_WEIGHT / j_stop  # integral tail: sum_{j>=J} j^-2 >= 1/J
        return min(total, 1.0)
    if hi <= 0.0:
        return 0.0
    j_min = _least_index_at_most(hi)
    j_max = _greatest_index_at_least(lo)
    if j_max < j_min:
        return 0.0
    if j_max - j_min + 1 <= enum_cap:
        return INV_SQ_WEIGHT * math.fsum(
            1.0 / (j * j) for j in range(j_min, j_max + 1)
        )
    # integral lower bound: sum_{j=j0}^{j1} j^-2 >= 1/j0 - 1/(j1 + 1)
    return INV_SQ_WEIGHT * (1.0 / j_min - 1.0 / (j_max + 1))


def _least_index_at_most(hi: float) -> int:
    """Least j >= 1 with float(1/j) <= hi.

    ceil(1/hi) can land one past the answer when 1/hi rounds up past an
    integer (1/(1/j) > j happens for many j), so start safely below and walk
    up on the exact float comparison.
    """
    j = max(1, math.ceil(1.0 / hi) - 2)
    while 1.0 / j > hi:
        j += 1
    return j


def _greatest_index_at_least(lo: float) -> int:
    """Greatest j >= 1 with float(1/j) >= lo (0 if none)."""
    j = max(1, math.floor(1.0 / lo) + 2)
    while j >= 1 and 1.0 / j < lo:
        j -= 1
    return j


def reciprocal_witness_delta(m: int, eps: float) -> float:
    """The interval width parameter: strictly below eps/12, a^m/8, 2^-(m/3+1)."""
    if not (0.0 < eps < 1.0 / 6.0):
        raise DomainError("eps must lie in (0, 1/6)")
    bound = min(eps / 12.0, INV_SQ_WEIGHT**m / 8.0, 0.5 ** (m / 3.0 + 1.0))
    return bound * (1.0 - 1e-9)


def reciprocal_tail_depth(m: int, delta: float) -> int:
    """Least L with 2^-L < delta^(m^m), computed in log space."""
    exponent = float(m**m) * math.log2(1.0 / delta)
    return int(math.floor(exponent)) + 1


def reciprocal_product_witness(
    x,
    n_window: int,
    m: int,
    eps: float,
    l_cap: int = 200_000,
    enum_cap: int = 1_000_000,
) -> dict:
    """Product-interval mass witness around a point of the reciprocal space.

    Partitions the first N + L coordinates by the magnitude scale of x_n
    (thresholds delta^(m^k)), picks the thinnest class, and takes the box
    prod [x_n - r, x_n] with r at that class's scale.  Per coordinate the
    inverse-square measure of the interval is at least (2r)^(3/m) (twice over
    on the thin class), giving mass >= diam^(6 (N+L) / m) with
    diam <= r + 2^-L < 2r.
    """
    delta = reciprocal_witness_delta(m, eps)
    tail = reciprocal_tail_depth(m, delta)
    if tail > l_cap:
        raise ParameterOverflow(
            f"tail depth L = {tail} exceeds the cap {l_cap}; the tail bound "
            f"2^-L < delta^(m^m) is certified in log space only"
        )
    n_total = n_window + tail
    x = [float(v) for v in x]
    if len(x) < n_total:
        raise DomainError(f"need {n_total} coordinates, got {len(x)}")
    x = x[:n_total]

    log2_delta = math.log2(delta)
    if float(m**m) * log2_delta < -1000.0:
        raise ParameterOverflow("delta^(m^m) underflows double precision")
    thresholds = [delta ** (m**k) for k in range(m + 1)]  # k = 0..m

    def class_of(v: float) -> int:
        if v > delta:
            return 0
        for k in range(1, m + 1):
            if thresholds[k] < v <= thresholds[k - 1]:
                return k
        return m + 1

    classes = [class_of(v) for v in x]
    sizes = [classes.count(k) for k in range(m + 2)]
    limit = n_total / (m + 1)
    m0 = next(k for k in range(m + 1) if sizes[k] <= limit)
    r = delta ** (m**m0)
    if r == 0.0:
        raise ParameterOverflow("interval width underflows double precision")

    mass = 1.0
    cases = []
    for v in x:
        lo = v - r
        mass *= inverse_square_mass(lo, v, enum_cap)
        k = class_of(v)
        cases.append("zero_atom" if k > m0 else ("thin_class" if k == m0 else "large_value"))
    diam_bound = r + 2.0**-tail if tail < 1074 else r
    exponent = 6.0 * n_total / m
    required = diam_bound**exponent
    return {
        "m": m,
        "m0": m0,
        "r": r,
        "delta": delta,
        "tail_depth": tail,
        "n_total": n_total,
        "diam_bound": diam_bound,
        "mass": mass,
        "exponent": exponent,
        "required": required,
        "passed": mass >= required - SLACK,
        "cases": cases,
        "class_sizes": sizes,
    }


def sample_reciprocal_point(n_coords: int, n_cap: int, seed: int = 0) -> list[float]:
    """Seeded sample from the truncated space, coordinates iid inverse-square."""
    rng = random.Random(seed)
    out = []
    for _ in range(n_coords):
        if rng.random() < 0.5:
            out.append(0.0)
        else:
            # inverse-square index sampling by inversion: P(J >= j) ~ 1/j
            u = rng.random()
            j = min(n_cap, max(1, int(1.0 / (1.0 - u * (1.0 - 1.0 / (n_cap + 1.0))))))
            out.append(1.0 / j)
    return out


def reciprocal_set_dims(n_cap: int, eps_list, probe_s: float = 0.05) -> dict:
    """Scale-level dimensions of the one-coordinate reciprocal set.

    Covering numbers are exact (optimal interval sweep on sorted points);
    dimm(K, eps) = log # / log(1/eps).  The scale Hausdorff exponent is 0 at
    every scale: the cover {[0, delta]} plus singletons has weight sum
    delta^s < 1 for every s > 0 (singletons contribute 0^s = 0).
    """
    points = reciprocal_atoms(n_cap)
    out: dict = {"minkowski_scale": {}, "hausdorff_scale_upper": {}, "witness": {}}
    out["truncation_error"] = 1.0 / n_cap
    for eps in eps_list:
        # scales below the truncation resolution would probe discarded atoms;
        # coarse scales (>= 1/4) are meaningful for any truncation
        if eps <= 4.0 / n_cap and eps < 0.25:
            raise DegenerateScale(
                f"eps = {eps} is below the truncation resolution 1/{n_cap}"
            )
        count = 0
        i = 0
        n = len(points)
        while i < n:
            start = points[i]
            while i < n and points[i] - start < eps:
                i += 1
            count += 1
        out["minkowski_scale"][eps] = math.log(count) / math.log(1.0 / eps)
        out["covering_number_" + repr(eps)] = count
        delta = eps / 2.0
        weight = delta**probe_s
        out["hausdorff_scale_upper"][eps] = 0.0
        out["witness"][eps] = {
            "delta": delta,
            "singletons": sum(1 for p in points if p > delta),
            "probe_s": probe_s,
            "weight_sum": weight,
            "weight_below_one": weight < 1.0,
        }
    return out
