"""Exact rectangle-pattern counting for two-dimensional symbolic rules.

Rules are Free (no constraint), LinearMod (a three-cell linear congruence),
or LocalPatterns (a single allowed window set).  Counting is exact over big
integers via a column transfer matrix; locally admissible counts upper-bound
the pattern language of the corresponding subshift, and normalized log-counts
are certified entropy upper bounds by subadditivity in both axes.  The digit
points x_n = sum_m w[n][m] a^-m embed admissible patterns into the torus
product for metric cross-checks.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, ResourceLimit
from .limits import point_budget, state_budget
from .metrics import SUM_WEIGHTED_TORUS, MetricDescriptor, PointCloud

RULE_FREE = "free"
RULE_LINEAR = "linear"
RULE_PATTERNS = "patterns"


@dataclass(frozen=True)
class Grid2DSpec:
    alphabet: int
    rule: str
    coeffs: tuple | None = None  # (c00, c10, c01): c00 x[i,j] + c10 x[i+1,j] + c01 x[i,j+1] = 0 mod alphabet
    window: tuple | None = None  # (h, w)
    allowed: frozenset | None = None  # h x w patterns as row tuples

    def __post_init__(self):
        if self.alphabet < 1:
            raise DomainError("alphabet must be >= 1")
        if self.rule == RULE_LINEAR:
            if self.coeffs is None or len(self.coeffs) != 3:
                raise DomainError("linear rule needs coefficients (c00, c10, c01)")
        elif self.rule == RULE_PATTERNS:
            if self.window is None or self.allowed is None:
                raise DomainError("patterns rule needs a window and allowed set")
            h, w = self.window
            for pat in self.allowed:
                if len(pat) != h or any(len(row) != w for row in pat):
                    raise DomainError("allowed pattern does not fit the window")
        elif self.rule != RULE_FREE:
            raise DomainError(f"unknown rule {self.rule!r}")


def free_rule(a: int) -> Grid2DSpec:
    return Grid2DSpec(alphabet=a, rule=RULE_FREE)


def linear_rule(a: int, c00: int, c10: int, c01: int) -> Grid2DSpec:
    return Grid2DSpec(alphabet=a, rule=RULE_LINEAR, coeffs=(c00 % a, c10 % a, c01 % a))


def three_dot_rule(a: int = 2) -> Grid2DSpec:
    return linear_rule(a, 1, 1, 1)


def patterns_rule(a: int, window, allowed) -> Grid2DSpec:
    h, w = window
    pats = frozenset(tuple(tuple(int(x) for x in row) for row in p) for p in allowed)
    return Grid2DSpec(alphabet=a, rule=RULE_PATTERNS, window=(h, w), allowed=pats)


def hard_square_rule() -> Grid2DSpec:
    """No two adjacent 1s, encoded as the allowed 2x2 windows."""
    allowed = []
    for p in itertools.product((0, 1), repeat=4):
        pat = ((p[0], p[1]), (p[2], p[3]))
        if (
            (pat[0][0] and pat[0][1])
            or (pat[1][0] and pat[1][1])
            or (pat[0][0] and pat[1][0])
            or (pat[0][1] and pat[1][1])
        ):
            continue
        allowed.append(pat)
    return patterns_rule(2, (2, 2), allowed)


# ---------------------------------------------------------------------------
# Exact counting
# ---------------------------------------------------------------------------


def _linear_intra_ok(spec: Grid2DSpec, col) -> bool:
    a = spec.alphabet
    c00, c10, c01 = spec.coeffs
    if c01 != 0:
        return True  # constraint references the next column; checked there
    top = len(col) - (1 if c10 != 0 else 0)
    for i in range(top):
        nxt = col[i + 1] if c10 != 0 else 0
        if (c00 * col[i] + c10 * nxt) % a != 0:
            return False
    return True


def _linear_trans_ok(spec: Grid2DSpec, col, nxt_col) -> bool:
    a = spec.alphabet
    c00, c10, c01 = spec.coeffs
    if c01 == 0:
        return True
    top = len(col) - (1 if c10 != 0 else 0)
    for i in range(top):
        below = col[i + 1] if c10 != 0 else 0
        if (c00 * col[i] + c10 * below + c01 * nxt_col[i]) % a != 0:
            return False
    return True


def _patterns_trans_ok(spec: Grid2DSpec, strip, new_col) -> bool:
    """strip: the previous w-1 columns; check all windows ending at new_col."""
    h, w = spec.window
    cols = strip + (new_col,)
    rows = len(new_col)
    for i in range(rows - h + 1):
        pat = tuple(tuple(cols[c][i + r] for c in range(w)) for r in range(h))
        if pat not in spec.allowed:
            return False
    return True


def count_rectangles(spec: Grid2DSpec, n_rows: int, m_cols: int) -> int:
    """Exact number of locally admissible n x m patterns.

    Local admissibility (no in-grid window violates the rule) is decidable
    and exact for the Free and LinearMod rules; for LocalPatterns it is an
    upper bound on the pattern language of the 2d subshift, since global
    extendability of 2d patterns is undecidable in general.
    """
    if n_rows < 1 or m_cols < 1:
        raise DomainError("pattern dimensions must be positive")
    a = spec.alphabet
    if spec.rule == RULE_FREE:
        return a ** (n_rows * m_cols)

    if spec.rule == RULE_LINEAR:
        if a**n_rows > state_budget():
            raise ResourceLimit(f"{a}^{n_rows} column states exceed budget")
        cols = [c for c in itertools.product(range(a), repeat=n_rows)
                if _linear_intra_ok(spec, c)]
        if spec.coeffs[2] == 0:
            return len(cols) ** m_cols
        weights = {c: 1 for c in cols}
        for _ in range(m_cols - 1):
            nxt: dict = {}
            for c, k in weights.items():
                for c2 in cols:
                    if _linear_trans_ok(spec, c, c2):
                        nxt[c2] = nxt.get(c2, 0) + k
            weights = nxt
        return sum(weights.values())

    h, w = spec.window
    if n_rows < h or m_cols < w:
        return a ** (n_rows * m_cols)  # the grid holds no full window
    if w == 1:
        good = sum(
            1
            for c in itertools.product(range(a), repeat=n_rows)
            if _patterns_trans_ok(spec, (), c)
        )
        return good**m_cols
    n_states = a ** (n_rows * (w - 1))
    if n_states > state_budget():
        raise ResourceLimit(f"{n_states} strip states exceed budget")
    strips = list(
        itertools.product(itertools.product(range(a), repeat=n_rows), repeat=w - 1)
    )
    weights = {s: 1 for s in strips}
    cols = list(itertools.product(range(a), repeat=n_rows))
    for _ in range(m_cols - (w - 1)):
        nxt = {}
        for s, k in weights.items():
            for c in cols:
                if _patterns_trans_ok(spec, s, c):
                    s2 = s[1:] + (c,)
                    nxt[s2] = nxt.get(s2, 0) + k
        weights = nxt
    return sum(weights.values())


def enumerate_patterns(spec: Grid2DSpec, n_rows: int, m_cols: int, budget: int | None = None):
    """All locally admissible patterns as row-major tuples of rows."""
    cap = point_budget(budget)
    total = count_rectangles(spec, n_rows, m_cols)
    if total > cap:
        raise ResourceLimit(f"{total} patterns exceed budget {cap}")
    a = spec.alphabet
    out = []
    for cols in itertools.product(
        itertools.product(range(a), repeat=n_rows), repeat=m_cols
    ):
        if _pattern_admissible(spec, cols):
            out.append(tuple(tuple(cols[m][i] for m in range(m_cols)) for i in range(n_rows)))
    return out


def _pattern_admissible(spec: Grid2DSpec, cols) -> bool:
    if spec.rule == RULE_FREE:
        return True
    if spec.rule == RULE_LINEAR:
        if not all(_linear_intra_ok(spec, c) for c in cols):
            return False
        return all(
            _linear_trans_ok(spec, cols[j], cols[j + 1]) for j in range(len(cols) - 1)
        )
    h, w = spec.window
    if len(cols[0]) < h or len(cols) < w:
        return True
    return all(
        _patterns_trans_ok(spec, tuple(cols[j : j + w - 1]), cols[j + w - 1])
        for j in range(len(cols) - w + 1)
    )


# ---------------------------------------------------------------------------
# Entropy and the homogeneous-system dimension
# ---------------------------------------------------------------------------


def _int_log(value: int, base: int) -> int | None:
    """Exact e with base^e == value, when it exists."""
    if value < 1:
        return None
    e = 0
    v = value
    while v % base == 0:
        v //= base
        e += 1
    return e if v == 1 else None


@dataclass(frozen=True)
class Entropy2DReport:
    estimates: dict  # (n, m) -> log count / (n m), nats
    counts: dict  # (n, m) -> exact count
    best: float  # min over the grid: a certified upper bound
    best_cell: tuple


def entropy2d(spec: Grid2DSpec, n_max: int, m_max: int) -> Entropy2DReport:
    """Normalized log-counts over the (n, m) grid.

    Each value log count(n, m) / (n m) upper-bounds the pattern entropy:
    counts are submultiplicative along both axes, so Fekete applies per axis
    and the double limit is the double infimum.
    """
    estimates = {}
    counts = {}
    best = math.inf
    best_cell = None
    for n in range(1, n_max + 1):
        for m in range(1, m_max + 1):
            c = count_rectangles(spec, n, m)
            counts[(n, m)] = c
            e = math.log(c) / (n * m) if c > 0 else -math.inf
            estimates[(n, m)] = e
            if e < best:
                best = e
                best_cell = (n, m)
    return Entropy2DReport(estimates=estimates, counts=counts, best=best, best_cell=best_cell)


def homog_mean_dims(
    spec: Grid2DSpec, a: int, n_max: int, m_max: int
) -> dict:
    """Common mean Hausdorff / metric mean dimension of the base-a digit model.

    The value is the rectangle-pattern entropy divided by log a.  When every
    computed count is an exact power of a the ratio is computed in exact
    rational arithmetic (so the Free rule reports exactly 1).
    """
    if spec.alphabet != a:
        raise DomainError("digit base must equal the rule's alphabet size")
    rep = entropy2d(spec, n_max, m_max)
    exact_ratios = []
    for (n, m), c in rep.counts.items():
        e = _int_log(c, a)
        if e is None:
            exact_ratios = None
            break
        exact_ratios.append(Fraction(e, n * m))
    if exact_ratios is not None:
        value = float(min(exact_ratios))
        exact = True
    else:
        value = rep.best / math.log(a)
        exact = False
    return {
        "mdim": value,
        "entropy_best": rep.best,
        "best_cell": rep.best_cell,
        "exact_power": exact,
        "status": "upper_bound",
    }


# ---------------------------------------------------------------------------
# Torus embedding and the two-parameter rectangle metric
# ---------------------------------------------------------------------------


def torus_points(
    spec: Grid2DSpec, n_rows: int, m_cols: int, depth: int = 0, budget: int | None = None
) -> PointCloud:
    """One torus point per admissible (n_rows + depth) x m_cols pattern.

    Coordinate n of the point is x_n = sum_m w[n][m] a^-m in [0, 1); `depth`
    adds extra coordinate rows so that dynamical metrics with window n_rows
    stay truncation-sound.  Digit rows are kept as exact integers
    (x_n = payload int / a^m_cols) for exact torus arithmetic.
    """
    rows = n_rows + depth
    pats = enumerate_patterns(spec, rows, m_cols, budget)
    a = spec.alphabet
    denom = a**m_cols
    ints = []
    pts = []
    for pat in pats:
        vals = [
            sum(row[m] * a ** (m_cols - 1 - m) for m in range(m_cols)) for row in pat
        ]
        ints.append(tuple(vals))
        pts.append([v / denom for v in vals])
    return PointCloud(
        points=np.array(pts),
        metric=MetricDescriptor(kind=SUM_WEIGHTED_TORUS, iterates=n_rows),
        truncation_error=0.5 * 2.0 ** -(rows - n_rows + 1) if depth else 0.5 * 2.0 ** -1,
        payload={"ints": ints, "denominator": denom, "rows": rows, "cols": m_cols},
    )


def _torus_gap_int(p: int, q: int, denom: int) -> Fraction:
    d = abs(p - q) % denom
    return Fraction(min(d, denom - d), denom)


def rect_metric_distance(
    ints_x, ints_y, denom: int, a: int, shift_window: int, mult_window: int
) -> float:
    """d over the rectangle [0, shift_window) x [0, mult_window): the sup over
    shift iterates i and digit-multiplication iterates m of the weighted torus
    sum, computed exactly from integer digit values."""
    rows = len(ints_x)
    best = Fraction(0)
    for m in range(mult_window):
        mult = pow(a, m, denom)
        xs = [(v * mult) % denom for v in ints_x]
        ys = [(v * mult) % denom for v in ints_y]
        for i in range(shift_window):
            total = Fraction(0)
            for j in range(i, rows):
                total += _torus_gap_int(xs[j], ys[j], denom) / (1 << (j - i + 1))
            if total > best:
                best = total
    return float(best)


def shift_metric_distance(ints_x, ints_y, denom: int, shift_window: int) -> float:
    """The dynamical weighted-torus metric with the given shift window."""
    return rect_metric_distance(ints_x, ints_y, denom, 1, shift_window, 1)


def key_fact_check(
    spec: Grid2DSpec, n_rows: int, m_cols: int, budget: int | None = None
) -> dict:
    """Pairwise test of the digit-agreement implication on a finite cloud.

    At eps in (a^-M, a^-(M-1)] with tail cutoff L (least 2^-L < eps/2), any
    two cloud points closer than 1/(4a) in the rectangle metric over
    [0, N+L) x [0, M) must be eps-close in the window-N shift metric.  The
    implication transfers covering numbers, so the greedy brackets must
    satisfy lower(shift metric, eps) <= upper(rectangle metric, 1/(4a)).
    """
    from .oracle import covering_bounds

    a = spec.alphabet
    eps = 0.5 * float(a) ** (-m_cols)
    tail = 1
    while 2.0**-tail >= eps / 2.0:
        tail += 1
    cloud = torus_points(spec, n_rows, m_cols, depth=tail, budget=budget)
    ints = cloud.payload["ints"]
    denom = cloud.payload["denominator"]
    n_pts = len(ints)

    threshold = 1.0 / (4.0 * a)
    violations = 0
    for i in range(n_pts):
        for j in range(i + 1, n_pts):
            rect = rect_metric_distance(
                ints[i], ints[j], denom, a, n_rows + tail, m_cols
            )
            if rect < threshold:
                shifted = shift_metric_distance(ints[i], ints[j], denom, n_rows)
                if shifted >= eps:
                    violations += 1

    shift_cloud = PointCloud(
        points=cloud.points,
        metric=MetricDescriptor(kind=SUM_WEIGHTED_TORUS, iterates=n_rows),
        truncation_error=0.5 * 2.0 ** -(tail + 1),
    )
    lower_shift = covering_bounds(shift_cloud, eps).lower

    # rectangle-metric brackets via explicit greedy on the exact distances
    centers: list[int] = []
    radius = threshold / 2.0 - 1e-12
    for i in range(n_pts):
        if all(
            rect_metric_distance(ints[i], ints[c], denom, a, n_rows + tail, m_cols)
            > radius
            for c in centers
        ):
            centers.append(i)
    upper_rect = len(centers)

    return {
        "eps": eps,
        "tail": tail,
        "pointwise_ok": violations == 0,
        "violations": violations,
        "lower_shift": lower_shift,
        "upper_rect": upper_rect,
        "bracket_ok": lower_shift <= upper_rect,
        "points": n_pts,
    }


# ---------------------------------------------------------------------------
# JSON rule schema
# ---------------------------------------------------------------------------


def rule_to_json(spec: Grid2DSpec) -> dict:
    doc: dict = {"a": spec.alphabet, "rule": spec.rule}
    if spec.rule == RULE_LINEAR:
        doc["coeffs"] = list(spec.coeffs)
    elif spec.rule == RULE_PATTERNS:
        doc["window"] = list(spec.window)
        doc["allowed"] = sorted([list(r) for r in p] for p in spec.allowed)
    return doc


def rule_from_json(doc) -> Grid2DSpec:
    if isinstance(doc, str):
        doc = json.loads(doc)
    a = int(doc["a"])
    rule = doc["rule"]
    if rule == RULE_FREE:
        return free_rule(a)
    if rule == RULE_LINEAR:
        c = doc["coeffs"]
        return linear_rule(a, int(c[0]), int(c[1]), int(c[2]))
    if rule == RULE_PATTERNS:
        return patterns_rule(a, tuple(doc["window"]), doc["allowed"])
    raise DomainError(f"unknown rule {rule!r}")
