"""Weighted topological entropy of the coordinate-projection factor map.

For a subshift over a product alphabet A x B and the projection onto the B
coordinate, the weighted entropy with exponent w in [0, 1] is the growth rate
of Z_N = sum over projected N-words v of |fiber(v)|^w.  Z_N is submultiplicative,
so v_N = min_{j<=N} log Z_j / j is a certified upper-bound sequence; for
product shifts R^N the value is exactly log sum_{v} t(v)^w.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EmptySubshift, InsufficientLength, ResourceLimit
from .limits import subset_budget, word_budget
from . import symbolic
from .symbolic import (
    KIND_AUTOMATON,
    KIND_FULL,
    KIND_TUPLES,
    Automaton,
    SubshiftSpec,
    automaton_spec,
    ensure_pruned,
)


@dataclass(frozen=True)
class PairShiftSystem:
    """A subshift over A x B together with the projection (u, v) -> v.

    Product symbols are encoded as u * b_size + v.
    """

    a_size: int
    b_size: int
    omega: SubshiftSpec

    def __post_init__(self):
        if self.omega.alphabet != self.a_size * self.b_size:
            raise DomainError("omega alphabet must equal a_size * b_size")

    @property
    def a_alphabet(self) -> "symbolic.Alphabet":
        return symbolic.Alphabet(self.a_size)

    @property
    def b_alphabet(self) -> "symbolic.Alphabet":
        return symbolic.Alphabet(self.b_size)

    def decode(self, label: int) -> tuple[int, int]:
        return divmod(label, self.b_size)

    def v_of(self, label: int) -> int:
        return label % self.b_size


def pair_system_from_tuples(a: int, b: int, relation) -> PairShiftSystem:
    return PairShiftSystem(a, b, symbolic.allowed_tuples(a, b, relation))


def pair_system(a: int, b: int, omega: SubshiftSpec) -> PairShiftSystem:
    return PairShiftSystem(a, b, omega)


def tuple_fiber_sizes(sys: PairShiftSystem) -> dict[int, int]:
    """t(v) = #{u : (u, v) in R} for an allowed-tuple system."""
    if sys.omega.kind == KIND_FULL:
        return {v: sys.a_size for v in range(sys.b_size)}
    if sys.omega.kind != KIND_TUPLES:
        raise DomainError("tuple fiber sizes require an allowed-tuple system")
    t = {v: 0 for v in range(sys.b_size)}
    for _, v in sys.omega.tuple_set:
        t[v] += 1
    return t


def _is_product_kind(spec: SubshiftSpec) -> bool:
    return spec.kind in (KIND_TUPLES, KIND_FULL)


# ---------------------------------------------------------------------------
# Fiber counts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiberCountTable:
    """Exact fiber cardinalities |pi_N^{-1}(v)| per projected word v, per N."""

    levels: dict  # N -> {v_word(tuple): int}

    def level(self, n: int) -> dict:
        return self.levels[n]

    def image_count(self, n: int) -> int:
        return len(self.levels[n])

    def total(self, n: int) -> int:
        return sum(self.levels[n].values())


def fiber_counts(
    sys: PairShiftSystem, n_max: int, budget: int | None = None
) -> FiberCountTable:
    cap = word_budget(budget)
    if _is_product_kind(sys.omega):
        t = {v: c for v, c in tuple_fiber_sizes(sys).items() if c > 0}
        letters = sorted(t)
        levels: dict = {}
        level = {(): 1}
        total = 0
        for n in range(1, n_max + 1):
            nxt = {}
            for word, c in level.items():
                for v in letters:
                    nxt[word + (v,)] = c * t[v]
            total += len(nxt)
            if total > cap:
                raise ResourceLimit(f"fiber table exceeds budget {cap}")
            levels[n] = nxt
            level = nxt
        return FiberCountTable(levels=levels)

    omega = ensure_pruned(sys.omega)
    aut = omega.automaton
    b = sys.b_size
    levels = {}
    # DFS over projected letters; the vector maps automaton state -> number of
    # admissible product words with the current projection.
    frontier: list[tuple[tuple, dict]] = [((), {aut.root: 1})]
    total = 0
    for n in range(1, n_max + 1):
        nxt_frontier = []
        level: dict = {}
        for word, vec in frontier:
            by_letter: dict[int, dict] = {}
            for state, c in vec.items():
                for label, target in aut.succ[state].items():
                    v = label % b
                    slot = by_letter.setdefault(v, {})
                    slot[target] = slot.get(target, 0) + c
            for v, nvec in sorted(by_letter.items()):
                w = word + (v,)
                level[w] = sum(nvec.values())
                nxt_frontier.append((w, nvec))
        total += len(level)
        if total > cap:
            raise ResourceLimit(f"fiber table exceeds budget {cap}")
        levels[n] = level
        frontier = nxt_frontier
    return FiberCountTable(levels=levels)


# ---------------------------------------------------------------------------
# Weighted entropy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightedEntropyReport:
    w: float
    z_values: dict  # N -> float
    upper_bounds: tuple  # v_N = min_{j<=N} log Z_j / j
    closed_form: float | None
    best_estimate: float
    exact: bool
    submultiplicative_ok: bool


def _fsum_desc(values) -> float:
    return math.fsum(sorted(values, reverse=True))


def _z_values_product(sys: PairShiftSystem, w: float, n_max: int, cap: int) -> dict:
    """Z_N by explicit enumeration over projected words (vectorized)."""
    t = [c for c in tuple_fiber_sizes(sys).values() if c > 0]
    tw = np.sort(np.array(t, dtype=float) ** w)[::-1]
    z = {}
    level = tw.copy()
    for n in range(1, n_max + 1):
        if level.size > cap:
            raise ResourceLimit(f"Z enumeration exceeds budget {cap}")
        z[n] = _fsum_desc(level.tolist())
        if n < n_max:
            level = np.multiply.outer(level, tw).ravel()
    return z


def weighted_entropy(
    sys: PairShiftSystem, w: float, n_max: int, budget: int | None = None
) -> WeightedEntropyReport:
    if not (0.0 <= w <= 1.0):
        raise DomainError(f"weight exponent must lie in [0, 1], got {w}")
    cap = word_budget(budget)

    closed = None
    if _is_product_kind(sys.omega):
        t = [c for c in tuple_fiber_sizes(sys).values() if c > 0]
        closed = math.log(_fsum_desc(float(c) ** w for c in t))
        z = _z_values_product(sys, w, n_max, cap)
    else:
        table = fiber_counts(sys, n_max, budget)
        z = {
            n: _fsum_desc(float(c) ** w for c in table.level(n).values())
            for n in range(1, n_max + 1)
        }

    bounds = []
    best = math.inf
    for n in range(1, n_max + 1):
        best = min(best, math.log(z[n]) / n)
        bounds.append(best)

    submult_ok = True
    for n in z:
        for m in z:
            if n + m in z and z[n + m] > z[n] * z[m] * (1 + 1e-9):
                submult_ok = False
                warnings.warn(
                    f"Z_{n + m} exceeds Z_{n} * Z_{m} beyond tolerance", stacklevel=2
                )
    return WeightedEntropyReport(
        w=w,
        z_values=z,
        upper_bounds=tuple(bounds),
        closed_form=closed,
        best_estimate=closed if closed is not None else bounds[-1],
        exact=closed is not None,
        submultiplicative_ok=submult_ok,
    )


# ---------------------------------------------------------------------------
# Image subshift (projection, determinized)
# ---------------------------------------------------------------------------


def image_subshift(sys: PairShiftSystem, budget: int | None = None) -> SubshiftSpec:
    """Subshift of B^N whose words are exactly the projections of omega's words.

    Powerset determinization of the projected transition graph; the result is
    a rooted deterministic labeled graph (sofic presentations are generally
    not vertex shifts over B).  A full image is recognized and normalized.
    """
    omega = ensure_pruned(sys.omega)
    aut = omega.automaton
    b = sys.b_size
    cap = subset_budget() if budget is None else budget

    start = frozenset([aut.root])
    subsets = {start: 0}
    succ: list[dict] = [dict()]
    queue = [start]
    while queue:
        current = queue.pop()
        idx = subsets[current]
        by_letter: dict[int, set] = {}
        for state in current:
            for label, target in aut.succ[state].items():
                by_letter.setdefault(label % b, set()).add(target)
        for v, targets in sorted(by_letter.items()):
            key = frozenset(targets)
            if key not in subsets:
                if len(subsets) >= cap:
                    return _wordset_fallback(sys)
                subsets[key] = len(succ)
                succ.append(dict())
                queue.append(key)
            succ[idx][v] = subsets[key]
    image = Automaton(alphabet_size=b, root=0, succ=tuple(succ))
    if not image.succ[image.root]:
        raise EmptySubshift("projected image is empty")
    letters = set(range(b))
    if all(set(trans) == letters for trans in image.succ):
        letters_seen = set(image.succ[image.root])
        if letters_seen == letters:
            return symbolic.prune(symbolic.full_shift(b))
    return symbolic.prune(automaton_spec(image, b))


def _wordset_fallback(sys: PairShiftSystem, depth: int = 12) -> SubshiftSpec:
    """Enumeration-only image description when determinization blows up."""
    table = fiber_counts(sys, depth)
    wordsets = tuple(
        (n, frozenset(table.level(n))) for n in sorted(table.levels)
    )
    return SubshiftSpec(
        alphabet=sys.b_size, kind=KIND_AUTOMATON, automaton=None, wordsets=wordsets
    )


# ---------------------------------------------------------------------------
# Scan-window index from the bounded-sequence lemma
# ---------------------------------------------------------------------------


def scale_index(
    sequence, w: float, delta: float, m: int, c_bound: float | None = None
) -> int:
    """Least n >= m in the guaranteed window with a_n - a_{floor(w n)} >= -delta.

    For any sequence with values in [0, C], such an index exists inside
    [m, w^{-ceil(C/delta)} (m + ceil(C/delta)) + 1]; the scan makes the bound
    effective.  Raises InsufficientLength if the sequence stops short of the
    window.
    """
    if not (0.0 < w <= 1.0):
        raise DomainError("w must lie in (0, 1]")
    if delta <= 0:
        raise DomainError("delta must be positive")
    seq = [float(x) for x in sequence]
    c = max(seq) if c_bound is None else float(c_bound)
    if any(x < 0 or x > c + 1e-15 for x in seq):
        raise DomainError("sequence values must lie in [0, C]")
    k = math.ceil(c / delta)
    window_end = int(math.floor(w ** (-k) * (m + k) + 1))
    if len(seq) <= m:
        raise InsufficientLength(f"need index {m}, sequence has {len(seq)} entries")
    scan_end = min(window_end, len(seq) - 1)
    for n in range(m, scan_end + 1):
        if seq[n] - seq[int(math.floor(w * n))] >= -delta:
            return n
    if scan_end < window_end:
        raise InsufficientLength(
            f"no index found up to {scan_end}; the guaranteed window extends to "
            f"{window_end}"
        )
    raise AssertionError("window scan failed; input violates the lemma hypotheses")
