"""Subshift counting and entropy against naive string-based oracles."""

import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from meandim import symbolic as sym
from meandim.errors import DomainError, EmptySubshift

GOLDEN_ENTROPY = 0.4812118250596035  # log((1 + sqrt 5) / 2)


def naive_sft_words(matrix, n):
    """All length-n words of the vertex shift, by brute force.

    A word is in the language iff every transition is allowed and the word
    extends k more steps (k states suffice: any k-step path hits a cycle).
    """
    k = len(matrix)

    def admissible(word):
        return all(matrix[a][b] for a, b in zip(word, word[1:]))

    def extendable(last):
        frontier = {last}
        for _ in range(k):
            frontier = {t for s in frontier for t in range(k) if matrix[s][t]}
            if not frontier:
                return False
        return True

    return [
        w
        for w in itertools.product(range(k), repeat=n)
        if admissible(w) and extendable(w[-1])
    ]


def naive_forbidden_words(k, forbidden, n, extension=8):
    """Words avoiding every forbidden factor, with brute-force extendability."""
    forb = [tuple(f) for f in forbidden]

    def clean(word):
        return not any(
            word[i : i + len(f)] == f
            for f in forb
            for i in range(len(word) - len(f) + 1)
        )

    def extendable(word):
        return any(
            clean(word + ext)
            for ext in itertools.product(range(k), repeat=extension)
        )

    return [
        w
        for w in itertools.product(range(k), repeat=n)
        if clean(w) and extendable(w)
    ]


class TestPrune:
    def test_full_shift_compiles_to_all_ones_matrix(self):
        p = sym.prune(sym.full_shift(3))
        assert p.kind == sym.KIND_SFT
        assert p.matrix == ((1, 1, 1), (1, 1, 1), (1, 1, 1))

    def test_forbidden_11_gives_golden_mean_matrix(self):
        p = sym.prune(sym.forbidden_words(2, ["11"]))
        assert p.matrix == ((1, 1), (1, 0))
        # language unchanged: compare against the naive oracle up to length 4
        for n in range(1, 5):
            assert sorted(sym.enumerate_words(p, n)) == naive_forbidden_words(
                2, [(1, 1)], n
            )

    def test_no_cycle_is_empty(self):
        with pytest.raises(EmptySubshift):
            sym.prune(sym.sft_from_matrix([[0, 1], [0, 0]]))

    def test_dead_symbol_removed_but_language_kept(self):
        # symbol 2 has no outgoing edges: words ending in it are not prefixes
        matrix = [[1, 1, 1], [1, 0, 0], [0, 0, 0]]
        p = sym.prune(sym.sft_from_matrix(matrix))
        for n in range(1, 6):
            assert sorted(sym.enumerate_words(p, n)) == naive_sft_words(matrix, n)

    def test_prune_is_idempotent(self):
        p = sym.prune(sym.forbidden_words(2, ["11"]))
        again = sym.prune(p)
        assert sym.count_words(again, 6).counts == sym.count_words(p, 6).counts


class TestCountWords:
    def test_full_shift_power_counts(self):
        table = sym.count_words(sym.full_shift(3), 6)
        for n in range(1, 7):
            assert table[n] == 3**n

    def test_golden_mean_fibonacci(self):
        table = sym.count_words(sym.forbidden_words(2, ["11"]), 20)
        assert [table[n] for n in range(1, 6)] == [2, 3, 5, 8, 13]
        assert table[20] == 17711

    def test_allowed_tuples_power(self):
        spec = sym.allowed_tuples(3, 2, [(0, 0), (1, 1), (2, 0)])
        assert sym.count_words(spec, 3)[3] == 27

    def test_matrix_vs_enumeration_small_alphabets(self):
        rng = random.Random(1)
        cases = 0
        while cases < 12:
            k = rng.randint(2, 4)
            matrix = [[rng.randint(0, 1) for _ in range(k)] for _ in range(k)]
            try:
                spec = sym.prune(sym.sft_from_matrix(matrix))
            except EmptySubshift:
                continue
            cases += 1
            table = sym.count_words(spec, 10)
            for n in (1, 3, 7, 10):
                assert table[n] == len(naive_sft_words(matrix, n))

    def test_higher_block_compilation(self):
        spec = sym.forbidden_words(2, ["111", "00"])
        pruned = sym.prune(spec)
        assert pruned.state_words is not None
        for n in range(1, 8):
            expected = naive_forbidden_words(2, [(1, 1, 1), (0, 0)], n)
            assert sorted(sym.enumerate_words(pruned, n)) == expected

    def test_submultiplicative_check_passes(self):
        table = sym.count_words(sym.forbidden_words(2, ["11"]), 12)
        table.check_submultiplicative()


@settings(max_examples=60, deadline=None)
@given(
    st.integers(2, 4).flatmap(
        lambda k: st.lists(
            st.lists(st.integers(0, 1), min_size=k, max_size=k),
            min_size=k,
            max_size=k,
        )
    )
)
def test_submultiplicativity_random_matrices(matrix):
    try:
        spec = sym.prune(sym.sft_from_matrix(matrix))
    except EmptySubshift:
        return
    table = sym.count_words(spec, 10)
    for n in table.counts:
        for m in table.counts:
            if n + m in table.counts:
                assert table[n + m] <= table[n] * table[m]


class TestEntropy:
    def test_full_shift_exact(self):
        rep = sym.entropy(sym.full_shift(2), 8)
        assert rep.best_estimate == pytest.approx(math.log(2), abs=1e-12)
        assert all(u == pytest.approx(math.log(2), abs=1e-12) for u in rep.upper_bounds)

    def test_golden_mean_spectral(self):
        rep = sym.entropy(sym.forbidden_words(2, ["11"]), 12)
        assert rep.spectral_value == pytest.approx(GOLDEN_ENTROPY, abs=1e-9)
        # ratio of consecutive Fibonacci counts converges to the same value
        table = sym.count_words(sym.forbidden_words(2, ["11"]), 40)
        ratio = math.log(table[40] / table[39])
        assert abs(ratio - rep.spectral_value) < 1e-12

    def test_tuples_log_r(self):
        spec = sym.allowed_tuples(3, 2, [(0, 0), (1, 1), (2, 0)])
        assert sym.entropy(spec).best_estimate == pytest.approx(math.log(3), abs=1e-12)

    def test_fekete_brackets_dominate_spectral(self):
        rng = random.Random(7)
        for _ in range(10):
            k = rng.randint(2, 4)
            matrix = [[rng.randint(0, 1) for _ in range(k)] for _ in range(k)]
            try:
                rep = sym.entropy(sym.sft_from_matrix(matrix), 10)
            except EmptySubshift:
                continue
            for u in rep.upper_bounds:
                assert rep.spectral_value <= u + 1e-9
            assert all(a >= b - 1e-15 for a, b in zip(rep.upper_bounds, rep.upper_bounds[1:]))

    def test_reducible_defective_matrix(self):
        # counts grow like n + 1: entropy 0, a hard case for plain power iteration
        rep = sym.entropy(sym.sft_from_matrix([[1, 1], [0, 1]]), 10)
        assert rep.spectral_value == pytest.approx(0.0, abs=1e-10)
        table = sym.count_words(sym.sft_from_matrix([[1, 1], [0, 1]]), 12)
        assert all(table[n] == n + 1 for n in range(1, 13))


class TestJson:
    def test_round_trip_all_kinds(self):
        specs = [
            sym.full_shift(4),
            sym.sft_from_matrix([[1, 1], [1, 0]]),
            sym.forbidden_words(2, ["11", "000"]),
            sym.allowed_tuples(3, 2, [(0, 0), (1, 1), (2, 0)]),
        ]
        for spec in specs:
            doc = sym.spec_to_json(spec)
            back = sym.spec_from_json(doc)
            assert sym.count_words(back, 6).counts == sym.count_words(spec, 6).counts

    def test_counts_serialized_as_exact_integers(self):
        table = sym.count_words(sym.full_shift(10), 30)
        assert table[30] == 10**30  # exact big integer, no float rounding

    def test_bad_kind_rejected(self):
        with pytest.raises(DomainError):
            sym.spec_from_json({"alphabet": 2, "kind": "nonsense"})
