"""Built-in regression suite reproducing the library's worked examples.

Each criterion is a self-contained check with its stated tolerance; the suite
is exposed both to pytest and to the command line (`meandim paper-suite`).
Criteria return a record {name, passed, details, seconds}.
"""

from __future__ import annotations

import math
import random
import time

from . import carpet, grid2d, oracle, selfsim, symbolic, weighted

GOLDEN_MEAN_ENTROPY = 0.48121182505960347  # log((1 + sqrt 5) / 2)
CARPET_H_TARGET = 1.3496838201  # log_2(1 + 2^(log_3 2)), 10 digits
CARPET_M_TARGET = 1.3690702464  # 2 - log_3 2, 10 digits

EXAMPLE_RELATION = ((0, 0), (1, 1), (2, 0))


def _result(name, passed, details, started):
    return {
        "name": name,
        "passed": bool(passed),
        "details": details,
        "seconds": round(time.time() - started, 3),
    }


def _random_relation(rng, a, b):
    rel = [(u, v) for u in range(a) for v in range(b) if rng.random() < 0.6]
    if not rel:
        rel = [(rng.randrange(a), rng.randrange(b))]
    return rel


def criterion_carpet_example():
    t0 = time.time()
    spec = carpet.carpet_from_tuples(3, 2, EXAMPLE_RELATION)
    rep = carpet.mean_dims(spec, n_max=8)
    err_h = abs(rep.mdim_h.value - CARPET_H_TARGET)
    err_m = abs(rep.mdim_m.value - CARPET_M_TARGET)
    passed = err_h <= 1e-9 and err_m <= 1e-9
    return _result(
        "carpet example reproduction",
        passed,
        {
            "mdim_h": rep.mdim_h.value,
            "mdim_m": rep.mdim_m.value,
            "err_h": err_h,
            "err_m": err_m,
        },
        t0,
    )


def criterion_weighted_consistency(n_systems=50, n_max=8, seed=0):
    t0 = time.time()
    rng = random.Random(seed)
    worst_z = 0.0
    worst_end = 0.0
    for _ in range(n_systems):
        a = rng.randint(2, 5)
        b = rng.randint(2, a)
        rel = _random_relation(rng, a, b)
        sys = weighted.pair_system_from_tuples(a, b, rel)
        w = math.log(b) / math.log(a)
        rep = weighted.weighted_entropy(sys, w, n_max)
        for n, z in rep.z_values.items():
            worst_z = max(worst_z, abs(math.log(z) / n - rep.closed_form))
        r = len(set(rel))
        s = len({v for _, v in rel})
        h1 = weighted.weighted_entropy(sys, 1.0, 4).closed_form
        h0 = weighted.weighted_entropy(sys, 0.0, 4).closed_form
        worst_end = max(worst_end, abs(h1 - math.log(r)), abs(h0 - math.log(s)))
    passed = worst_z <= 1e-12 and worst_end <= 1e-9
    return _result(
        "weighted entropy consistency",
        passed,
        {"systems": n_systems, "worst_z_err": worst_z, "worst_endpoint_err": worst_end},
        t0,
    )


def criterion_qbox(n_max=3, m_max=5):
    t0 = time.time()
    spec = carpet.carpet_from_tuples(3, 2, EXAMPLE_RELATION)
    all_ok = True
    cells = {}
    for n in range(1, n_max + 1):
        for m in range(1, m_max + 1):
            fam = oracle.qbox_family(spec, n, m)
            sep = oracle.verify_family_separation(fam, samples=600)
            ok = (
                fam.count == fam.count_formula
                and fam.diam_certified
                and fam.separation_certified
                and sep["ok"]
            )
            all_ok = all_ok and ok
            cells[f"{n},{m}"] = {
                "count": fam.count,
                "observed_min": sep["observed_min"],
                "required": sep["required"],
                "ok": ok,
            }
    return _result("q-box lemma", all_ok, cells, t0)


def criterion_sandwich(n_list=(1, 2, 3), m_list=(1, 2, 3, 4)):
    t0 = time.time()
    spec = carpet.carpet_from_tuples(3, 2, EXAMPLE_RELATION)
    target = carpet.mean_dims(spec, 6).mdim_m.value
    grid = {}
    largest = None
    for n in n_list:
        for m in m_list:
            sw = oracle.covering_sandwich(spec, n, m)
            grid[f"{n},{m}"] = sw["ratio"]
            largest = sw
    lower_ok = largest["lower_ratio"] <= target + 0.15
    upper_ok = largest["upper_ratio"] >= target - 0.15
    return _result(
        "metric-mean-dimension sandwich trend",
        lower_ok and upper_ok,
        {
            "target": target,
            "largest_cell": (largest["n"], largest["m"]),
            "ratio": largest["ratio"],
            "grid": grid,
        },
        t0,
    )


def criterion_beta_separation():
    t0 = time.time()
    worst = math.inf
    for a in (2, 3):
        for beta in (float(a), a + 0.5, a + 1.0):
            for n in range(1, 9):
                gap = selfsim.min_gap(a, beta, n)
                worst = min(worst, gap - beta**-n)
    gap_ok = worst >= -1e-12

    family_ok = True
    details = {}
    specs = {
        "full2": selfsim.beta_system(2, 2.0),
        "golden": selfsim.beta_system(2, 2.0, symbolic.forbidden_words(2, ["11"])),
    }
    for label, spec in specs.items():
        for n_coords in (1, 2, 3):
            for n_layers in (1, 2, 3):
                fam = selfsim.covering_lower_bound(spec, n_coords, n_layers)
                observed = fam.points.min_pairwise() if fam.count > 1 else fam.eps
                bounds = oracle.covering_bounds(fam.points, fam.eps)
                ok = (
                    fam.count == fam.n_words**n_layers
                    and observed >= fam.eps - 1e-9
                    and bounds.lower >= fam.count
                )
                family_ok = family_ok and ok
                details[f"{label} N={n_coords} n={n_layers}"] = {
                    "count": fam.count,
                    "observed": observed,
                    "ok": ok,
                }
    return _result(
        "beta-expansion separation",
        gap_ok and family_ok,
        {"worst_gap_margin": worst, "families": details},
        t0,
    )


def criterion_entropy_oracles():
    t0 = time.time()
    gm = symbolic.prune(symbolic.forbidden_words(2, ["11"]))
    rep = symbolic.entropy(gm, 12)
    fib = [1, 1]
    while len(fib) < 23:
        fib.append(fib[-1] + fib[-2])
    table = symbolic.count_words(gm, 20)
    counts_ok = all(table[n] == fib[n + 1] for n in range(1, 21))
    spectral_ok = abs(rep.spectral_value - GOLDEN_MEAN_ENTROPY) <= 1e-9
    full_ok = True
    for k in (2, 3, 5):
        fs = symbolic.full_shift(k)
        t = symbolic.count_words(fs, 8)
        full_ok = full_ok and all(t[n] == k**n for n in range(1, 9))
        full_ok = full_ok and abs(
            symbolic.entropy(fs).best_estimate - math.log(k)
        ) <= 1e-12
    return _result(
        "entropy oracles",
        counts_ok and spectral_ok and full_ok,
        {
            "spectral": rep.spectral_value,
            "target": GOLDEN_MEAN_ENTROPY,
            "fibonacci_ok": counts_ok,
            "full_shift_ok": full_ok,
        },
        t0,
    )


def criterion_grid2d():
    t0 = time.time()
    free_ok = True
    for a in (2, 3):
        spec = grid2d.free_rule(a)
        for n in range(1, 6):
            for m in range(1, 6):
                free_ok = free_ok and grid2d.count_rectangles(spec, n, m) == a ** (n * m)
    td = grid2d.three_dot_rule(2)
    formula_ok = all(
        grid2d.count_rectangles(td, n, m) == 2 ** (n + m - 1)
        for n in range(1, 7)
        for m in range(1, 7)
    )
    brute_ok = all(
        grid2d.count_rectangles(td, n, m) == _brute_force_grid_count(td, n, m)
        for n in range(1, 5)
        for m in range(1, 5)
    )
    homog = grid2d.homog_mean_dims(grid2d.free_rule(2), 2, 4, 4)
    homog_ok = homog["mdim"] == 1.0
    return _result(
        "2d pattern counts",
        free_ok and formula_ok and brute_ok and homog_ok,
        {
            "free_ok": free_ok,
            "three_dot_formula_ok": formula_ok,
            "brute_force_ok": brute_ok,
            "homog_free": homog["mdim"],
        },
        t0,
    )


def _brute_force_grid_count(spec, n_rows, m_cols):
    import itertools

    a = spec.alphabet
    c00, c10, c01 = spec.coeffs
    count = 0
    for flat in itertools.product(range(a), repeat=n_rows * m_cols):
        grid = [flat[i * m_cols : (i + 1) * m_cols] for i in range(n_rows)]
        ok = True
        for i in range(n_rows - 1):
            for j in range(m_cols - 1):
                if (c00 * grid[i][j] + c10 * grid[i + 1][j] + c01 * grid[i][j + 1]) % a:
                    ok = False
                    break
            if not ok:
                break
        count += ok
    return count


def criterion_mass_distribution():
    t0 = time.time()
    spec = carpet.carpet_from_tuples(3, 2, EXAMPLE_RELATION)
    z1 = 1.0 + 2.0**spec.w
    s = math.log2(z1) - 0.1
    rep = oracle.mass_distribution_check(
        spec, 1, range(4, 11), s, identity_samples=100, seed=0
    )
    passed = rep["all_passed"] and rep["identity_ok"]
    return _result(
        "mass-distribution certificate",
        passed,
        {
            "s": s,
            "identity_max_err": rep["identity_max_err"],
            "largest_s": {m: v["largest_s"] for m, v in rep["per_m"].items()},
        },
        t0,
    )


def criterion_reciprocal_space(n_points=100, seed=0):
    t0 = time.time()
    rng = random.Random(seed)
    all_passed = True
    for i in range(n_points):
        m = rng.choice((2, 3))
        n_window = rng.randint(1, 3)
        eps = rng.uniform(0.02, 0.15)
        delta = oracle.reciprocal_witness_delta(m, eps)
        tail = oracle.reciprocal_tail_depth(m, delta)
        x = oracle.sample_reciprocal_point(n_window + tail, 100_000, seed=seed + i)
        wit = oracle.reciprocal_product_witness(x, n_window, m, eps)
        all_passed = all_passed and wit["passed"]
    scales = [1e-4, 1e-3, 1e-2, 0.1]
    dims = oracle.reciprocal_set_dims(100_000, scales)
    mink = dims["minkowski_scale"][1e-4]
    dims_ok = 0.40 <= mink <= 0.60 and all(
        dims["hausdorff_scale_upper"][eps] == 0.0 for eps in scales
    )
    return _result(
        "reciprocal sequence space",
        all_passed and dims_ok,
        {"witnesses": n_points, "minkowski_1e-4": mink},
        t0,
    )


def criterion_ordering(n_samples=200, seed=0):
    t0 = time.time()
    rng = random.Random(seed)
    order_ok = True
    equality_ok = True
    coincide_ok = True
    for _ in range(n_samples):
        a = rng.randint(2, 6)
        b = rng.randint(2, a)
        rel = _random_relation(rng, a, b)
        spec = carpet.carpet_from_tuples(a, b, rel)
        rep = carpet.mean_dims(spec, 5)
        order_ok = order_ok and rep.mdim_h.value <= rep.mdim_m.value + 1e-9
        cl = rep.classical
        coincide_ok = coincide_ok and (
            abs(rep.mdim_h.value - cl["dim_h"]) <= 1e-9
            and abs(rep.mdim_m.value - cl["dim_m"]) <= 1e-9
        )
        gap = carpet.gap_analysis(a, b, rel)
        structural = (a == b) or len(gap["witness"]) == 1
        equality_ok = equality_ok and (gap["equal"] == structural)
    return _result(
        "ordering and coincidence",
        order_ok and equality_ok and coincide_ok,
        {
            "samples": n_samples,
            "order_ok": order_ok,
            "equality_iff_ok": equality_ok,
            "classical_coincidence_ok": coincide_ok,
        },
        t0,
    )


CRITERIA = (
    ("1", criterion_carpet_example),
    ("2", criterion_weighted_consistency),
    ("3", criterion_qbox),
    ("4", criterion_sandwich),
    ("5", criterion_beta_separation),
    ("6", criterion_entropy_oracles),
    ("7", criterion_grid2d),
    ("8", criterion_mass_distribution),
    ("9", criterion_reciprocal_space),
    ("10", criterion_ordering),
)


def run_suite(verbose=True):
    results = []
    for number, fn in CRITERIA:
        rec = fn()
        rec["number"] = number
        results.append(rec)
        if verbose:
            tag = "PASS" if rec["passed"] else "FAIL"
            print(f"[{tag}] criterion {number}: {rec['name']} ({rec['seconds']}s)")
    return results
