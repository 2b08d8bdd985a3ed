"""End-to-end acceptance gate.

Ten checks, one printed verdict line each ([PASS]/[FAIL]); every check pins a
documented contract of the library — oracle agreements, closed-form fixtures,
axiom campaigns, and the counterexample margins. Seeds are fixed so the run
is reproducible bit for bit.
"""

import math
import random
import time

import numpy as np
import pytest

from lambdarisk import (
    CampaignConfig,
    Constant,
    MomentSet,
    PiecewiseLinear,
    Step,
    es_family,
    evar,
    evar_dual_oracle,
    evar_family,
    evar_value,
    extended_ru,
    homogeneous_form_value,
    lambda_evar_dual_oracle,
    lambda_lift,
    lambda_lift_inf,
    make_distribution,
    run_campaign,
    sandwich_check,
    var_family,
    worst_case_mean_variance,
    worst_case_wasserstein,
)

SEED = 20260818
U4 = make_distribution([1.0, 2.0, 3.0, 4.0])


def verdict(ok: bool, label: str, detail: str) -> bool:
    print(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
    return ok


def rand_dist(rng: random.Random, nmax: int, lo=-10.0, hi=10.0):
    n = rng.randint(2, nmax)
    vals = sorted(rng.uniform(lo, hi) for _ in range(n))
    probs = [rng.uniform(0.05, 1.0) for _ in range(n)]
    return make_distribution(vals, probs)


def rand_step(rng: random.Random, right_only=False, cap=0.97):
    k = rng.randint(1, 3)
    xs, x = [], rng.uniform(-8.0, 8.0)
    for _ in range(k):
        xs.append(x)
        x += rng.uniform(0.4, 3.0)
    ls = sorted((rng.uniform(0.02, cap) for _ in range(k + 1)), reverse=True)
    cont = "right" if right_only else rng.choice(["left", "right"])
    return Step(np.array(xs), np.array(ls), cont)


def rand_pl(rng: random.Random, cap=0.97):
    k = rng.randint(2, 4)
    xs, x = [], rng.uniform(-8.0, 8.0)
    for _ in range(k):
        xs.append(x)
        x += rng.uniform(0.5, 3.0)
    ls = sorted((rng.uniform(0.02, cap) for _ in range(k)), reverse=True)
    return PiecewiseLinear(np.array(xs), np.array(ls))


@pytest.fixture(scope="module")
def campaign():
    return run_campaign(CampaignConfig(seed=SEED, cases=200))


def test_01_order_one_reduces_to_expected_shortfall():
    rng = np.random.default_rng(SEED + 1)
    alphas = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99]
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(500):
        n = int(rng.integers(2, 51))
        d = make_distribution(rng.uniform(-10.0, 10.0, n), rng.uniform(0.05, 1.0, n))
        for a in alphas:
            es = d.expected_shortfall(a)
            dev = abs(evar_value(d, 1.0, a) - es) / (1.0 + abs(es))
            worst = max(worst, dev)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-8 and elapsed < 10.0
    assert verdict(
        ok, "1 es-reduction", f"worst rel dev {worst:.2e} (tol 1e-08), {elapsed:.1f}s (<10s)"
    )


def test_02_two_point_closed_form():
    rng = random.Random(SEED + 2)
    worst_v = worst_t = 0.0
    for _ in range(100):
        a = rng.uniform(-4.0, 3.0)
        b = rng.uniform(a + 0.5, 4.0)
        beta = rng.uniform(0.2, 0.8)
        d = make_distribution([a, b], [beta, 1.0 - beta])
        for p in (1.0, 2.0, 3.0):
            sol = evar(d, p, beta)
            worst_v = max(worst_v, abs(sol.value - b))
            worst_t = max(worst_t, abs(sol.t_lo - a), abs(sol.t_hi - b))
    ok = worst_v <= 1e-9 and worst_t <= 1e-6
    assert verdict(
        ok,
        "2 two-point-identity",
        f"worst value dev {worst_v:.2e} (tol 1e-09), interval dev {worst_t:.2e} (tol 1e-06)",
    )


def test_03_primal_dual_agreement():
    rng = np.random.default_rng(SEED + 3)
    t0 = time.perf_counter()
    worst_gap, crossing = 0.0, 0.0
    for p in (2.0, 3.0):
        for alpha in (0.2, 0.5, 0.8):
            for m in (2, 3):
                # positive, well-separated values keep 1 + |primal| large
                # relative to the simplex discretization error
                vals = np.sort(rng.uniform(1.0, 9.0, m))
                d = make_distribution(vals, rng.uniform(0.2, 1.0, m))
                primal = evar_value(d, p, alpha)
                scale = 1.0 + abs(primal)
                for dual in (
                    evar_dual_oracle(d, p, alpha, 2000),
                    lambda_evar_dual_oracle(d, p, Constant(alpha), 2000),
                ):
                    crossing = max(crossing, dual - primal)
                    worst_gap = max(worst_gap, (primal - dual) / scale)
    elapsed = time.perf_counter() - t0
    ok = crossing <= 1e-12 and worst_gap <= 5e-3 and elapsed < 30.0
    assert verdict(
        ok,
        "3 primal-dual",
        f"dual excess {crossing:.1e} (tol 1e-12), worst rel gap {worst_gap:.2e} "
        f"(tol 5e-03), {elapsed:.1f}s (<30s)",
    )


def test_04_lift_route_consistency():
    rng = random.Random(SEED + 4)
    worst = 0.0
    sandwich_fails = 0
    for i in range(300):
        d = rand_dist(rng, 12)
        level_fn = rand_step(rng, right_only=True) if i % 2 else rand_pl(rng)
        p = rng.choice([1.0, 2.0, 3.0])
        fam = evar_family(d, p)
        sup_form = lambda_lift(d, fam, level_fn)
        inf_form = lambda_lift_inf(d, fam, level_fn)
        joint = extended_ru(d, p, level_fn)
        worst = max(
            worst,
            abs(sup_form.value - inf_form),
            abs(sup_form.value - joint.value),
            abs(joint.x_star - joint.value),
        )
        if not sandwich_check(d, p, level_fn, sup_form.x_star, 1e-7):
            sandwich_fails += 1
    ok = worst <= 1e-7 and sandwich_fails == 0
    assert verdict(
        ok,
        "4 lift-consistency",
        f"worst route spread {worst:.2e} (tol 1e-07), sandwich failures {sandwich_fails}/300",
    )


def test_05_grid_oracle_agreement():
    rng = random.Random(SEED + 5)
    n = 200_000
    worst = -math.inf
    for _ in range(50):
        d = rand_dist(rng, 12)
        level_fn = rand_step(rng)
        fam = rng.choice(
            [var_family(d), es_family(d), evar_family(d, rng.choice([2.0, 3.0]))]
        )
        res = lambda_lift(d, fam, level_fn)
        lo, hi = d.essinf - 1.0, d.esssup + 1.0
        xs = np.linspace(lo, hi, n)
        levels = level_fn.eval_many(xs)
        uniq, inv = np.unique(levels, return_inverse=True)
        g = np.array([fam.level_value(float(a)) for a in uniq])[inv]
        brute = float(np.minimum(g, xs).max())
        spacing = (hi - lo) / (n - 1)
        worst = max(worst, abs(brute - res.value) - spacing)
    ok = worst <= 1e-9
    assert verdict(
        ok, "5 grid-oracle", f"worst |brute - lift| - spacing = {worst:.2e} (tol 1e-09)"
    )


def test_06_axiom_campaign(campaign):
    axioms = (
        "lift_level_monotone",
        "lift_pointwise_monotone",
        "lift_family_chain",
        "lift_quasi_convex",
        "lift_point_mass_normalized",
        "lift_cash_subadditive",
        "lift_icx_monotone",
        "lift_mixture_quasi_concave",
    )
    bad = []
    for name in axioms:
        out = campaign.outcome(name)
        if out.failures or out.passes != 200:
            bad.append((name, out.failures, out.worst_violation))
    ok = not bad
    assert verdict(
        ok,
        "6 axiom-campaign",
        f"8 properties x 200 cases, failures: {bad if bad else 'none'}",
    )


def test_07_counterexample_margins(campaign):
    level_fn = Step([1.5], [0.6, 0.2], "left")
    x = make_distribution([0.0, 1.0], [0.6, 0.4])

    def les(d):
        return lambda_lift(d, es_family(d), level_fn).value

    # cash additivity breaks: adding 1 moves the value by only 0.5
    shifted, base = les(x.shift(1.0)), les(x)
    cash_margin = abs(shifted - (base + 1.0))
    cash_exact = abs(shifted - 1.5) <= 1e-9 and abs(base + 1.0 - 2.0) <= 1e-9

    # convexity breaks on a common scenario space
    cx = make_distribution([0.0, 2.0], [0.6, 0.4])
    cz = make_distribution([0.0, 1.0], [0.6, 0.4])  # = (cx + 0)/2 pointwise
    convex_margin = les(cz) - 0.5 * (les(cx) + les(make_distribution([0.0], [1.0])))

    # mixture concavity breaks at the law level
    mix_level = Step([0.0], [0.8, 0.2], "right")
    mx = make_distribution([-20.0, 1.0], [0.2, 0.8])
    my = make_distribution([-20.0, -1.0], [0.8, 0.2])
    gamma = 0.75
    blended = make_distribution(
        [-20.0, -1.0, 1.0], [gamma * 0.2 + 0.25 * 0.8, 0.25 * 0.2, gamma * 0.8]
    )

    def les2(d):
        return lambda_lift(d, es_family(d), mix_level).value

    mix_margin = gamma * les2(mx) + (1.0 - gamma) * les2(my) - les2(blended)

    outcomes = [campaign.outcome(n) for n in (
        "must_fail_cash_additivity", "must_fail_convexity", "must_fail_mixture_concavity"
    )]
    campaign_ok = all(o.failures == 0 and o.passes == 200 for o in outcomes)
    ok = (
        cash_exact
        and abs(cash_margin - 0.5) <= 1e-9
        and convex_margin > 0.1
        and mix_margin > 0.1
        and campaign_ok
    )
    assert verdict(
        ok,
        "7 must-fail-margins",
        f"cash margin {cash_margin:.10f} (=0.5 within 1e-09), convexity margin "
        f"{convex_margin:.3f} (>0.1), mixture margin {mix_margin:.3f} (>0.1), "
        f"campaign {'clean' if campaign_ok else 'failed'}",
    )


def test_08_homogeneous_three_piece_form():
    rng = random.Random(SEED + 8)
    worst_eq = worst_scale = 0.0
    for _ in range(50):
        d = rand_dist(rng, 10)
        a1, a2, a3 = sorted((rng.uniform(0.02, 0.97) for _ in range(3)), reverse=True)
        p = rng.choice([1.0, 2.0, 3.0])
        hv = homogeneous_form_value(d, p, a1, a2, a3)
        for cont in ("left", "right"):
            level_fn = Step([0.0], [a1, a3], cont)
            got = lambda_lift(d, evar_family(d, p), level_fn).value
            worst_eq = max(worst_eq, abs(got - hv))
        for s in (0.5, 2.0, 10.0):
            scaled = lambda_lift(
                d.scale(s), evar_family(d.scale(s), p), Step([0.0], [a1, a3], "right")
            ).value
            base = lambda_lift(d, evar_family(d, p), Step([0.0], [a1, a3], "right")).value
            worst_scale = max(worst_scale, abs(scaled - s * base))
    ok = worst_eq <= 1e-8 and worst_scale <= 1e-7
    assert verdict(
        ok,
        "8 homogeneity",
        f"worst closed-form dev {worst_eq:.2e} (tol 1e-08), "
        f"worst scaling dev {worst_scale:.2e} (tol 1e-07)",
    )


def test_09_robust_closed_forms():
    rng = random.Random(SEED + 9)

    worst_zero = 0.0
    for _ in range(15):
        d = rand_dist(rng, 8)
        level_fn = rand_step(rng, cap=0.95)
        p = rng.choice([1.0, 2.0])
        res = worst_case_wasserstein(d, p, level_fn, 0.0)
        nominal = lambda_lift(d, evar_family(d, p), level_fn).value
        worst_zero = max(worst_zero, abs(res.value - nominal))

    monotone = True
    prev = -math.inf
    for delta in (0.0, 0.05, 0.2, 0.5, 1.0):
        v = worst_case_wasserstein(U4, 2.0, Step([3.6], [0.75, 0.25], "right"), delta).value
        monotone = monotone and v >= prev - 1e-12
        prev = v

    worst_const = 0.0
    for p in (1.0, 2.0, 3.0):
        for alpha in (0.2, 0.5, 0.8):
            for delta in (0.1, 0.7):
                got = worst_case_wasserstein(U4, p, Constant(alpha), delta).value
                want = evar_value(U4, p, alpha) + delta * (1.0 - alpha) ** (-1.0 / p)
                worst_const = max(worst_const, abs(got - want))

    worst_cantelli = 0.0
    for alpha in (0.1, 0.5, 0.9):
        for m, v in ((0.0, 1.0), (-2.0, 0.5), (3.0, 2.0)):
            got = worst_case_mean_variance(MomentSet(m, v), Constant(alpha)).value
            want = m + v * math.sqrt(alpha / (1.0 - alpha))
            worst_cantelli = max(
                worst_cantelli, abs(got - want) / (1.0 + abs(want))
            )

    fix_w = worst_case_wasserstein(U4, 1.0, Step([3.6], [0.75, 0.25], "right"), 0.3).value
    fix_m = worst_case_mean_variance(MomentSet(0.0, 1.0), Step([1.0], [0.8, 0.2], "right")).value

    ok = (
        worst_zero <= 1e-9
        and monotone
        and worst_const <= 1e-8
        and worst_cantelli <= 4.0 * np.finfo(float).eps
        and fix_w == pytest.approx(3.6, abs=1e-12)
        and fix_m == pytest.approx(1.0, abs=1e-12)
    )
    assert verdict(
        ok,
        "9 robust-closed-forms",
        f"delta-zero dev {worst_zero:.1e} (tol 1e-09), monotone {monotone}, "
        f"transport const dev {worst_const:.1e} (tol 1e-08), cantelli rel dev "
        f"{worst_cantelli:.1e} (machine precision), fixtures {fix_w:g}/{fix_m:g} (3.6/1.0)",
    )


def test_10_value_perturbation_smoke():
    # heuristic continuity check, not a proved modulus: nudging every atom
    # value by at most eps moves each lifted measure by at most 10*eps
    rng = random.Random(SEED + 10)
    worst_ratio = 0.0
    for i in range(50):
        d = rand_dist(rng, 10)
        level_fn = rand_step(rng, cap=0.95) if i % 2 else rand_pl(rng, cap=0.95)
        p = rng.choice([2.0, 3.0])
        families = (var_family, es_family, lambda dd: evar_family(dd, p))
        base = [lambda_lift(d, fam(d), level_fn).value for fam in families]
        for eps in (1e-3, 1e-4):
            bumped = make_distribution(
                [v + rng.uniform(-eps, eps) for v in d.values], d.probs
            )
            for fam, b in zip(families, base):
                moved = lambda_lift(bumped, fam(bumped), level_fn).value
                worst_ratio = max(worst_ratio, abs(moved - b) / eps)
    ok = worst_ratio <= 10.0
    assert verdict(
        ok, "10 perturbation-smoke", f"worst |move|/eps = {worst_ratio:.3f} (limit 10)"
    )
