#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mautner/config.hpp"
#include "mautner/sigma.hpp"
#include "mautner/util.hpp"

using namespace mautner;

TEST_CASE("default scheme: substitutions and schedule limits") {
    const IntervalScheme one = scheme_default(1.0, 5.0);
    CHECK(one.epsilon == 1.0);
    CHECK(one.r == 1.0);
    for (int j = -3; j <= 3; ++j) CHECK(one.breakpoint(j) == static_cast<double>(j));

    const IntervalScheme s16 = scheme_default(1.0 / 16.0, 5.0);
    CHECK(s16.epsilon == doctest::Approx(0.25));
    CHECK(s16.breakpoint(1) == doctest::Approx(4.0));
    CHECK(s16.r == doctest::Approx(2.0));
    CHECK(s16.delta / s16.epsilon == doctest::Approx(0.25));

    double prev_ratio = 2.0, prev_r = 0.0;
    for (int k = 1; k <= 10; ++k) {
        const IntervalScheme s = scheme_default(std::pow(2.0, -k), 5.0);
        CHECK(s.delta / s.epsilon < prev_ratio);
        CHECK(s.r > prev_r);
        CHECK(s.r <= 1.0 / s.epsilon + 1e-12);
        prev_ratio = s.delta / s.epsilon;
        prev_r = s.r;
    }

    CHECK_THROWS_AS(scheme_default(0.0, 5.0), std::domain_error);
    CHECK_THROWS_AS(scheme_default(1.5, 5.0), std::domain_error);
}

TEST_CASE("masks: partition of unity, disjointness, N covers the margin") {
    const TimeGrid grid = TimeGrid::make(6.0, 97);
    const IntervalScheme scheme = scheme_default(0.25, grid.half_width);

    std::vector<int> owner(grid.n, 0);
    for (int j = scheme.j_min; j <= scheme.j_max; ++j) {
        const MaskOperator m = mask_m(scheme, j, grid);
        for (int i = 0; i < grid.n; ++i) owner[i] += m.on[i] ? 1 : 0;
    }
    for (int i = 0; i < grid.n; ++i) CHECK(owner[i] == 1);

    for (int j = scheme.j_min; j <= scheme.j_max; ++j) {
        const MaskOperator mj = mask_m(scheme, j, grid);
        const MaskOperator nj = mask_n(scheme, j, grid);
        for (int i = 0; i < grid.n; ++i)
            if (mj.on[i]) CHECK(nj.on[i]); // N contains its own M cell
        // N_j is contained in the union of the three neighboring M cells
        const MaskOperator prev = mask_m(scheme, j - 1, grid);
        const MaskOperator next = mask_m(scheme, j + 1, grid);
        for (int i = 0; i < grid.n; ++i)
            if (nj.on[i]) CHECK(mj.on[i] + prev.on[i] + next.on[i] >= 1);
        if (j > scheme.j_min) {
            const MaskOperator other = mask_m(scheme, j - 1, grid);
            for (int i = 0; i < grid.n; ++i) CHECK(mj.on[i] * other.on[i] == 0);
        }
    }
}

TEST_CASE("sigma operator: exact at p = 0, zero symbol, cell-0 rows, support error") {
    const GroupContext ctx;
    const TimeGrid grid = TimeGrid::make(8.0, 128);
    const FourierProfile a = make_bump_profile(0.0, 1.0, {}, 1.0, cplx(1, 0));
    const DualVector l{cplx(0.6, 0.2), cplx(-0.4, 0.5)};
    const IntervalScheme scheme = scheme_default(0.25, grid.half_width);

    const KernelOperator sig0 = sigma_operator(ctx, 0.0, l, a, scheme, grid);
    const KernelOperator pi0 = induced_kernel(ctx, 0.0, l, a, grid);
    CHECK((sig0 - pi0).max_abs() <= 1e-12);

    const FourierProfile zero = make_bump_profile(0.0, 1.0, {}, 1.0, cplx(0, 0));
    CHECK(sigma_operator(ctx, 0.2, l, zero, scheme, grid).max_abs() == 0.0);

    // rows in the cell of R_0 = 0 freeze at the untranslated dual, so they
    // agree with pi^0 rows even for p != 0
    const double p = 0.2;
    const KernelOperator sig = sigma_operator(ctx, p, l, a, scheme, grid);
    double worst = 0.0;
    for (int i = 0; i < grid.n; ++i) {
        if (scheme.cell_index(grid.points[i]) != 0) continue;
        for (int j = 0; j < grid.n; ++j) worst = std::max(worst, std::abs(sig.at(i, j) - pi0.at(i, j)));
    }
    CHECK(worst <= 1e-13);

    const FourierProfile wide = make_bump_profile(0.0, 2.0, {}, 1.0, cplx(1, 0));
    CHECK_THROWS_WITH_AS(sigma_operator(ctx, 0.2, l, wide, scheme, grid),
                         doctest::Contains("support condition"), std::invalid_argument);
}

TEST_CASE("masked kernel identity under the support condition") {
    const GroupContext ctx;
    const TimeGrid grid = TimeGrid::make(8.0, 96);
    const IntervalScheme scheme = scheme_default(0.25, grid.half_width);
    const FourierProfile a = make_tent_profile(0.0, 1.0, {}, 1.2, cplx(1, 0.5));
    REQUIRE(a.c_time <= scheme.r);
    // M_j K = M_j K N_j exactly, for the induced kernel at any (p, l)
    for (double p : {0.0, 0.2, -0.45}) {
        const KernelOperator k =
            induced_kernel(ctx, p, {cplx(0.5, 0.1), cplx(-0.2, 0.3)}, a, grid);
        for (int j = scheme.j_min; j <= scheme.j_max; ++j) {
            const MaskOperator mj = mask_m(scheme, j, grid);
            const MaskOperator nj = mask_n(scheme, j, grid);
            for (int i = 0; i < grid.n; ++i) {
                if (!mj.on[i]) continue;
                for (int t = 0; t < grid.n; ++t)
                    if (!nj.on[t]) CHECK(k.at(i, t) == cplx(0.0, 0.0));
            }
        }
    }
}

TEST_CASE("sigma norm bound: zero symbol, random configurations, p = 0 equality") {
    const GroupContext ctx;
    const TimeGrid grid = TimeGrid::make(8.0, 96);
    const FourierProfile zero = make_bump_profile(0.0, 1.0, {}, 1.0, cplx(0, 0));
    const DualVector l0{cplx(0.5, 0.0), cplx(0.0, 0.5)};
    const IntervalScheme quarter = scheme_default(0.25, grid.half_width);
    const SigmaBoundReport zrep = sigma_bound_check(ctx, 0.1, l0, zero, quarter, grid);
    CHECK(zrep.sigma_norm == 0.0);
    CHECK(zrep.pass);

    const FourierProfile a =
        make_bump_profile(0.1, 0.9, {cplx(0.2, 0.0), cplx(0.0, 0.0)}, 1.2, cplx(1, 0.3));
    const SigmaBoundReport rep = sigma_bound_check(ctx, 0.1, l0, a, quarter, grid);
    CHECK(rep.pass);
    CHECK(rep.sigma_norm <= 3.0 * rep.sup_pi0 + 1e-8);

    const SigmaBoundReport rep0 = sigma_bound_check(ctx, 0.0, l0, a, quarter, grid);
    CHECK(rep0.pass);
    // at p = 0 the sum collapses to pi^0 itself, so the factor is 1
    CHECK(rep0.sigma_norm == doctest::Approx(rep0.sup_pi0).epsilon(1e-9));
}

TEST_CASE("orbit drift: zero at p = 0, first order in p, dominated by majorant") {
    const GroupContext ctx;
    const DualVector l{cplx(0.8, 0.3), cplx(-0.5, 0.4)};
    const IntervalScheme scheme = scheme_default(1.0 / 16.0, 6.0);

    CHECK(orbit_drift_bound(ctx, scheme, 0.0, l, 0).measured == 0.0);

    const double p = 1e-4;
    const IntervalScheme fine = scheme_default(0.01, 6.0);
    const DriftBound db = orbit_drift_bound(ctx, fine, p, l, 0);
    const double first_order = p / fine.epsilon * (std::abs(l.l1) + std::abs(l.l2));
    CHECK(db.measured == doctest::Approx(first_order).epsilon(2e-3));

    Rng rng(71);
    for (int k = 0; k < 50; ++k) {
        const double delta = rng.uniform(0.02, 0.5);
        const IntervalScheme s = scheme_default(delta, 6.0);
        const double q = rng.uniform(-delta, delta);
        const DualVector m{rng.complex_in_box(1.0), rng.complex_in_box(1.0)};
        const int j = static_cast<int>(rng.uniform(-3.0, 3.0));
        const DriftBound b = orbit_drift_bound(ctx, s, q, m, j);
        CHECK(b.measured <= b.majorant * (1.0 + 1e-12) + 1e-15);
    }

    CHECK_THROWS_AS(orbit_drift_bound(ctx, fine, 0.5, l, 0), std::invalid_argument);
}

TEST_CASE("sigma defect: zero at p = 0, square-root schedule contraction") {
    const GroupContext ctx;
    const TimeGrid grid = TimeGrid::make(12.0, 128);
    const FourierProfile a = make_tent_profile(0.0, 1.0, {}, 1.0, cplx(1, 0));
    const DualVector l{cplx(0.4, 0.1), cplx(-0.3, 0.2)};

    const IntervalScheme s4 = scheme_default(0.25, grid.half_width);
    CHECK(sigma_defect(ctx, 0.0, l, a, s4, grid) <= 1e-12);
    CHECK_THROWS_AS(sigma_defect(ctx, 0.5, l, a, s4, grid), std::invalid_argument);

    // halving delta contracts the sampled sup-defect by roughly sqrt(2); the
    // max over an l-grid smooths out per-point cell resonances
    std::vector<DualVector> duals;
    const double L = 0.5;
    for (double x : {-L, 0.0, L})
        for (double y : {-L, 0.0, L})
            for (double u : {-L, 0.0, L})
                for (double v : {-L, 0.0, L})
                    duals.push_back({cplx(x, y), cplx(u, v)});
    const SweepResult res =
        defect_sweep(ctx, a, {0.0625, 0.03125, 0.015625}, {1.0}, duals, grid, 2);
    const double r1 = res.max_defect[0] / res.max_defect[1];
    const double r2 = res.max_defect[1] / res.max_defect[2];
    CHECK(r1 > 1.2);
    CHECK(r1 < 1.8);
    CHECK(r2 > 1.2);
    CHECK(r2 < 1.8);
}

TEST_CASE("defect sweep: zero symbol, per-cell errors recorded, cross-check") {
    const GroupContext ctx;
    const TimeGrid grid = TimeGrid::make(8.0, 96);
    std::vector<DualVector> duals = {{cplx(0.4, 0.0), cplx(0.0, 0.4)},
                                     {cplx(-0.3, 0.2), cplx(0.1, 0.0)}};

    const FourierProfile zero = make_bump_profile(0.0, 1.0, {}, 1.0, cplx(0, 0));
    const SweepResult zres = defect_sweep(ctx, zero, {0.25, 0.125}, {1.0}, duals, grid, 1);
    for (const SweepCell& c : zres.cells) {
        CHECK(c.ok);
        CHECK(c.defect == 0.0);
    }
    CHECK_FALSE(zres.slope_defined);

    const FourierProfile a = make_tent_profile(0.0, 1.0, {}, 1.0, cplx(1, 0));
    const SweepResult res = defect_sweep(ctx, a, {0.25, 0.0625}, {1.0, -0.5}, duals, grid, 2);
    CHECK(res.cells.size() == 8);
    for (const SweepCell& c : res.cells) {
        CHECK(c.ok);
        const IntervalScheme s = scheme_default(c.delta, grid.half_width);
        CHECK(c.defect == sigma_defect(ctx, c.p, c.l, a, s, grid));
    }
    CHECK(res.max_defect[1] < res.max_defect[0]);

    // a symbol too wide for the coarsest delta: those cells fail, sweep continues
    const FourierProfile wide = make_tent_profile(0.0, 1.35, {}, 1.0, cplx(1, 0));
    CHECK_THROWS_AS(defect_sweep(ctx, a, {0.25, 0.5}, {1.0}, duals, grid, 1),
                    std::invalid_argument);
    const SweepResult bad = defect_sweep(ctx, wide, {0.9, 0.25}, {1.0}, duals, grid, 1);
    int failed = 0;
    for (const SweepCell& c : bad.cells)
        if (!c.ok) {
            ++failed;
            CHECK(c.error.find("support condition") != std::string::npos);
        }
    CHECK(failed == 2); // r(0.9) < 1.35 fails on both duals, r(0.25) passes
}

TEST_CASE("continuity defect: zero at p0, first-order decay, sup over duals") {
    const GroupContext ctx;
    const TimeGrid grid = TimeGrid::make(6.0, 96);
    const FourierProfile a = make_gauss_profile(0.0, 0.8, {}, 1.2, cplx(1, 0));
    const DualVector l{cplx(0.5, 0.1), cplx(-0.2, 0.3)};

    CHECK(continuity_defect(ctx, 0.5, 0.5, l, a, grid) == 0.0);
    CHECK_THROWS_AS(continuity_defect(ctx, 0.0, 0.1, l, a, grid), std::domain_error);

    std::vector<double> gaps, defects;
    for (int k = 3; k <= 6; ++k) {
        const double gap = std::pow(2.0, -k);
        gaps.push_back(gap);
        defects.push_back(continuity_defect(ctx, 0.5, 0.5 + gap, l, a, grid));
    }
    for (std::size_t i = 1; i < defects.size(); ++i) CHECK(defects[i] < defects[i - 1]);
    const LineFit fit = fit_loglog(gaps, defects);
    CHECK(fit.slope > 0.8);
    CHECK(fit.slope < 1.2);

    DualGrid duals = DualGrid::tensor(0.6, 3);
    double sup_far = 0.0, sup_near = 0.0;
    for (const DualVector& lv : duals.points) {
        sup_far = std::max(sup_far, continuity_defect(ctx, 0.5, 0.625, lv, a, grid));
        sup_near = std::max(sup_near, continuity_defect(ctx, 0.5, 0.53125, lv, a, grid));
    }
    CHECK(sup_near < sup_far);
}
