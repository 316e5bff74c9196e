#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mautner/config.hpp"
#include "mautner/symbols.hpp"
#include "mautner/util.hpp"
#include "support/oracles.hpp"

using namespace mautner;

TEST_CASE("bump profile: center value, exact support, zero amplitude") {
    const DualVector center{cplx(0.2, 0.0), cplx(0.0, -0.1)};
    const FourierProfile a = make_bump_profile(0.5, 1.2, center, 0.8, cplx(2.0, 1.0));
    CHECK(std::abs(a(0.5, center) - cplx(2.0, 1.0)) < 1e-14);
    CHECK(a(0.5 + 1.2 + 1e-9, center) == cplx(0.0, 0.0));
    CHECK(a(0.5, DualVector{cplx(5.0, 0.0), cplx(0.0, 0.0)}) == cplx(0.0, 0.0));
    CHECK(a.c_time == doctest::Approx(1.7));

    const FourierProfile z = make_bump_profile(0.0, 1.0, {}, 1.0, cplx(0.0, 0.0));
    Rng rng(3);
    for (int k = 0; k < 50; ++k)
        CHECK(z(rng.uniform(-1, 1), {rng.complex_in_box(1.0), rng.complex_in_box(1.0)}) ==
              cplx(0.0, 0.0));

    CHECK_THROWS_AS(make_bump_profile(0.0, -1.0, {}, 1.0, cplx(1, 0)), std::domain_error);
}

TEST_CASE("partial fourier: zero profile, analytic Gaussian pair, Parseval slice") {
    const GroupContext ctx;
    SpaceSpec spec;
    spec.time_family = "gauss";
    spec.width_s = 0.8;
    const double w = 0.4;
    spec.c_width = w;
    const SpaceProfile f = make_space_profile(spec);

    SpaceProfile zero = f;
    zero.sep.reset();
    zero.eval = [](double, const CPair&) { return cplx(0.0, 0.0); };
    const auto pz = partial_fourier(ctx, zero, CGridSpec{2.0, 9});
    CHECK(std::abs(pz.profile(0.3, {cplx(0.5, 0), cplx(0, 0.5)})) == 0.0);

    // narrow Gaussian in c: transform is w^4 (2 pi)^2 e^{-w^2 |l|^2 / 2} times g(s)
    const auto pf = partial_fourier(ctx, f, CGridSpec{6.0 * w, 25});
    const double norm_const = w * w * w * w * 4.0 * std::numbers::pi * std::numbers::pi;
    for (double s : {0.0, 0.5}) {
        const double gs = std::exp(-0.5 * (s / 0.8) * (s / 0.8));
        for (const DualVector& l :
             {DualVector{}, DualVector{cplx(0.4, 0.1), cplx(-0.2, 0.3)}}) {
            const double l2 = std::norm(l.l1) + std::norm(l.l2);
            const cplx expected = gs * norm_const * std::exp(-0.5 * w * w * l2);
            CHECK(std::abs(pf.profile(s, l) - expected) < 1e-6 * norm_const);
        }
    }

    // Parseval on the c slice at s = 0.25: int |F|^2 dc = norm * int |F2|^2 dl
    const double s = 0.25;
    double space_energy = 0.0;
    {
        const int m = 25;
        const double box = 6.0 * w;
        auto ax = [&](int i) { return -box + 2.0 * box * i / (m - 1.0); };
        auto wt = [&](int i) {
            const double h = 2.0 * box / (m - 1.0);
            return (i == 0 || i == m - 1) ? 0.5 * h : h;
        };
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                for (int c = 0; c < m; ++c)
                    for (int d = 0; d < m; ++d) {
                        const CPair cc{cplx(ax(a), ax(b)), cplx(ax(c), ax(d))};
                        space_energy +=
                            wt(a) * wt(b) * wt(c) * wt(d) * std::norm(f.eval(s, cc));
                    }
    }
    double dual_energy = 0.0;
    {
        const int m = 21;
        const double box = 5.0 / w;
        auto ax = [&](int i) { return -box + 2.0 * box * i / (m - 1.0); };
        auto wt = [&](int i) {
            const double h = 2.0 * box / (m - 1.0);
            return (i == 0 || i == m - 1) ? 0.5 * h : h;
        };
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                for (int c = 0; c < m; ++c)
                    for (int d = 0; d < m; ++d) {
                        const DualVector l{cplx(ax(a), ax(b)), cplx(ax(c), ax(d))};
                        dual_energy +=
                            wt(a) * wt(b) * wt(c) * wt(d) * std::norm(pf.profile(s, l));
                    }
    }
    CHECK(space_energy ==
          doctest::Approx(ctx.fourier_norm * dual_energy).epsilon(1e-3));

    // separable fast path equals the raw 4-dim tensor quadrature
    SpaceProfile raw = f;
    raw.sep.reset();
    const auto pr = partial_fourier(ctx, raw, CGridSpec{6.0 * w, 9});
    const auto pq = partial_fourier(ctx, f, CGridSpec{6.0 * w, 9});
    const DualVector probe{cplx(0.7, -0.3), cplx(0.2, 0.5)};
    CHECK(std::abs(pr.profile(0.1, probe) - pq.profile(0.1, probe)) < 1e-12);
}

TEST_CASE("convolution: zero factor, support arithmetic, space-side oracle") {
    const GroupContext ctx;
    const double p = 0.35;
    const FourierProfile zero = make_bump_profile(0.0, 1.0, {}, 1.0, cplx(0, 0));
    const FourierProfile b = make_bump_profile(0.2, 0.8, {}, 2.0, cplx(1, 0));
    const auto zc = convolve_symbols(ctx, p, zero, b);
    CHECK(std::abs(zc.profile(0.3, {cplx(0.4, 0), cplx(0, 0)})) == 0.0);
    CHECK(zc.profile.c_time == doctest::Approx(zero.c_time + b.c_time));

    // Oracle run: Gaussian space profiles, both routes by quadrature.
    SpaceSpec fs;
    fs.time_family = "gauss";
    fs.width_s = 0.35;
    fs.c_width = 0.55;
    SpaceSpec gs = fs;
    gs.width_s = 0.3;
    gs.center_s = 0.15;
    gs.c_width = 0.5;
    const SpaceProfile f = make_space_profile(fs);
    const SpaceProfile g = make_space_profile(gs);

    const CGridSpec cgrid{3.3, 23};
    const FourierProfile fa = partial_fourier(ctx, f, cgrid).profile;
    const FourierProfile fb = partial_fourier(ctx, g, cgrid).profile;
    FourierProfile fa_supported = fa;
    fa_supported.c_time = f.c_time; // transforms carry no dual cutoff
    const auto conv = convolve_symbols(ctx, p, fa_supported, fb, ConvolveSpec{129});

    testing::OracleGrids og;
    og.n_t = 41;
    og.t_box = f.c_time + 0.1;
    og.n_d = 23;
    og.d_box = 3.3;
    og.n_c = 23;
    og.c_box = 3.3;
    double worst = 0.0, scale = 0.0;
    const std::pair<double, DualVector> probes[] = {
        {0.2, {cplx(0.5, 0.2), cplx(-0.3, 0.4)}},
        {-0.4, {cplx(0.1, -0.6), cplx(0.2, 0.1)}},
        {0.0, {cplx(0.0, 0.0), cplx(0.0, 0.0)}}};
    for (const auto& [s, l] : probes) {
        const cplx route_fourier = conv.profile(s, l);
        const cplx route_space = testing::fourier_of_space_conv(ctx, p, *f.sep, *g.sep, s, l, og);
        worst = std::max(worst, std::abs(route_fourier - route_space));
        scale = std::max(scale, std::abs(route_space));
    }
    CHECK(scale > 0.0);
    CHECK(worst <= 2e-4 * scale);
}

TEST_CASE("involution: involutive, isometric on mirrored samples, zero") {
    const GroupContext ctx;
    const double p = 0.4;
    const FourierProfile a =
        make_tent_profile(0.3, 1.0, {cplx(0.4, 0.0), cplx(0.0, 0.2)}, 1.5, cplx(1.0, 0.7));
    const FourierProfile astar = involution(ctx, p, a);
    const FourierProfile astarstar = involution(ctx, p, astar);
    Rng rng(41);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double s = rng.uniform(-1.2, 1.2);
        const DualVector l{rng.complex_in_box(1.5), rng.complex_in_box(1.5)};
        worst = std::max(worst, std::abs(astarstar(s, l) - a(s, l)));
    }
    CHECK(worst <= 1e-13);

    // p = 0: the map (s, l) -> (-s, dual_action(s, l)) is an involution of the
    // sample set; sup over a mirror-closed set is preserved exactly.
    const FourierProfile a0star = involution(ctx, 0.0, a);
    double sup_a = 0.0, sup_star = 0.0;
    for (int k = 0; k < 400; ++k) {
        const double s = rng.uniform(-1.3, 1.3);
        const DualVector l{rng.complex_in_box(1.5), rng.complex_in_box(1.5)};
        const DualVector ml = dual_action(ctx, 0.0, s, l);
        sup_a = std::max({sup_a, std::abs(a(s, l)), std::abs(a(-s, ml))});
        sup_star = std::max({sup_star, std::abs(a0star(s, l)), std::abs(a0star(-s, ml))});
    }
    CHECK(sup_a == doctest::Approx(sup_star).epsilon(1e-12));

    const FourierProfile zero = make_bump_profile(0.0, 1.0, {}, 1.0, cplx(0, 0));
    CHECK(std::abs(involution(ctx, p, zero)(0.2, {cplx(0.1, 0), cplx(0, 0)})) == 0.0);
}

TEST_CASE("lipschitz envelope: validation, zero profile, amplitude scaling") {
    const FourierProfile a = make_bump_profile(0.0, 1.0, {}, 1.2, cplx(1.5, 0.0));
    const EnvelopeReport rep = lipschitz_envelope(a);
    CHECK(rep.K == doctest::Approx((std::numbers::e - 1.0) * std::numbers::e));
    CHECK(rep.C_F == doctest::Approx(2.0 * a.c_dual * 1.5));
    CHECK(rep.phi_l1 > 0.0);

    const FourierProfile a2 = scale_profile(a, cplx(2.0, 0.0));
    const EnvelopeReport rep2 = lipschitz_envelope(a2);
    CHECK(rep2.C_F == doctest::Approx(2.0 * rep.C_F));
    CHECK(rep2.phi_l1 == doctest::Approx(rep.phi_l1));

    const FourierProfile zero = make_bump_profile(0.0, 1.0, {}, 1.0, cplx(0, 0));
    const EnvelopeReport zrep = lipschitz_envelope(zero);
    CHECK(zrep.C_F == 0.0);
    for (double v : zrep.phi_samples) CHECK(v == 0.0);

    // a lying envelope is reported with the violating pair
    FourierProfile lying = a;
    lying.envelope->phi = [](double) { return 1e-9; };
    CHECK_THROWS_AS(lipschitz_envelope(lying), std::runtime_error);

    FourierProfile bare = a;
    bare.envelope.reset();
    CHECK_THROWS_AS(lipschitz_envelope(bare), std::invalid_argument);
}

TEST_CASE("tent and gauss families respect their declared supports") {
    for (const FourierProfile& a :
         {make_tent_profile(0.1, 0.9, {cplx(0.3, 0), cplx(0, 0)}, 0.7, cplx(1, 0)),
          make_gauss_profile(-0.2, 0.4, {cplx(0, 0.2), cplx(0.1, 0)}, 0.6, cplx(0, 1))}) {
        Rng rng(59);
        for (int k = 0; k < 200; ++k) {
            const double s = rng.uniform(-4, 4);
            const DualVector l{rng.complex_in_box(4.0), rng.complex_in_box(4.0)};
            if (std::abs(s) > a.c_time ||
                std::max(std::abs(l.l1), std::abs(l.l2)) > a.c_dual)
                CHECK(a(s, l) == cplx(0.0, 0.0));
        }
        CHECK_NOTHROW(lipschitz_envelope(a, EnvelopeSamplingSpec{513, 2000, 5}));
    }
}
