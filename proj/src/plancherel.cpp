// Both sides of the direct-integral decomposition of the regular
// representation, by tensor trapezoid quadrature. The fiber pairing uses the
// intertwiner (W xi)(l)(s) = xi-hat(s, dual_action(p, -s, l)); the naive
// untwisted pairing only matches at the identity element. With separable
// profiles the dual integral factorizes per complex plane once the time sum
// is taken outermost, which is what makes fine dual grids affordable.
#include "mautner/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace mautner {

namespace {

struct Axis {
    std::vector<double> x;
    std::vector<double> w;

    Axis(double box, int m) : x(m), w(m) {
        const double h = 2.0 * box / static_cast<double>(m - 1);
        for (int i = 0; i < m; ++i) {
            x[i] = -box + h * static_cast<double>(i);
            w[i] = (i == 0 || i == m - 1) ? 0.5 * h : h;
        }
    }
};

/// Precomputed samples of one real profile factor plus its quadrature
/// transform against e^{i x freq}.
struct Line {
    Axis axis;
    std::vector<cplx> q;

    Line(const std::function<cplx(double)>& f, double box, int m) : axis(box, m), q(m) {
        for (int i = 0; i < m; ++i) q[i] = f(axis.x[i]);
    }

    cplx transform(double freq) const {
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i < q.size(); ++i)
            acc += axis.w[i] * q[i] * std::exp(cplx(0.0, axis.x[i] * freq));
        return acc;
    }
};

/// integral over one fiber plane of q(rot (b - center)) conj(r(b)).
cplx pair_plane(const std::function<cplx(double)>& qx, const std::function<cplx(double)>& qy,
                const Line& rx, const Line& ry, cplx rot, cplx center) {
    cplx acc{0.0, 0.0};
    const Axis& ax = rx.axis;
    for (std::size_t a = 0; a < ax.x.size(); ++a)
        for (std::size_t b = 0; b < ax.x.size(); ++b) {
            const cplx arg = rot * (cplx(ax.x[a], ax.x[b]) - center);
            const cplx qv = qx(arg.real()) * qy(arg.imag());
            if (qv == cplx{0.0, 0.0}) continue;
            acc += (ax.w[a] * ax.w[b]) * qv * std::conj(rx.q[a] * ry.q[b]);
        }
    return acc;
}

} // namespace

PlancherelResult plancherel_defect(const GroupContext& ctx, double p, const GroupElement& m,
                                   const SpaceProfile& xi, const SpaceProfile& eta,
                                   const PlancherelGrids& grids) {
    if (!xi.sep || !eta.sep)
        throw std::invalid_argument("plancherel_defect: profiles must be separable");
    if (grids.fiber.per_dim < 2 || !(grids.fiber.box > 0.0) || grids.dual_per_dim < 2 ||
        !(grids.dual_box > 0.0))
        throw std::invalid_argument("plancherel_defect: need at least 2 nodes per quadrature axis");
    const TimeGrid& tg = grids.time;
    if (std::abs(m.t / tg.h - std::round(m.t / tg.h)) > 1e-9)
        throw std::invalid_argument("plancherel_defect: m is not grid-aligned");
    if (xi.c_time + std::abs(m.t) > tg.half_width)
        throw std::invalid_argument("plancherel_defect: support escapes the grid under translation");
    const auto& sx = *xi.sep;
    const auto& se = *eta.sep;

    // Space side: <Lambda(m) xi, eta>, one time leg times two fiber planes.
    const Line e1x(se.q1x, grids.fiber.box, grids.fiber.per_dim);
    const Line e1y(se.q1y, grids.fiber.box, grids.fiber.per_dim);
    const Line e2x(se.q2x, grids.fiber.box, grids.fiber.per_dim);
    const Line e2y(se.q2y, grids.fiber.box, grids.fiber.per_dim);
    cplx time_leg{0.0, 0.0};
    for (int i = 0; i < tg.n; ++i)
        time_leg += tg.weights[i] * sx.g(tg.points[i] - m.t) * std::conj(se.g(tg.points[i]));
    const cplx rot1 = std::exp(cplx(-p * m.t, -m.t));
    const cplx rot2 = std::exp(cplx(p * m.t, -ctx.theta * m.t));
    const cplx space_side = time_leg * pair_plane(sx.q1x, sx.q1y, e1x, e1y, rot1, m.z) *
                            pair_plane(sx.q2x, sx.q2y, e2x, e2y, rot2, m.w);

    // Fourier side. Per row s the integrand factorizes over the two dual
    // planes, so the dual quadrature is two 2-dim sums instead of one 4-dim.
    const Line x1x(sx.q1x, grids.fiber.box, grids.fiber.per_dim);
    const Line x1y(sx.q1y, grids.fiber.box, grids.fiber.per_dim);
    const Line x2x(sx.q2x, grids.fiber.box, grids.fiber.per_dim);
    const Line x2y(sx.q2y, grids.fiber.box, grids.fiber.per_dim);
    const Axis dual(grids.dual_box, grids.dual_per_dim);
    const CPair cm{m.z, m.w};

    auto plane_sum = [&](const Line& xx, const Line& xy, const Line& ex, const Line& ey,
                         cplx phase_coeff, cplx twist_xi, cplx twist_eta) {
        cplx acc{0.0, 0.0};
        for (std::size_t a = 0; a < dual.x.size(); ++a)
            for (std::size_t b = 0; b < dual.x.size(); ++b) {
                const cplx l(dual.x[a], dual.x[b]);
                const cplx lx = twist_xi * l;
                const cplx le = twist_eta * l;
                const cplx xv = xx.transform(lx.real()) * xy.transform(lx.imag());
                const cplx ev = ex.transform(le.real()) * ey.transform(le.imag());
                const double phase = (phase_coeff * std::conj(l)).real();
                acc += (dual.w[a] * dual.w[b]) * std::exp(cplx(0.0, phase)) * xv *
                       std::conj(ev);
            }
        return acc;
    };

    cplx fourier_raw{0.0, 0.0};
    for (int i = 0; i < tg.n; ++i) {
        const double s = tg.points[i];
        const cplx ge = std::conj(se.g(s));
        if (ge == cplx{0.0, 0.0}) continue;
        const cplx gx = sx.g(s - m.t);
        if (gx == cplx{0.0, 0.0}) continue;
        const CPair alpha_c = automorphism_alpha(ctx, p, -s, cm);
        // dual-action twists for the xi fiber (at s - t) and the eta fiber (at s)
        const double r_xi = -(s - m.t);
        const cplx tw1_xi = std::exp(cplx(p * r_xi, -r_xi));
        const cplx tw2_xi = std::exp(cplx(-p * r_xi, -ctx.theta * r_xi));
        const cplx tw1_eta = std::exp(cplx(p * (-s), s));
        const cplx tw2_eta = std::exp(cplx(-p * (-s), ctx.theta * s));
        const cplx plane1 = plane_sum(x1x, x1y, e1x, e1y, alpha_c.z, tw1_xi, tw1_eta);
        const cplx plane2 = plane_sum(x2x, x2y, e2x, e2y, alpha_c.w, tw2_xi, tw2_eta);
        fourier_raw += tg.weights[i] * gx * ge * plane1 * plane2;
    }

    PlancherelResult out;
    out.space_side = space_side;
    out.fourier_side = ctx.fourier_norm * fourier_raw;
    out.defect = std::abs(out.space_side - out.fourier_side);
    return out;
}

} // namespace mautner
