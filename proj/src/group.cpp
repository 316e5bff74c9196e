#include "mautner/group.hpp"

#include <cmath>
#include <stdexcept>

namespace mautner {

namespace {

bool finite(const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

void require_parameter(double p) {
    if (!std::isfinite(p) || std::abs(p) > 1.0)
        throw std::domain_error("group parameter p must lie in [-1, 1]");
}

void require_finite(const GroupElement& g) {
    if (!std::isfinite(g.t) || !finite(g.z) || !finite(g.w))
        throw std::domain_error("group element has non-finite coordinates");
}

} // namespace

GroupContext::GroupContext(double theta_, DualArgument conv, double fnorm)
    : theta(theta_), dual_argument(conv), fourier_norm(fnorm) {
    if (!std::isfinite(theta) || theta == 0.0)
        throw std::domain_error("theta must be finite and nonzero");
    if (!(fourier_norm > 0.0))
        throw std::domain_error("fourier normalization must be positive");
}

CPair automorphism_alpha(const GroupContext& ctx, double p, double t, const CPair& c) {
    const cplx ez = std::exp(cplx(p * t, t));
    const cplx ew = std::exp(cplx(-p * t, ctx.theta * t));
    return {ez * c.z, ew * c.w};
}

GroupElement multiply(const GroupContext& ctx, double p, const GroupElement& g,
                      const GroupElement& h) {
    require_parameter(p);
    require_finite(g);
    require_finite(h);
    const CPair twisted = automorphism_alpha(ctx, p, g.t, {h.z, h.w});
    return {g.t + h.t, g.z + twisted.z, g.w + twisted.w};
}

GroupElement inverse(const GroupContext& ctx, double p, const GroupElement& g) {
    require_parameter(p);
    require_finite(g);
    const CPair back = automorphism_alpha(ctx, p, -g.t, {g.z, g.w});
    return {-g.t, -back.z, -back.w};
}

DualVector dual_action(const GroupContext& ctx, double p, double t, const DualVector& l) {
    const cplx e1 = std::exp(cplx(p * t, -t));
    const cplx e2 = std::exp(cplx(-p * t, -ctx.theta * t));
    return {e1 * l.l1, e2 * l.l2};
}

DualVector orbit_action(const GroupContext& ctx, double p, cplx zc, const DualVector& l) {
    const double t = zc.real();
    const double u = zc.imag();
    const cplx e1 = std::exp(cplx(p * t, u));
    const cplx e2 = std::exp(cplx(-p * t, ctx.theta * u));
    return {e1 * l.l1, e2 * l.l2};
}

double pairing(const CPair& c, const DualVector& l) {
    return (c.z * std::conj(l.l1)).real() + (c.w * std::conj(l.l2)).real();
}

LieVector lie_bracket(const GroupContext& ctx, double p, const LieVector& x,
                      const LieVector& y) {
    // Only [T, .] is nonzero; the tau component of a bracket vanishes.
    const cplx cu(p, 1.0);
    const cplx cv(-p, ctx.theta);
    LieVector out;
    out.tau = 0.0;
    out.u = cu * (x.tau * y.u - y.tau * x.u);
    out.v = cv * (x.tau * y.v - y.tau * x.v);
    return out;
}

GroupElement iso_h(double p0, double p, const GroupElement& g) {
    if (p == 0.0 || p0 == 0.0)
        throw std::domain_error("iso_h requires nonzero parameters");
    require_finite(g);
    return {(p0 / p) * g.t, g.z, g.w};
}

} // namespace mautner
