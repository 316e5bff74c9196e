#include "mautner/symbols.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mautner {

namespace {

double bump_shape(double x) {
    const double x2 = x * x;
    if (x2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - x2));
}

// sup |d/dx bump_shape| over (-1, 1), fixed by a one-time dense scan.
double bump_lipschitz() {
    static const double value = [] {
        double best = 0.0;
        const int n = 200001;
        for (int i = 1; i + 1 < n; ++i) {
            const double x = -1.0 + 2.0 * i / (n - 1.0);
            const double one = 1.0 - x * x;
            const double d = bump_shape(x) * std::abs(2.0 * x) / (one * one);
            if (d > best) best = d;
        }
        return best * (1.0 + 1e-6);
    }();
    return value;
}

double tent_shape(double x) { return std::max(0.0, 1.0 - std::abs(x)); }

// Gaussian with a C0 ramp to zero over [4, 5] in units of the width.
double cut_gauss_shape(double y) {
    if (y >= 5.0) return 0.0;
    const double g = std::exp(-0.5 * y * y);
    if (y <= 4.0) return g;
    return g * (5.0 - y);
}

double cut_gauss_lipschitz() {
    // |d/dy| <= sup(y e^{-y^2/2}) + sup over the ramp of e^{-y^2/2}.
    return std::exp(-0.5) + std::exp(-8.0);
}

double norm4(const DualVector& a, const DualVector& b) {
    const cplx d1 = a.l1 - b.l1;
    const cplx d2 = a.l2 - b.l2;
    return std::sqrt(std::norm(d1) + std::norm(d2));
}

double comp_max(const DualVector& l) { return std::max(std::abs(l.l1), std::abs(l.l2)); }

FourierProfile separable_profile(std::function<double(double)> time_shape, double time_radius,
                                 std::function<double(double)> dual_shape, double dual_reach,
                                 double dual_lip, double center_s, double width_s,
                                 const DualVector& center_l, double width_l, cplx amplitude) {
    if (!(width_s > 0.0) || !(width_l > 0.0))
        throw std::domain_error("profile widths must be positive");
    FourierProfile p;
    p.c_time = std::abs(center_s) + time_radius * width_s;
    p.c_dual = comp_max(center_l) + dual_reach * width_l;
    DualVector cl = center_l;
    p.eval = [=](double s, const DualVector& l) -> cplx {
        const double ts = time_shape((s - center_s) / width_s);
        if (ts == 0.0) return {0.0, 0.0};
        const double rho = norm4(l, cl) / width_l;
        const double ds = dual_shape(rho);
        if (ds == 0.0) return {0.0, 0.0};
        return amplitude * ts * ds;
    };
    LipschitzEnvelope env;
    const double lip = dual_lip / width_l;
    env.phi = [=](double u) { return time_shape((u - center_s) / width_s) * lip; };
    env.amplitude = std::abs(amplitude);
    p.envelope = env;
    return p;
}

} // namespace

FourierProfile make_bump_profile(double center_s, double width_s, const DualVector& center_l,
                                 double width_l, cplx amplitude) {
    return separable_profile(bump_shape, 1.0, bump_shape, 1.0, bump_lipschitz(), center_s,
                             width_s, center_l, width_l, amplitude);
}

FourierProfile make_tent_profile(double center_s, double width_s, const DualVector& center_l,
                                 double width_l, cplx amplitude) {
    return separable_profile(tent_shape, 1.0, cut_gauss_shape, 5.0, cut_gauss_lipschitz(),
                             center_s, width_s, center_l, width_l, amplitude);
}

FourierProfile make_gauss_profile(double center_s, double width_s, const DualVector& center_l,
                                  double width_l, cplx amplitude) {
    auto trunc_gauss = [](double x) {
        return std::abs(x) > 4.0 ? 0.0 : std::exp(-0.5 * x * x);
    };
    return separable_profile(trunc_gauss, 4.0, cut_gauss_shape, 5.0, cut_gauss_lipschitz(),
                             center_s, width_s, center_l, width_l, amplitude);
}

FourierProfile scale_profile(const FourierProfile& a, cplx factor) {
    FourierProfile out = a;
    auto base = a.eval;
    out.eval = [base, factor](double s, const DualVector& l) { return factor * base(s, l); };
    if (out.envelope) out.envelope->amplitude = a.envelope->amplitude * std::abs(factor);
    return out;
}

ConvolvedProfile convolve_symbols(const GroupContext& ctx, double p, const FourierProfile& a,
                                  const FourierProfile& b, const ConvolveSpec& spec) {
    if (spec.n < 2) throw std::invalid_argument("convolve_symbols: need at least 2 nodes");
    ConvolvedProfile out;
    const double radius = a.c_time;
    const int n = spec.n;
    std::vector<double> tau(n), w(n);
    std::vector<cplx> f1(n), f2(n);
    const double span = radius > 0.0 ? radius : 1.0;
    const double h = 2.0 * span / static_cast<double>(n - 1);
    for (int k = 0; k < n; ++k) {
        tau[k] = -span + h * static_cast<double>(k);
        w[k] = (k == 0 || k == n - 1) ? 0.5 * h : h;
        f1[k] = std::exp(cplx(p * tau[k], -tau[k]));
        f2[k] = std::exp(cplx(-p * tau[k], -ctx.theta * tau[k]));
    }
    auto ea = a.eval;
    auto eb = b.eval;
    const double c_time = a.c_time + b.c_time;
    out.profile.c_time = c_time;
    out.profile.c_dual = a.c_dual;
    out.profile.eval = [=](double s, const DualVector& l) -> cplx {
        if (std::abs(s) > c_time) return {0.0, 0.0};
        cplx acc{0.0, 0.0};
        for (int k = 0; k < n; ++k) {
            const cplx av = ea(tau[k], l);
            if (av == cplx{0.0, 0.0}) continue;
            const DualVector shifted{f1[k] * l.l1, f2[k] * l.l2};
            acc += w[k] * av * eb(s - tau[k], shifted);
        }
        return acc;
    };
    if (n < 65) out.warning = "convolution grid has fewer than 65 nodes; quadrature may be coarse";
    return out;
}

FourierProfile involution(const GroupContext& ctx, double p, const FourierProfile& a) {
    FourierProfile out;
    out.c_time = a.c_time;
    out.c_dual = a.c_dual * std::exp(std::abs(p) * a.c_time);
    auto base = a.eval;
    out.eval = [base, ctx, p](double s, const DualVector& l) {
        return std::conj(base(-s, dual_action(ctx, p, s, l)));
    };
    if (a.envelope) {
        LipschitzEnvelope env;
        auto phi = a.envelope->phi;
        const double grow = std::exp(std::abs(p) * a.c_time);
        env.phi = [phi, grow](double u) { return phi(-u) * grow; };
        env.amplitude = a.envelope->amplitude;
        out.envelope = env;
    }
    return out;
}

PartialFourierResult partial_fourier(const GroupContext& ctx, const SpaceProfile& f,
                                     const CGridSpec& spec) {
    (void)ctx;
    if (spec.per_dim < 2 || !(spec.box > 0.0))
        throw std::invalid_argument("partial_fourier: need box > 0 and per_dim >= 2");
    PartialFourierResult out;
    const int m = spec.per_dim;
    std::vector<double> axis(m), w(m);
    const double h = 2.0 * spec.box / static_cast<double>(m - 1);
    for (int i = 0; i < m; ++i) {
        axis[i] = -spec.box + h * static_cast<double>(i);
        w[i] = (i == 0 || i == m - 1) ? 0.5 * h : h;
    }
    out.profile.c_time = f.c_time;
    out.profile.c_dual = std::numeric_limits<double>::infinity();
    if (f.sep) {
        auto sep = *f.sep;
        auto line = [axis, w, m](const std::function<cplx(double)>& q, double freq) -> cplx {
            cplx acc{0.0, 0.0};
            for (int i = 0; i < m; ++i)
                acc += w[i] * q(axis[i]) * std::exp(cplx(0.0, axis[i] * freq));
            return acc;
        };
        out.profile.eval = [sep, line](double s, const DualVector& l) -> cplx {
            const cplx gs = sep.g(s);
            if (gs == cplx{0.0, 0.0}) return {0.0, 0.0};
            return gs * line(sep.q1x, l.l1.real()) * line(sep.q1y, l.l1.imag()) *
                   line(sep.q2x, l.l2.real()) * line(sep.q2y, l.l2.imag());
        };
    } else {
        auto eval = f.eval;
        out.profile.eval = [eval, axis, w, m](double s, const DualVector& l) -> cplx {
            cplx acc{0.0, 0.0};
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b)
                    for (int c = 0; c < m; ++c)
                        for (int d = 0; d < m; ++d) {
                            const CPair cc{cplx(axis[a], axis[b]), cplx(axis[c], axis[d])};
                            const cplx fv = eval(s, cc);
                            if (fv == cplx{0.0, 0.0}) continue;
                            const double phase = axis[a] * l.l1.real() + axis[b] * l.l1.imag() +
                                                 axis[c] * l.l2.real() + axis[d] * l.l2.imag();
                            acc += (w[a] * w[b] * w[c] * w[d]) * fv * std::exp(cplx(0.0, phase));
                        }
            return acc;
        };
    }
    if (spec.box < f.c_box)
        out.warning = "fiber grid does not cover the declared support box";
    else if (f.c_box > 0.0 && h > 0.25 * f.c_box)
        out.warning = "fiber grid is coarse relative to the declared support";
    return out;
}

EnvelopeReport lipschitz_envelope(const FourierProfile& a, const EnvelopeSamplingSpec& spec) {
    if (!a.envelope)
        throw std::invalid_argument("lipschitz_envelope: profile has no attached envelope");
    if (!std::isfinite(a.c_dual))
        throw std::invalid_argument("lipschitz_envelope: profile has no finite dual support");
    EnvelopeReport rep;
    rep.K = (std::numbers::e - 1.0) * std::numbers::e;
    const double amp = a.envelope->amplitude;
    rep.C_F = 2.0 * a.c_dual * amp;

    const int m = std::max(3, spec.phi_samples);
    rep.phi_samples.resize(m);
    const double hs = 2.0 * a.c_time / static_cast<double>(m - 1);
    double l1 = 0.0;
    for (int i = 0; i < m; ++i) {
        const double u = -a.c_time + hs * static_cast<double>(i);
        const double v = amp == 0.0 ? 0.0 : a.envelope->phi(u);
        rep.phi_samples[i] = v;
        l1 += v * ((i == 0 || i == m - 1) ? 0.5 * hs : hs);
    }
    rep.phi_l1 = l1;

    const int radial = 33;
    rep.psi_samples.resize(radial);
    for (int i = 0; i < radial; ++i) {
        const double rho = 1.2 * a.c_dual * static_cast<double>(i) / (radial - 1.0);
        rep.psi_samples[i] = (rho <= a.c_dual) ? amp : 0.0;
    }

    if (amp == 0.0) return rep;

    Rng rng(spec.seed);
    auto in_support = [&](const DualVector& l) {
        return std::max(std::abs(l.l1), std::abs(l.l2)) <= a.c_dual;
    };
    for (int k = 0; k < spec.pair_checks; ++k) {
        const double u = rng.uniform(-a.c_time, a.c_time);
        const double reach = 1.1 * a.c_dual;
        const DualVector l{rng.complex_in_box(reach), rng.complex_in_box(reach)};
        const DualVector lp{rng.complex_in_box(reach), rng.complex_in_box(reach)};
        const double lhs = std::abs(a.eval(u, l) - a.eval(u, lp));
        const double psi = (in_support(l) || in_support(lp)) ? amp : 0.0;
        const double rhs = a.envelope->phi(u) * norm4(l, lp) * psi;
        if (lhs > rhs * (1.0 + 1e-9) + 1e-13) {
            std::ostringstream msg;
            msg << "lipschitz envelope violated at u=" << u << " l=(" << l.l1 << "," << l.l2
                << ") l'=(" << lp.l1 << "," << lp.l2 << "): |dA|=" << lhs << " bound=" << rhs;
            throw std::runtime_error(msg.str());
        }
    }
    return rep;
}

} // namespace mautner
