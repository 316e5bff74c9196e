#include "mautner/checks.hpp"

#include <cmath>

namespace mautner {

MultiplicativityDefect multiplicativity_defect(const GroupContext& ctx, double p,
                                               const DualVector& l, const FourierProfile& a,
                                               const FourierProfile& b, const TimeGrid& grid,
                                               const ConvolveSpec& spec) {
    const ConvolvedProfile ab = convolve_symbols(ctx, p, a, b, spec);
    const KernelOperator kab = induced_kernel(ctx, p, l, ab.profile, grid);
    const KernelOperator ka = induced_kernel(ctx, p, l, a, grid);
    const KernelOperator kb = induced_kernel(ctx, p, l, b, grid);
    MultiplicativityDefect out;
    out.norm_a = operator_norm(ka);
    out.norm_b = operator_norm(kb);
    out.relative = operator_norm(kab - compose(ka, kb)) / (out.norm_a * out.norm_b);
    return out;
}

double convention_probe(const GroupContext& ctx) {
    // Dual widths chosen so the kernels die out before the grid boundary
    // (the orbit leaves the dual support), keeping the finite section exact.
    const FourierProfile a =
        make_gauss_profile(0.15, 0.45, {cplx(0.0, 0.0), cplx(0.0, 0.0)}, 0.5, cplx(1.0, 0.0));
    const FourierProfile b =
        make_gauss_profile(-0.1, 0.35, {cplx(0.2, 0.0), cplx(0.0, 0.1)}, 0.45, cplx(0.8, 0.4));
    const TimeGrid grid = TimeGrid::make(3.6, 56);
    const DualVector l{cplx(0.7, 0.3), cplx(-0.5, 0.2)};
    return multiplicativity_defect(ctx, 0.4, l, a, b, grid, ConvolveSpec{257}).relative;
}

TranslationInvariance haar_translation_check(const GroupContext& ctx, double p,
                                             const GroupElement& g0, int per_dim,
                                             double box_t, double box_c, double tent_radius) {
    // Kinks in the time direction only, at lattice points of the base grid,
    // so the reference integral is clean and the translated kinks carry a
    // stable h^2 error. The cosine modulation keeps the three kink terms
    // from cancelling; the fiber factors are smooth.
    auto tent = [tent_radius](double x) {
        return std::max(0.0, 1.0 - std::abs(x) / tent_radius);
    };
    auto modulation = [](double t) { return 1.0 + 0.6 * std::cos(1.1 * t); };
    const double sigma = 0.6;
    auto gauss = [sigma](double x) { return std::exp(-0.5 * (x / sigma) * (x / sigma)); };
    auto bump = [tent, modulation, gauss](const GroupElement& x) {
        return tent(x.t) * modulation(x.t) * gauss(x.z.real()) * gauss(x.z.imag()) *
               gauss(x.w.real()) * gauss(x.w.imag());
    };
    auto axis = [per_dim](double box, int i) {
        return -box + 2.0 * box * static_cast<double>(i) / (per_dim - 1.0);
    };
    auto weight = [per_dim](double box, int i) {
        const double h = 2.0 * box / (per_dim - 1.0);
        return (i == 0 || i == per_dim - 1) ? 0.5 * h : h;
    };

    const GroupElement g0inv = inverse(ctx, p, g0);
    double i0 = 0.0, ileft = 0.0, iright = 0.0;
    for (int a = 0; a < per_dim; ++a)
        for (int b = 0; b < per_dim; ++b)
            for (int c = 0; c < per_dim; ++c)
                for (int d = 0; d < per_dim; ++d)
                    for (int e = 0; e < per_dim; ++e) {
                        const GroupElement x{axis(box_t, a),
                                             cplx(axis(box_c, b), axis(box_c, c)),
                                             cplx(axis(box_c, d), axis(box_c, e))};
                        const double w = weight(box_t, a) * weight(box_c, b) *
                                         weight(box_c, c) * weight(box_c, d) *
                                         weight(box_c, e);
                        i0 += w * bump(x);
                        ileft += w * bump(multiply(ctx, p, g0inv, x));
                        iright += w * bump(multiply(ctx, p, x, g0inv));
                    }
    TranslationInvariance out;
    out.reference = i0;
    out.left_error = std::abs(ileft - i0);
    out.right_error = std::abs(iright - i0);
    return out;
}

} // namespace mautner
