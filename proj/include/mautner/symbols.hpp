// The symbol class represented on the Fourier side: F-hat-2 profiles with
// exact compact supports and Lipschitz envelopes, the shipped families
// (smooth bump, tent, truncated Gaussian), Fourier-side convolution, the
// involution, and the space-side partial Fourier oracle.
#ifndef MAUTNER_SYMBOLS_HPP
#define MAUTNER_SYMBOLS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mautner/group.hpp"

namespace mautner {

/// Amplitude-split Lipschitz data: |A(u,l) - A(u,l')| <= phi(u)*|l-l'|*psi(l,l')
/// with phi the unit-amplitude shape and psi = |amplitude| on the support.
struct LipschitzEnvelope {
    std::function<double(double)> phi;
    double amplitude = 0.0;
};

struct FourierProfile {
    std::function<cplx(double, const DualVector&)> eval;
    double c_time = 0.0; // eval(s, l) = 0 whenever |s| > c_time
    double c_dual = 0.0; // eval(s, l) = 0 whenever max(|l1|, |l2|) > c_dual
    std::optional<LipschitzEnvelope> envelope;

    cplx operator()(double s, const DualVector& l) const { return eval(s, l); }
};

struct SpaceProfile {
    std::function<cplx(double, const CPair&)> eval;
    double c_time = 0.0;
    double c_box = 0.0; // support box half-width per real fiber coordinate

    /// F(s, c) = g(s) * q1x(Re c1) q1y(Im c1) * q2x(Re c2) q2y(Im c2).
    struct Separable {
        std::function<cplx(double)> g, q1x, q1y, q2x, q2y;
    };
    std::optional<Separable> sep;
};

/// Smooth separable bump: amplitude at the center, exact support radii,
/// analytic envelope attached.
FourierProfile make_bump_profile(double center_s, double width_s, const DualVector& center_l,
                                 double width_l, cplx amplitude);

/// C0 tent in time x Gaussian-with-smooth-far-cutoff in the dual variable.
/// The time kink is the clean order-2 quadrature probe.
FourierProfile make_tent_profile(double center_s, double width_s, const DualVector& center_l,
                                 double width_l, cplx amplitude);

/// Gaussian truncated at 4 widths in time x cut Gaussian in the dual variable.
FourierProfile make_gauss_profile(double center_s, double width_s, const DualVector& center_l,
                                  double width_l, cplx amplitude);

FourierProfile scale_profile(const FourierProfile& a, cplx factor);

struct ConvolveSpec {
    int n = 1025; // interior quadrature points for the time integral
};

struct ConvolvedProfile {
    FourierProfile profile;
    std::string warning; // nonempty when the internal grid is suspect
};

/// Fourier side of the ._p convolution:
/// (A *_p B)^(s, l) = integral over t of A(t, l) B(s - t, dual_action(p, t, l)) dt.
ConvolvedProfile convolve_symbols(const GroupContext& ctx, double p, const FourierProfile& a,
                                  const FourierProfile& b, const ConvolveSpec& spec = {});

/// Fourier side of F -> F*: conj(A(-s, dual_action(p, s, l))).
FourierProfile involution(const GroupContext& ctx, double p, const FourierProfile& a);

struct CGridSpec {
    double box = 0.0;  // fiber quadrature box half-width per real coordinate
    int per_dim = 0;   // points per real coordinate
};

struct PartialFourierResult {
    FourierProfile profile;
    std::string warning;
};

/// 4-dim quadrature of F(s, .) against e^{i<c,l>}; oracle-side transform.
PartialFourierResult partial_fourier(const GroupContext& ctx, const SpaceProfile& f,
                                     const CGridSpec& spec);

struct EnvelopeReport {
    std::vector<double> phi_samples;
    std::vector<double> psi_samples;
    double K = 0.0;
    double C_F = 0.0;
    double phi_l1 = 0.0; // 1-norm of phi by dense quadrature
};

struct EnvelopeSamplingSpec {
    int phi_samples = 4097;
    int pair_checks = 10000;
    std::uint64_t seed = 17;
};

/// Numerically validated envelope and the constants of the defect bound.
/// Throws std::runtime_error naming the violating pair when the declared
/// envelope fails on sampled inputs.
EnvelopeReport lipschitz_envelope(const FourierProfile& a, const EnvelopeSamplingSpec& spec = {});

} // namespace mautner

#endif
