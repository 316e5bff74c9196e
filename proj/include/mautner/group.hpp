// Arithmetic of the variable Mautner group: the family of products ._p on
// R x C^2, the one-parameter twist alpha_p, the dual and orbit actions on
// (C^2)*, the Lie bracket, and the cross-parameter coordinate map h_{p0,p}.
#ifndef MAUTNER_GROUP_HPP
#define MAUTNER_GROUP_HPP

#include <complex>
#include <numbers>

#include "mautner/util.hpp"

namespace mautner {

/// Which variable the induced kernel's dual action rides on. `Row` is the
/// convention forced by the multiplicativity oracle; `Column` reproduces the
/// transposed variant and exists so the startup self-test can prove the
/// oracle actually discriminates.
enum class DualArgument { Row, Column };

struct GroupContext {
    double theta = std::numbers::sqrt2;
    DualArgument dual_argument = DualArgument::Row;
    /// Plancherel constant for the C^2 transform with kernel e^{+i<c,l>}.
    double fourier_norm = 1.0 / (2 * std::numbers::pi) / (2 * std::numbers::pi) /
                          (2 * std::numbers::pi) / (2 * std::numbers::pi);

    GroupContext() = default;
    GroupContext(double theta_, DualArgument conv, double fnorm);
};

/// Fiber coordinate c = (z, w) in C^2.
struct CPair {
    cplx z{0.0, 0.0};
    cplx w{0.0, 0.0};
};

/// A point (t, z, w) of M = R x C^2.
struct GroupElement {
    double t = 0.0;
    cplx z{0.0, 0.0};
    cplx w{0.0, 0.0};
};

/// A dual vector l = (l1, l2) in (C^2)* identified with C^2.
struct DualVector {
    cplx l1{0.0, 0.0};
    cplx l2{0.0, 0.0};
};

/// tau*T + u*U + v*V in the variable Lie algebra.
struct LieVector {
    double tau = 0.0;
    cplx u{0.0, 0.0};
    cplx v{0.0, 0.0};
};

inline GroupElement group_identity() { return {}; }

/// alpha_p(t)(z, w) = (e^{(p+i)t} z, e^{(-p+i theta)t} w).
CPair automorphism_alpha(const GroupContext& ctx, double p, double t, const CPair& c);

/// (t,c) ._p (t',c') = (t+t', c + alpha_p(t) c').
GroupElement multiply(const GroupContext& ctx, double p, const GroupElement& g,
                      const GroupElement& h);

GroupElement inverse(const GroupContext& ctx, double p, const GroupElement& g);

/// Transpose of alpha_p(t) under the pairing: (e^{(p-i)t} l1, e^{(-p-i theta)t} l2).
DualVector dual_action(const GroupContext& ctx, double p, double t, const DualVector& l);

/// z (.)_p l with z = t + iu: (e^{pt+iu} l1, e^{-pt+i theta u} l2).
DualVector orbit_action(const GroupContext& ctx, double p, cplx zc, const DualVector& l);

/// <c, l> = Re(c1 conj(l1)) + Re(c2 conj(l2)); real-bilinear.
double pairing(const CPair& c, const DualVector& l);

/// Bilinear antisymmetric extension of [T,U] = (i+p)U, [T,V] = (i theta - p)V.
LieVector lie_bracket(const GroupContext& ctx, double p, const LieVector& x,
                      const LieVector& y);

/// h_{p0,p}(t, c) = ((p0/p) t, c) between nonzero parameters.
GroupElement iso_h(double p0, double p, const GroupElement& g);

} // namespace mautner

#endif
