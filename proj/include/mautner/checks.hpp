// Cross-cutting numerical checks shared by the CLI self-test and the test
// suites: the kernel multiplicativity oracle that pins the sign conventions,
// and the translation-invariance probe for the Haar measure.
#ifndef MAUTNER_CHECKS_HPP
#define MAUTNER_CHECKS_HPP

#include "mautner/operators.hpp"

namespace mautner {

struct MultiplicativityDefect {
    double relative = 0.0; // ||K[A*B] - K[A]K[B]|| / (||K[A]|| ||K[B]||)
    double norm_a = 0.0;
    double norm_b = 0.0;
};

MultiplicativityDefect multiplicativity_defect(const GroupContext& ctx, double p,
                                               const DualVector& l, const FourierProfile& a,
                                               const FourierProfile& b, const TimeGrid& grid,
                                               const ConvolveSpec& spec = {});

/// Relative multiplicativity defect on a small fixed instance; discriminates
/// the canonical convention from the transposed one at startup.
double convention_probe(const GroupContext& ctx);

struct TranslationInvariance {
    double reference = 0.0;  // integral of the bump
    double left_error = 0.0; // |integral of left translate - reference|
    double right_error = 0.0;
};

/// Tensor-trapezoid integral of a time-kinked 5-dim bump against its left
/// and right translates by g0 under the ._p product. The default geometry
/// puts the reference kinks on the 9-point lattice of [-3.2, 3.2] and works
/// cleanly with t-shifts congruent to h/3.
TranslationInvariance haar_translation_check(const GroupContext& ctx, double p,
                                             const GroupElement& g0, int per_dim,
                                             double box_t = 3.2, double box_c = 3.2,
                                             double tent_radius = 1.6);

} // namespace mautner

#endif
