// Interval schemes, mask operators, the sigma block construction that
// approximates pi^p_l by p = 0 fibers at orbit-translated duals, its norm
// bound, and the defect sweep with its rate regression.
#ifndef MAUTNER_SIGMA_HPP
#define MAUTNER_SIGMA_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mautner/operators.hpp"
#include "mautner/util.hpp"

namespace mautner {

struct IntervalScheme {
    double delta = 0.0;
    double epsilon = 0.0; // eps_delta
    double r = 0.0;       // r(delta)
    int j_min = 0;
    int j_max = -1;

    double breakpoint(int j) const { return static_cast<double>(j) / epsilon; }

    /// Index of the half-open cell [R_j, R_{j+1}) containing x; consistent
    /// across masks and the sigma assembly.
    int cell_index(double x) const;
};

/// eps = sqrt(delta), r = delta^{-1/4}, cells truncated to those meeting
/// [-T - r, T + r].
IntervalScheme scheme_default(double delta, double grid_half_width);

/// 0/1 diagonal over grid points.
struct MaskOperator {
    TimeGrid grid;
    std::vector<std::uint8_t> on;

    std::vector<cplx> apply(const std::vector<cplx>& xi) const;
};

MaskOperator mask_m(const IntervalScheme& scheme, int j, const TimeGrid& grid);
MaskOperator mask_n(const IntervalScheme& scheme, int j, const TimeGrid& grid);

/// sum_j M_j o pi^0 at orbit_action(p, -R_j, l) o N_j over the truncated range.
/// Requires c_time(A) <= r(delta).
KernelOperator sigma_operator(const GroupContext& ctx, double p, const DualVector& l,
                              const FourierProfile& a, const IntervalScheme& scheme,
                              const TimeGrid& grid);

struct SigmaBoundReport {
    double sigma_norm = 0.0;
    double sup_pi0 = 0.0; // sup over the sum's own frozen translates
    bool pass = false;
    std::vector<double> per_cell;
};

/// Checks ||sigma|| <= 3 * sup_j ||pi^0 at the frozen translate|| + 1e-8.
SigmaBoundReport sigma_bound_check(const GroupContext& ctx, double p, const DualVector& l,
                                   const FourierProfile& a, const IntervalScheme& scheme,
                                   const TimeGrid& grid);

struct DriftBound {
    double measured = 0.0;
    double majorant = 0.0;
};

/// Drift of the orbit translate across one cell against the closed-form
/// majorant (e^{|p|/eps} - 1)(e^{p R_j}|l1| + e^{-p R_j}|l2|).
DriftBound orbit_drift_bound(const GroupContext& ctx, const IntervalScheme& scheme, double p,
                             const DualVector& l, int j, int samples = 1001);

/// ||sigma^p_l(A) - pi^p_l(A)||; requires |p| <= delta.
double sigma_defect(const GroupContext& ctx, double p, const DualVector& l,
                    const FourierProfile& a, const IntervalScheme& scheme,
                    const TimeGrid& grid);

struct SweepCell {
    double delta = 0.0, epsilon = 0.0, r = 0.0, ratio = 0.0, p = 0.0;
    DualVector l;
    double defect = 0.0;
    bool ok = false;
    std::string error;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    std::vector<double> ratios;     // delta/eps per schedule entry
    std::vector<double> max_defect; // D(delta)
    bool slope_defined = false;
    LineFit fit; // log D against log(delta/eps)
};

/// For each delta: D(delta) = max over p = f*delta (f in p_factors, |f| <= 1)
/// and l-samples of sigma_defect. Cell failures are recorded, the sweep
/// continues. Deterministic for any worker count.
SweepResult defect_sweep(const GroupContext& ctx, const FourierProfile& a,
                         const std::vector<double>& deltas, const std::vector<double>& p_factors,
                         const std::vector<DualVector>& duals, const TimeGrid& grid,
                         int workers = 1);

/// ||pi^p_l(A) - pi^{p0}_l(A)|| for p0 != 0.
double continuity_defect(const GroupContext& ctx, double p0, double p, const DualVector& l,
                         const FourierProfile& a, const TimeGrid& grid);

} // namespace mautner

#endif
