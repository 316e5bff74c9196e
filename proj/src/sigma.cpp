#include "mautner/sigma.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mautner/parallel.hpp"

namespace mautner {

namespace {

// Absolute slack for N-cell membership; covers the floating-point fuzz of
// cell assignment near breakpoints without changing any honest cell.
constexpr double kEdgeSlack = 1e-9;

void require_support_condition(const FourierProfile& a, const IntervalScheme& s) {
    if (a.c_time > s.r + 1e-12) {
        std::ostringstream msg;
        msg << "sigma: support condition violated, c_time(A) = " << a.c_time
            << " exceeds r(delta) = " << s.r;
        throw std::invalid_argument(msg.str());
    }
}

} // namespace

int IntervalScheme::cell_index(double x) const {
    return static_cast<int>(std::floor(x * epsilon + 1e-12));
}

IntervalScheme scheme_default(double delta, double grid_half_width) {
    if (!(delta > 0.0) || delta > 1.0)
        throw std::domain_error("scheme_default: delta must lie in (0, 1]");
    if (!(grid_half_width > 0.0))
        throw std::domain_error("scheme_default: grid half-width must be positive");
    IntervalScheme s;
    s.delta = delta;
    s.epsilon = std::sqrt(delta);
    s.r = std::pow(delta, -0.25);
    if (s.r > 1.0 / s.epsilon + 1e-12)
        throw std::domain_error("scheme_default: r(delta) exceeds the cell width");
    s.j_min = s.cell_index(-grid_half_width - s.r);
    s.j_max = s.cell_index(grid_half_width + s.r);
    return s;
}

std::vector<cplx> MaskOperator::apply(const std::vector<cplx>& xi) const {
    if (xi.size() != on.size())
        throw std::invalid_argument("MaskOperator::apply: size mismatch");
    std::vector<cplx> out(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) out[i] = on[i] ? xi[i] : cplx{0.0, 0.0};
    return out;
}

MaskOperator mask_m(const IntervalScheme& scheme, int j, const TimeGrid& grid) {
    MaskOperator m;
    m.grid = grid;
    m.on.resize(grid.n);
    for (int i = 0; i < grid.n; ++i)
        m.on[i] = scheme.cell_index(grid.points[i]) == j ? 1 : 0;
    return m;
}

MaskOperator mask_n(const IntervalScheme& scheme, int j, const TimeGrid& grid) {
    MaskOperator m;
    m.grid = grid;
    m.on.resize(grid.n);
    const double lo = scheme.breakpoint(j) - scheme.r - kEdgeSlack;
    const double hi = scheme.breakpoint(j + 1) + scheme.r + kEdgeSlack;
    for (int i = 0; i < grid.n; ++i)
        m.on[i] = (grid.points[i] >= lo && grid.points[i] <= hi) ? 1 : 0;
    return m;
}

KernelOperator sigma_operator(const GroupContext& ctx, double p, const DualVector& l,
                              const FourierProfile& a, const IntervalScheme& scheme,
                              const TimeGrid& grid) {
    require_support_condition(a, scheme);
    if (scheme.cell_index(-grid.half_width) < scheme.j_min ||
        scheme.cell_index(grid.half_width) > scheme.j_max)
        throw std::invalid_argument("sigma_operator: scheme truncation does not cover the grid");
    KernelOperator op = KernelOperator::zero(grid);
    for (int i = 0; i < grid.n; ++i) {
        const double s = grid.points[i];
        const int j = scheme.cell_index(s);
        const double rj = scheme.breakpoint(j);
        // frozen translate matching the row drift of the induced kernel
        const DualVector lj = orbit_action(ctx, p, cplx(-rj, 0.0), l);
        const DualVector dl = dual_action(ctx, 0.0, -s, lj);
        const double lo = rj - scheme.r - kEdgeSlack;
        const double hi = scheme.breakpoint(j + 1) + scheme.r + kEdgeSlack;
        for (int t = 0; t < grid.n; ++t) {
            const double x = grid.points[t];
            if (x < lo || x > hi) continue;
            if (std::abs(s - x) > a.c_time) continue;
            op.at(i, t) = a.eval(s - x, dl);
        }
    }
    return op;
}

SigmaBoundReport sigma_bound_check(const GroupContext& ctx, double p, const DualVector& l,
                                   const FourierProfile& a, const IntervalScheme& scheme,
                                   const TimeGrid& grid) {
    SigmaBoundReport rep;
    rep.sigma_norm = operator_norm(sigma_operator(ctx, p, l, a, scheme, grid));
    // Only cells with rows on the grid contribute terms to the sum.
    std::vector<int> active;
    int prev = scheme.j_min - 1;
    for (int i = 0; i < grid.n; ++i) {
        const int j = scheme.cell_index(grid.points[i]);
        if (j != prev) {
            active.push_back(j);
            prev = j;
        }
    }
    for (int j : active) {
        const DualVector lj = orbit_action(ctx, p, cplx(-scheme.breakpoint(j), 0.0), l);
        const double nrm = operator_norm(induced_kernel(ctx, 0.0, lj, a, grid));
        rep.per_cell.push_back(nrm);
        rep.sup_pi0 = std::max(rep.sup_pi0, nrm);
    }
    rep.pass = rep.sigma_norm <= 3.0 * rep.sup_pi0 + 1e-8;
    return rep;
}

DriftBound orbit_drift_bound(const GroupContext& ctx, const IntervalScheme& scheme, double p,
                             const DualVector& l, int j, int samples) {
    if (std::abs(p) > scheme.delta + 1e-15)
        throw std::invalid_argument("orbit_drift_bound: requires |p| <= delta");
    const double rj = scheme.breakpoint(j);
    const double rj1 = scheme.breakpoint(j + 1);
    const DualVector frozen = orbit_action(ctx, p, cplx(rj, 0.0), l);
    DriftBound out;
    for (int k = 0; k < samples; ++k) {
        const double t = rj + (rj1 - rj) * static_cast<double>(k) / (samples - 1.0);
        const DualVector moving = orbit_action(ctx, p, cplx(t, 0.0), l);
        const double d = std::abs(frozen.l1 - moving.l1) + std::abs(frozen.l2 - moving.l2);
        out.measured = std::max(out.measured, d);
    }
    out.majorant = (std::exp(std::abs(p) / scheme.epsilon) - 1.0) *
                   (std::exp(p * rj) * std::abs(l.l1) + std::exp(-p * rj) * std::abs(l.l2));
    if (out.measured > out.majorant * (1.0 + 1e-12) + 1e-15)
        throw std::runtime_error("orbit_drift_bound: measured drift exceeds the majorant");
    return out;
}

double sigma_defect(const GroupContext& ctx, double p, const DualVector& l,
                    const FourierProfile& a, const IntervalScheme& scheme,
                    const TimeGrid& grid) {
    if (std::abs(p) > scheme.delta + 1e-15)
        throw std::invalid_argument("sigma_defect: requires |p| <= delta");
    const KernelOperator sig = sigma_operator(ctx, p, l, a, scheme, grid);
    const KernelOperator pi = induced_kernel(ctx, p, l, a, grid);
    return operator_norm(sig - pi);
}

SweepResult defect_sweep(const GroupContext& ctx, const FourierProfile& a,
                         const std::vector<double>& deltas, const std::vector<double>& p_factors,
                         const std::vector<DualVector>& duals, const TimeGrid& grid,
                         int workers) {
    for (std::size_t i = 1; i < deltas.size(); ++i)
        if (!(deltas[i] < deltas[i - 1]))
            throw std::invalid_argument("defect_sweep: schedule must be strictly decreasing");
    SweepResult res;
    const std::size_t per_delta = p_factors.size() * duals.size();
    res.cells.resize(deltas.size() * per_delta);
    parallel_for(res.cells.size(), workers, [&](std::size_t idx) {
        const std::size_t di = idx / per_delta;
        const std::size_t rem = idx % per_delta;
        const std::size_t pi = rem / duals.size();
        const std::size_t li = rem % duals.size();
        SweepCell& cell = res.cells[idx];
        cell.delta = deltas[di];
        cell.p = p_factors[pi] * deltas[di];
        cell.l = duals[li];
        try {
            const IntervalScheme scheme = scheme_default(cell.delta, grid.half_width);
            cell.epsilon = scheme.epsilon;
            cell.r = scheme.r;
            cell.ratio = cell.delta / cell.epsilon;
            cell.defect = sigma_defect(ctx, cell.p, cell.l, a, scheme, grid);
            cell.ok = true;
        } catch (const std::exception& e) {
            cell.ok = false;
            cell.error = e.what();
            cell.defect = std::numeric_limits<double>::quiet_NaN();
        }
    });
    std::vector<double> fit_x, fit_y;
    for (std::size_t di = 0; di < deltas.size(); ++di) {
        double dmax = 0.0;
        bool any = false;
        for (std::size_t k = 0; k < per_delta; ++k) {
            const SweepCell& cell = res.cells[di * per_delta + k];
            if (cell.ok) {
                dmax = std::max(dmax, cell.defect);
                any = true;
            }
        }
        const IntervalScheme scheme = scheme_default(deltas[di], grid.half_width);
        res.ratios.push_back(deltas[di] / scheme.epsilon);
        res.max_defect.push_back(any ? dmax : std::numeric_limits<double>::quiet_NaN());
        if (any && dmax > 0.0) {
            fit_x.push_back(deltas[di] / scheme.epsilon);
            fit_y.push_back(dmax);
        }
    }
    if (fit_x.size() >= 2) {
        res.fit = fit_loglog(fit_x, fit_y);
        res.slope_defined = true;
    }
    return res;
}

double continuity_defect(const GroupContext& ctx, double p0, double p, const DualVector& l,
                         const FourierProfile& a, const TimeGrid& grid) {
    if (p0 == 0.0)
        throw std::domain_error("continuity_defect: p0 must be nonzero");
    const KernelOperator kp = induced_kernel(ctx, p, l, a, grid);
    const KernelOperator kp0 = induced_kernel(ctx, p0, l, a, grid);
    return operator_norm(kp - kp0);
}

} // namespace mautner
