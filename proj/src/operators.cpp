#include "mautner/operators.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mautner {

std::vector<cplx> KernelOperator::apply(const std::vector<cplx>& xi) const {
    if (static_cast<int>(xi.size()) != grid.n)
        throw std::invalid_argument("KernelOperator::apply: size mismatch");
    std::vector<cplx> out(grid.n, cplx{0.0, 0.0});
    for (int i = 0; i < grid.n; ++i) {
        cplx acc{0.0, 0.0};
        const cplx* row = &k[static_cast<std::size_t>(i) * grid.n];
        for (int j = 0; j < grid.n; ++j) acc += grid.weights[j] * row[j] * xi[j];
        out[i] = acc;
    }
    return out;
}

double KernelOperator::max_abs() const {
    double m = 0.0;
    for (const cplx& v : k) m = std::max(m, std::abs(v));
    return m;
}

namespace {

void require_same_grid(const KernelOperator& a, const KernelOperator& b, const char* who) {
    if (!a.grid.same_as(b.grid))
        throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

} // namespace

KernelOperator operator+(const KernelOperator& a, const KernelOperator& b) {
    require_same_grid(a, b, "operator+");
    KernelOperator out = a;
    for (std::size_t i = 0; i < out.k.size(); ++i) out.k[i] += b.k[i];
    return out;
}

KernelOperator operator-(const KernelOperator& a, const KernelOperator& b) {
    require_same_grid(a, b, "operator-");
    KernelOperator out = a;
    for (std::size_t i = 0; i < out.k.size(); ++i) out.k[i] -= b.k[i];
    return out;
}

KernelOperator operator*(cplx s, const KernelOperator& a) {
    KernelOperator out = a;
    for (auto& v : out.k) v *= s;
    return out;
}

KernelOperator induced_kernel(const GroupContext& ctx, double p, const DualVector& l,
                              const FourierProfile& a, const TimeGrid& grid) {
    if (grid.half_width < a.c_time) {
        std::ostringstream msg;
        msg << "induced_kernel: grid half-width " << grid.half_width
            << " does not fit the kernel band, need at least " << a.c_time;
        throw std::invalid_argument(msg.str());
    }
    KernelOperator op = KernelOperator::zero(grid);
    const int n = grid.n;
    const int band = static_cast<int>(std::ceil(a.c_time / grid.h)) + 1;
    const bool row_convention = ctx.dual_argument == DualArgument::Row;
    for (int i = 0; i < n; ++i) {
        const double s = grid.points[i];
        // Dual argument rides the row under the canonical convention; the
        // column variant exists only for the startup probe.
        const DualVector dl = row_convention ? dual_action(ctx, p, -s, l) : DualVector{};
        const int jlo = std::max(0, i - band);
        const int jhi = std::min(n - 1, i + band);
        for (int j = jlo; j <= jhi; ++j) {
            const double t = grid.points[j];
            if (std::abs(s - t) > a.c_time) continue;
            op.at(i, j) = a.eval(s - t, row_convention ? dl : dual_action(ctx, p, t, l));
        }
    }
    return op;
}

std::vector<cplx> ShiftPhaseOperator::apply(const std::vector<cplx>& xi) const {
    if (static_cast<int>(xi.size()) != grid.n)
        throw std::invalid_argument("ShiftPhaseOperator::apply: size mismatch");
    const int n = grid.n;
    std::vector<cplx> out(n);
    for (int i = 0; i < n; ++i) {
        int j = (i - shift) % n;
        if (j < 0) j += n;
        out[i] = phases[i] * xi[j];
    }
    return out;
}

ShiftPhaseOperator group_element_operator(const GroupContext& ctx, double p,
                                          const DualVector& l, const GroupElement& m,
                                          const TimeGrid& grid) {
    const double raw = m.t / grid.h;
    const double rounded = std::round(raw);
    if (std::abs(raw - rounded) > 1e-9 * std::max(1.0, std::abs(raw)))
        throw std::invalid_argument("group_element_operator: time shift is not grid-aligned");
    ShiftPhaseOperator op;
    op.grid = grid;
    op.shift = static_cast<int>(rounded);
    op.phases.resize(grid.n);
    const CPair c{m.z, m.w};
    for (int i = 0; i < grid.n; ++i) {
        const double s = grid.points[i];
        const CPair twisted = automorphism_alpha(ctx, p, -s, c);
        op.phases[i] = std::exp(cplx(0.0, pairing(twisted, l)));
    }
    return op;
}

ShiftPhaseOperator compose(const ShiftPhaseOperator& a, const ShiftPhaseOperator& b) {
    if (!a.grid.same_as(b.grid))
        throw std::invalid_argument("compose: grid mismatch");
    const int n = a.grid.n;
    ShiftPhaseOperator out;
    out.grid = a.grid;
    out.shift = a.shift + b.shift;
    out.phases.resize(n);
    for (int i = 0; i < n; ++i) {
        int j = (i - a.shift) % n;
        if (j < 0) j += n;
        out.phases[i] = a.phases[i] * b.phases[j];
    }
    return out;
}

KernelOperator compose(const KernelOperator& a, const KernelOperator& b) {
    require_same_grid(a, b, "compose");
    const int n = a.n();
    KernelOperator out = KernelOperator::zero(a.grid);
    // K''(s,u) = sum_t w_t K(s,t) K'(t,u)
    for (int i = 0; i < n; ++i) {
        for (int t = 0; t < n; ++t) {
            const cplx f = a.grid.weights[t] * a.at(i, t);
            if (f == cplx{0.0, 0.0}) continue;
            const cplx* brow = &b.k[static_cast<std::size_t>(t) * n];
            cplx* orow = &out.k[static_cast<std::size_t>(i) * n];
            for (int u = 0; u < n; ++u) orow[u] += f * brow[u];
        }
    }
    return out;
}

KernelOperator adjoint(const KernelOperator& a) {
    const int n = a.n();
    KernelOperator out = KernelOperator::zero(a.grid);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.at(i, j) = std::conj(a.at(j, i));
    return out;
}

double cstar_norm_estimate(const GroupContext& ctx, double p, const FourierProfile& a,
                           const DualGrid& duals, const TimeGrid& grid) {
    const double required = a.c_dual * std::exp(std::abs(p) * grid.half_width);
    if (duals.box < required) {
        std::ostringstream msg;
        msg << "cstar_norm_estimate: dual box " << duals.box
            << " too small, need at least " << required
            << " (= c_dual inflated by the orbit growth factor)";
        throw std::invalid_argument(msg.str());
    }
    double best = 0.0;
    for (const DualVector& l : duals.points) {
        const double nrm = operator_norm(induced_kernel(ctx, p, l, a, grid));
        if (nrm > best) best = nrm;
    }
    return best;
}

} // namespace mautner
