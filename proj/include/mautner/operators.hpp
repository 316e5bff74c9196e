// Discretized induced representations as integral kernels on the time grid,
// the weighted spectral norm, composition/adjoint, the sampled C* norm, and
// the Plancherel decomposition check.
#ifndef MAUTNER_OPERATORS_HPP
#define MAUTNER_OPERATORS_HPP

#include <vector>

#include "mautner/grids.hpp"
#include "mautner/group.hpp"
#include "mautner/symbols.hpp"

namespace mautner {

/// Quadrature-discretized integral operator: (K xi)(s_i) = sum_j w_j K(i,j) xi(j).
struct KernelOperator {
    TimeGrid grid;
    std::vector<cplx> k; // row-major n x n

    int n() const { return grid.n; }
    cplx& at(int i, int j) { return k[static_cast<std::size_t>(i) * grid.n + j]; }
    const cplx& at(int i, int j) const { return k[static_cast<std::size_t>(i) * grid.n + j]; }

    static KernelOperator zero(const TimeGrid& g) {
        KernelOperator op;
        op.grid = g;
        op.k.assign(static_cast<std::size_t>(g.n) * g.n, cplx{0.0, 0.0});
        return op;
    }

    std::vector<cplx> apply(const std::vector<cplx>& xi) const;
    double max_abs() const;
};

KernelOperator operator+(const KernelOperator& a, const KernelOperator& b);
KernelOperator operator-(const KernelOperator& a, const KernelOperator& b);
KernelOperator operator*(cplx s, const KernelOperator& a);

/// K(s,t) = A(s - t, dual_action(p, -s, l)); banded with half-width c_time(A).
/// The Column convention evaluates the dual action at +t instead and is only
/// for the convention self-test.
KernelOperator induced_kernel(const GroupContext& ctx, double p, const DualVector& l,
                              const FourierProfile& a, const TimeGrid& grid);

/// Grid-aligned phase-times-shift realization of a single group element,
/// with periodic index wraparound and uniform-weight norm.
struct ShiftPhaseOperator {
    TimeGrid grid;
    int shift = 0;            // index shift, xi(s - t_m)
    std::vector<cplx> phases; // unimodular factor per output row

    std::vector<cplx> apply(const std::vector<cplx>& xi) const;
};

ShiftPhaseOperator group_element_operator(const GroupContext& ctx, double p,
                                          const DualVector& l, const GroupElement& m,
                                          const TimeGrid& grid);

ShiftPhaseOperator compose(const ShiftPhaseOperator& a, const ShiftPhaseOperator& b);

/// Largest singular value of W^{1/2} K W^{1/2}; relative accuracy ~1e-9.
/// Lanczos with full reorthogonalization, cross-checked from two starts,
/// with a cyclic Jacobi SVD fallback. Exactly homogeneous: the matrix is
/// prescaled by its max modulus, so norm(2K) == 2*norm(K) bitwise.
double operator_norm(const KernelOperator& k);

KernelOperator compose(const KernelOperator& a, const KernelOperator& b);
KernelOperator adjoint(const KernelOperator& a);

/// max over dual-grid samples of the fiber norm; requires the sample box to
/// cover the orbit-inflated dual support e^{|p| T} * c_dual(A).
double cstar_norm_estimate(const GroupContext& ctx, double p, const FourierProfile& a,
                           const DualGrid& duals, const TimeGrid& grid);

struct PlancherelGrids {
    TimeGrid time;   // u/s quadrature
    CGridSpec fiber; // c quadrature per complex coordinate
    double dual_box = 0.0;
    int dual_per_dim = 0;
};

struct PlancherelResult {
    cplx space_side{0.0, 0.0};
    cplx fourier_side{0.0, 0.0};
    double defect = 0.0;
};

/// |<Lambda^p(m) xi, eta> - (2pi)^-4 * direct-integral pairing|, both sides
/// by tensor trapezoid quadrature. Requires separable profiles and a
/// grid-aligned time shift whose translate stays inside the grid.
PlancherelResult plancherel_defect(const GroupContext& ctx, double p, const GroupElement& m,
                                   const SpaceProfile& xi, const SpaceProfile& eta,
                                   const PlancherelGrids& grids);

} // namespace mautner

#endif
