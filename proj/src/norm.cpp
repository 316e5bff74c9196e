// Weighted spectral norm of a kernel operator: Lanczos with full
// reorthogonalization on K*K, two independent deterministic starts, and a
// one-sided Jacobi SVD fallback when the starts disagree.
#include "mautner/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace mautner {

namespace {

struct Dense {
    int n = 0;
    std::vector<cplx> a; // row-major, already weight-symmetrized and prescaled

    void mul(const std::vector<cplx>& x, std::vector<cplx>& y) const {
        for (int i = 0; i < n; ++i) {
            cplx acc{0.0, 0.0};
            const cplx* row = &a[static_cast<std::size_t>(i) * n];
            for (int j = 0; j < n; ++j) acc += row[j] * x[j];
            y[i] = acc;
        }
    }

    void mul_adj(const std::vector<cplx>& x, std::vector<cplx>& y) const {
        for (int j = 0; j < n; ++j) y[j] = cplx{0.0, 0.0};
        for (int i = 0; i < n; ++i) {
            const cplx* row = &a[static_cast<std::size_t>(i) * n];
            const cplx xi = x[i];
            for (int j = 0; j < n; ++j) y[j] += std::conj(row[j]) * xi;
        }
    }
};

double norm2(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const cplx& x : v) s += std::norm(x);
    return std::sqrt(s);
}

cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

/// Largest eigenvalue of a symmetric tridiagonal matrix by Sturm bisection.
double tridiag_max_eig(const std::vector<double>& alpha, const std::vector<double>& beta) {
    const int k = static_cast<int>(alpha.size());
    double lo = alpha[0], hi = alpha[0];
    for (int i = 0; i < k; ++i) {
        const double off = (i > 0 ? std::abs(beta[i - 1]) : 0.0) +
                           (i + 1 < k ? std::abs(beta[i]) : 0.0);
        lo = std::min(lo, alpha[i] - off);
        hi = std::max(hi, alpha[i] + off);
    }
    auto count_below = [&](double x) {
        int cnt = 0;
        double d = 1.0;
        for (int i = 0; i < k; ++i) {
            const double off = i > 0 ? beta[i - 1] * beta[i - 1] : 0.0;
            d = alpha[i] - x - (i > 0 ? off / d : 0.0);
            if (d == 0.0) d = -1e-300;
            if (d < 0.0) ++cnt;
        }
        return cnt;
    };
    double a = lo - 1e-12, b = hi + 1e-12;
    for (int it = 0; it < 120 && b - a > 1e-16 * std::max(1.0, std::abs(b)); ++it) {
        const double mid = 0.5 * (a + b);
        if (count_below(mid) >= k)
            b = mid; // all eigenvalues below mid
        else
            a = mid;
    }
    return 0.5 * (a + b);
}

/// One Lanczos run on A*A from a deterministic start; returns the top Ritz
/// value (an eigenvalue of A*A) or a negative value on breakdown.
double lanczos_top(const Dense& m, std::uint64_t seed) {
    const int n = m.n;
    std::vector<cplx> v(n), w(n), tmp(n);
    Rng rng(seed);
    for (int i = 0; i < n; ++i) v[i] = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const double nv = norm2(v);
    for (auto& x : v) x /= nv;

    const int kmax = std::min(n, 400);
    std::vector<std::vector<cplx>> basis;
    basis.reserve(kmax);
    std::vector<double> alpha, beta;
    double theta_prev = -1.0, theta = -1.0;
    int stable = 0;

    for (int k = 0; k < kmax; ++k) {
        basis.push_back(v);
        m.mul(v, tmp);
        m.mul_adj(tmp, w);
        if (k > 0)
            for (int i = 0; i < n; ++i) w[i] -= beta[k - 1] * basis[k - 1][i];
        const double a = dot(v, w).real();
        alpha.push_back(a);
        for (int i = 0; i < n; ++i) w[i] -= a * v[i];
        // full reorthogonalization, two passes
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : basis) {
                const cplx c = dot(q, w);
                for (int i = 0; i < n; ++i) w[i] -= c * q[i];
            }
        theta = tridiag_max_eig(alpha, beta);
        if (theta_prev >= 0.0 && std::abs(theta - theta_prev) <= 5e-14 * std::max(theta, 1e-300)) {
            if (++stable >= 2) break;
        } else {
            stable = 0;
        }
        theta_prev = theta;
        const double b = norm2(w);
        if (b <= 1e-14 * std::max(1.0, std::sqrt(std::abs(theta)))) break; // invariant subspace
        beta.push_back(b);
        for (int i = 0; i < n; ++i) v[i] = w[i] / b;
    }
    return std::max(theta, 0.0);
}

/// One-sided Jacobi SVD, cyclic sweeps; returns the largest singular value.
double jacobi_sigma_max(std::vector<cplx> a, int n) {
    std::vector<std::vector<cplx>> col(n, std::vector<cplx>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) col[j][i] = a[static_cast<std::size_t>(i) * n + j];
    for (int sweep = 0; sweep < 60; ++sweep) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double hii = dot(col[i], col[i]).real();
                const double hjj = dot(col[j], col[j]).real();
                const cplx g = dot(col[i], col[j]);
                const double ag = std::abs(g);
                const double scale = std::sqrt(hii * hjj);
                if (scale == 0.0 || ag <= 1e-15 * scale) continue;
                worst = std::max(worst, ag / scale);
                const cplx phase = g / ag;
                // annihilates the off-diagonal: t^2 - 2 th t - 1 = 0, small root
                const double th = (hii - hjj) / (2.0 * ag);
                const double t = (th >= 0.0 ? -1.0 : 1.0) / (std::abs(th) + std::sqrt(1.0 + th * th));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int r = 0; r < n; ++r) {
                    const cplx xi = col[i][r];
                    const cplx xj = std::conj(phase) * col[j][r];
                    col[i][r] = c * xi - s * xj;
                    col[j][r] = s * xi + c * xj;
                }
            }
        if (worst <= 1e-15) break;
    }
    double best = 0.0;
    for (int j = 0; j < n; ++j) best = std::max(best, dot(col[j], col[j]).real());
    return std::sqrt(best);
}

} // namespace

double operator_norm(const KernelOperator& k) {
    const int n = k.n();
    Dense m;
    m.n = n;
    m.a.resize(static_cast<std::size_t>(n) * n);
    double maxabs = 0.0;
    for (int i = 0; i < n; ++i) {
        const double wi = std::sqrt(k.grid.weights[i]);
        for (int j = 0; j < n; ++j) {
            const cplx v = wi * std::sqrt(k.grid.weights[j]) * k.at(i, j);
            m.a[static_cast<std::size_t>(i) * n + j] = v;
            maxabs = std::max(maxabs, std::abs(v));
        }
    }
    if (maxabs == 0.0) return 0.0;
    for (auto& v : m.a) v /= maxabs;

    if (n <= 3) return maxabs * jacobi_sigma_max(m.a, n);

    const double t1 = lanczos_top(m, 0x1234u ^ static_cast<std::uint64_t>(n));
    const double t2 = lanczos_top(m, 0xbeefu ^ static_cast<std::uint64_t>(n) * 7919u);
    const double theta = std::max(t1, t2);
    if (std::abs(t1 - t2) > 1e-9 * std::max(theta, 1e-300))
        return maxabs * jacobi_sigma_max(m.a, n);
    return maxabs * std::sqrt(theta);
}

} // namespace mautner
