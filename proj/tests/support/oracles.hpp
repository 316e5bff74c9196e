// Test-side oracles, independent of the library's computation paths: a dense
// symmetric eigensolver (real embedding + Householder + QL) for spectral
// norms, and the raw space-side convolution route.
#ifndef MAUTNER_TEST_ORACLES_HPP
#define MAUTNER_TEST_ORACLES_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mautner/operators.hpp"

namespace mautner::testing {

/// Householder reduction of a dense symmetric matrix to tridiagonal form
/// (no eigenvector accumulation).
inline void householder_tridiag(std::vector<double>& a, int n, std::vector<double>& d,
                                std::vector<double>& e) {
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    auto at = [&a, n](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::abs(at(i, k));
            if (scale == 0.0) {
                e[i] = at(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    at(i, k) /= scale;
                    h += at(i, k) * at(i, k);
                }
                double f = at(i, l);
                double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                at(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
                    for (int k = j + 1; k <= l; ++k) g += at(k, j) * at(i, k);
                    e[j] = g / h;
                    f += e[j] * at(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = at(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k)
                        at(j, k) -= f * e[k] + g * at(i, k);
                }
            }
        } else {
            e[i] = at(i, l);
        }
        d[i] = h;
    }
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) d[i] = at(i, i);
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with shifts.
inline void tridiag_eigenvalues(std::vector<double>& d, std::vector<double>& e) {
    const int n = static_cast<int>(d.size());
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iters = 0;
        for (;;) {
            int m = l;
            for (; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 + 1e-16 * dd) break;
            }
            if (m == l) break;
            if (++iters > 50) throw std::runtime_error("tridiag_eigenvalues: no convergence");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// Largest singular value of the weight-symmetrized kernel via the real
/// 2n x 2n embedding of K*K; entirely independent of the library's Lanczos
/// and Jacobi paths.
inline double dense_norm_oracle(const KernelOperator& k) {
    const int n = k.n();
    std::vector<cplx> a(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a[static_cast<std::size_t>(i) * n + j] =
                std::sqrt(k.grid.weights[i]) * std::sqrt(k.grid.weights[j]) * k.at(i, j);
    // b = a^H a (hermitian)
    std::vector<cplx> b(static_cast<std::size_t>(n) * n, cplx{0.0, 0.0});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx acc{0.0, 0.0};
            for (int t = 0; t < n; ++t)
                acc += std::conj(a[static_cast<std::size_t>(t) * n + i]) *
                       a[static_cast<std::size_t>(t) * n + j];
            b[static_cast<std::size_t>(i) * n + j] = acc;
        }
    const int m = 2 * n;
    std::vector<double> real_embed(static_cast<std::size_t>(m) * m, 0.0);
    auto put = [&](int i, int j, double v) { real_embed[static_cast<std::size_t>(i) * m + j] = v; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cplx v = b[static_cast<std::size_t>(i) * n + j];
            put(i, j, v.real());
            put(i, j + n, -v.imag());
            put(i + n, j, v.imag());
            put(i + n, j + n, v.real());
        }
    std::vector<double> d, e;
    householder_tridiag(real_embed, m, d, e);
    tridiag_eigenvalues(d, e);
    double top = 0.0;
    for (double v : d) top = std::max(top, v);
    return std::sqrt(std::max(top, 0.0));
}

struct OracleGrids {
    int n_t = 33;
    double t_box = 2.5;
    int n_d = 13; // per real coordinate of the inner fiber quadrature
    double d_box = 3.0;
    int n_c = 13; // per real coordinate of the outer transform quadrature
    double c_box = 3.0;
};

/// Partial Fourier transform of the space-side convolution (F *_p G),
/// computed by raw tensor quadrature with no change of variables. This is
/// the brute-force route the Fourier-side convolution is checked against.
inline cplx fourier_of_space_conv(const GroupContext& ctx, double p,
                                  const SpaceProfile::Separable& f,
                                  const SpaceProfile::Separable& g, double s,
                                  const DualVector& l, const OracleGrids& og) {
    auto axis = [](double box, int m, int i) {
        return -box + 2.0 * box * static_cast<double>(i) / (m - 1.0);
    };
    auto weight = [](double box, int m, int i) {
        const double h = 2.0 * box / (m - 1.0);
        return (i == 0 || i == m - 1) ? 0.5 * h : h;
    };
    cplx total{0.0, 0.0};
    for (int it = 0; it < og.n_t; ++it) {
        const double t = axis(og.t_box, og.n_t, it);
        const cplx ft = f.g(t) * g.g(s - t);
        if (ft == cplx{0.0, 0.0}) continue;
        // plane transforms: integral over (c_i, d_i) of
        // q_i(d_i) r_i(alpha_i(-t)(c_i - d_i)) e^{i<c_i, l_i>}
        auto plane = [&](const std::function<cplx(double)>& qx,
                         const std::function<cplx(double)>& qy,
                         const std::function<cplx(double)>& rx,
                         const std::function<cplx(double)>& ry, cplx rot, cplx li) {
            cplx acc{0.0, 0.0};
            for (int a = 0; a < og.n_c; ++a)
                for (int b = 0; b < og.n_c; ++b) {
                    const cplx c(axis(og.c_box, og.n_c, a), axis(og.c_box, og.n_c, b));
                    cplx inner{0.0, 0.0};
                    for (int u = 0; u < og.n_d; ++u)
                        for (int v = 0; v < og.n_d; ++v) {
                            const cplx dd(axis(og.d_box, og.n_d, u), axis(og.d_box, og.n_d, v));
                            const cplx qv = qx(dd.real()) * qy(dd.imag());
                            if (qv == cplx{0.0, 0.0}) continue;
                            const cplx arg = rot * (c - dd);
                            inner += weight(og.d_box, og.n_d, u) * weight(og.d_box, og.n_d, v) *
                                     qv * rx(arg.real()) * ry(arg.imag());
                        }
                    const double phase = c.real() * li.real() + c.imag() * li.imag();
                    acc += weight(og.c_box, og.n_c, a) * weight(og.c_box, og.n_c, b) * inner *
                           std::exp(cplx(0.0, phase));
                }
            return acc;
        };
        const cplx rot1 = std::exp(cplx(-p * t, -t));
        const cplx rot2 = std::exp(cplx(p * t, -ctx.theta * t));
        const cplx p1 = plane(f.q1x, f.q1y, g.q1x, g.q1y, rot1, l.l1);
        const cplx p2 = plane(f.q2x, f.q2y, g.q2x, g.q2y, rot2, l.l2);
        total += weight(og.t_box, og.n_t, it) * ft * p1 * p2;
    }
    return total;
}

} // namespace mautner::testing

#endif
