// Uniform trapezoid grids: the time grid discretizing L^2(R) and the tensor
// dual grid over a box [-L, L]^4 in (C^2)*.
#ifndef MAUTNER_GRIDS_HPP
#define MAUTNER_GRIDS_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mautner/group.hpp"

namespace mautner {

struct TimeGrid {
    double half_width = 0.0;
    int n = 0;
    double h = 0.0;
    std::vector<double> points;
    std::vector<double> weights; // trapezoid: h/2 at the ends, h inside

    static TimeGrid make(double half_width, int n) {
        if (!(half_width > 0.0) || n < 2)
            throw std::domain_error("TimeGrid: need half_width > 0 and n >= 2");
        TimeGrid g;
        g.half_width = half_width;
        g.n = n;
        g.h = 2.0 * half_width / static_cast<double>(n - 1);
        g.points.resize(n);
        g.weights.resize(n);
        for (int i = 0; i < n; ++i) {
            g.points[i] = -half_width + g.h * static_cast<double>(i);
            g.weights[i] = (i == 0 || i == n - 1) ? 0.5 * g.h : g.h;
        }
        return g;
    }

    bool same_as(const TimeGrid& o) const { return n == o.n && half_width == o.half_width; }
};

/// Tensor grid of dual vectors over [-L, L]^4 with trapezoid cell weights.
struct DualGrid {
    double box = 0.0;
    int per_dim = 0;
    std::vector<DualVector> points;
    std::vector<double> weights;

    static DualGrid tensor(double box, int per_dim) {
        if (!(box > 0.0) || per_dim < 1)
            throw std::domain_error("DualGrid: need box > 0 and per_dim >= 1");
        DualGrid g;
        g.box = box;
        g.per_dim = per_dim;
        std::vector<double> axis(per_dim), w(per_dim);
        if (per_dim == 1) {
            axis[0] = 0.0;
            w[0] = 2.0 * box;
        } else {
            const double h = 2.0 * box / static_cast<double>(per_dim - 1);
            for (int i = 0; i < per_dim; ++i) {
                axis[i] = -box + h * static_cast<double>(i);
                w[i] = (i == 0 || i == per_dim - 1) ? 0.5 * h : h;
            }
        }
        const std::size_t total = static_cast<std::size_t>(per_dim) * per_dim * per_dim * per_dim;
        g.points.reserve(total);
        g.weights.reserve(total);
        for (int a = 0; a < per_dim; ++a)
            for (int b = 0; b < per_dim; ++b)
                for (int c = 0; c < per_dim; ++c)
                    for (int d = 0; d < per_dim; ++d) {
                        g.points.push_back({cplx(axis[a], axis[b]), cplx(axis[c], axis[d])});
                        g.weights.push_back(w[a] * w[b] * w[c] * w[d]);
                    }
        return g;
    }

    /// Same box, doubled resolution; the coarse nodes are a subset.
    DualGrid refined() const { return tensor(box, per_dim < 2 ? 2 : 2 * per_dim - 1); }
};

} // namespace mautner

#endif
