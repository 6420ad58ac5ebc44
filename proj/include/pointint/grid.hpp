#pragma once

#include <cmath>

#include "pointint/errors.hpp"

namespace pointint {

/// Uniform one-dimensional grid: nodes x_i = x0 + i*h, i = 0..count-1.
struct UniformGrid {
    double x0 = 0.0;
    double h = 0.0;
    int count = 0;

    UniformGrid() = default;
    UniformGrid(double first, double spacing, int n) : x0(first), h(spacing), count(n) {
        if (!(h > 0.0) || !std::isfinite(h) || !std::isfinite(x0))
            throw InvalidArgument("UniformGrid: spacing must be positive and finite");
        if (n < 2) throw InvalidArgument("UniformGrid: need at least 2 nodes");
    }

    /// Grid covering [a, b] with n nodes, endpoints included.
    static UniformGrid over(double a, double b, int n) {
        if (!(b > a)) throw InvalidArgument("UniformGrid::over: need b > a");
        return UniformGrid(a, (b - a) / (n - 1), n);
    }

    double node(int i) const { return x0 + i * h; }
    double last() const { return node(count - 1); }
    /// Left/right edges of cell i, cells centred on the nodes.
    double cell_left(int i) const { return x0 + (i - 0.5) * h; }
    double cell_right(int i) const { return x0 + (i + 0.5) * h; }
};

}  // namespace pointint
