#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "density_matrix.hpp"
#include "grid.hpp"

namespace sfent {

/// Free Gaussian centre-of-mass packet, at rest and centred at the origin.
struct ComSpec {
    double sigma = 1.0;
    double M = 0.0;  ///< total mass; 0 means "take it from the masses"

    void validate() const {
        if (!(sigma > 0.0)) throw ConfigError("com.sigma must be positive");
        if (!(M > 0.0)) throw ConfigError("com.M must be positive");
    }
};

/// Root-mean-square width sqrt(sigma^2 + t^2 / (M^2 sigma^2)).
inline double com_width(const ComSpec& c, double t) {
    return std::sqrt(c.sigma * c.sigma + t * t / (c.M * c.M * c.sigma * c.sigma));
}

/// One Cartesian factor of the packet: (sigma/sqrt(pi) / (sigma^2 + i t/M))^{1/2} exp(-x^2 / (2 (sigma^2 + i t/M))).
inline cplx com_amplitude(const ComSpec& c, double t, double x) {
    const cplx a(c.sigma * c.sigma, t / c.M);
    return std::sqrt(c.sigma / std::sqrt(std::numbers::pi) / a) * std::exp(-x * x / (2.0 * a));
}

/**
 * @brief Exact pure-state density matrix of one Cartesian factor of the packet,
 * conj(g(x_a)) g(x_b), normalized to unit trace on the given grid.
 */
inline DensityMatrix com_dm_1d(const ComSpec& c, double t, const Grid1D& grid) {
    const double w = com_width(c, t);
    if (grid.front() > -8.0 * w || grid.back() < 8.0 * w) throw NumericalError("support truncation");
    Eigen::VectorXcd g(grid.n);
    for (int i = 0; i < grid.n; ++i) g(i) = com_amplitude(c, t, grid.x(i));
    DensityMatrix dm;
    dm.label = DmLabel::com;
    dm.grid = grid;
    dm.t = t;
    dm.mat = g.conjugate() * g.transpose();
    Eigen::MatrixXcd b(grid.n, 1);
    for (int i = 0; i < grid.n; ++i) b(i, 0) = std::sqrt(grid.weights[i]) * std::conj(g(i));
    dm.factor = b;
    normalize_trace(dm);
    return dm;
}

}  // namespace sfent
