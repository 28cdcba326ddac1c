#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"

namespace sfent {

/// Uniform one-dimensional grid with quadrature weights.
struct Grid1D {
    int n = 0;
    double origin = 0.0;
    double spacing = 1.0;
    std::vector<double> weights;

    double x(int i) const { return origin + i * spacing; }
    double front() const { return origin; }
    double back() const { return origin + (n - 1) * spacing; }

    static Grid1D uniform(int n, double origin, double spacing) {
        return Grid1D{n, origin, spacing, std::vector<double>(n, spacing)};
    }

    /// Symmetric grid with nodes at integer multiples of spacing covering [-extent, extent].
    static Grid1D centred(double extent, double spacing) {
        const int half = static_cast<int>(std::ceil(extent / spacing - 1e-9));
        return uniform(2 * half + 1, -half * spacing, spacing);
    }
};

enum class DmLabel { rel_z, rel_x, com, core_z, core_x, elec_z, elec_x };

inline std::string to_string(DmLabel l) {
    switch (l) {
        case DmLabel::rel_z: return "rel_z";
        case DmLabel::rel_x: return "rel_x";
        case DmLabel::com: return "com";
        case DmLabel::core_z: return "core_z";
        case DmLabel::core_x: return "core_x";
        case DmLabel::elec_z: return "elec_z";
        case DmLabel::elec_x: return "elec_x";
    }
    return "unknown";
}

inline DmLabel dm_label_from_string(const std::string& s) {
    for (DmLabel l : {DmLabel::rel_z, DmLabel::rel_x, DmLabel::com, DmLabel::core_z, DmLabel::core_x,
                      DmLabel::elec_z, DmLabel::elec_x})
        if (to_string(l) == s) return l;
    throw std::invalid_argument("unknown density-matrix label '" + s + "'");
}

/**
 * @brief One-dimensional density matrix rho(x', x) sampled on a grid.
 *
 * mat(a, b) = rho(x_a, x_b); as an integral operator it acts as mat * diag(w).
 * When present, factor B satisfies W^{1/2} mat W^{1/2} = B B^H (used for
 * Gram-matrix spectra).
 */
struct DensityMatrix {
    DmLabel label = DmLabel::rel_z;
    Grid1D grid;
    Eigen::MatrixXcd mat;
    double t = 0.0;
    double antihermitian_norm = 0.0;
    std::optional<Eigen::MatrixXcd> factor;

    int n() const { return static_cast<int>(mat.rows()); }

    double trace() const {
        double s = 0.0;
        for (int i = 0; i < n(); ++i) s += grid.weights[i] * mat(i, i).real();
        return s;
    }

    /// Largest |rho - rho^H| entry.
    double hermiticity_error() const { return (mat - mat.adjoint()).cwiseAbs().maxCoeff(); }

    /// W^{1/2} mat W^{1/2}, the matrix whose eigenvalues are the occupation numbers.
    Eigen::MatrixXcd weighted() const {
        Eigen::VectorXd s(n());
        for (int i = 0; i < n(); ++i) s(i) = std::sqrt(grid.weights[i]);
        return s.asDiagonal() * mat * s.asDiagonal();
    }
};

/// Replace the matrix by its Hermitian part and record the discarded part.
inline void hermitize(DensityMatrix& dm) {
    Eigen::MatrixXcd anti = 0.5 * (dm.mat - dm.mat.adjoint());
    dm.antihermitian_norm = anti.norm();
    dm.mat = 0.5 * (dm.mat + dm.mat.adjoint()).eval();
}

inline void normalize_trace(DensityMatrix& dm) {
    const double tr = dm.trace();
    if (!(tr > 0.0) || !std::isfinite(tr)) throw NumericalError("density matrix has non-positive trace");
    dm.mat /= tr;
    if (dm.factor) *dm.factor /= std::sqrt(tr);
}

}  // namespace sfent
