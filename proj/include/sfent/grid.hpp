#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"

namespace sfent {

using cplx = std::complex<double>;

/**
 * @brief Uniform cylindrical (z, rho) grid.
 *
 * Nodes are z_k = z_min + k*dz and rho_j = j*drho. The rho = 0 column is not an
 * unknown of the propagator: it has zero quadrature weight and only holds an
 * extrapolated value used for interpolation. The last rho column and both z end
 * rows are homogeneous Dirichlet nodes.
 */
struct CylGrid {
    int n_z = 0;
    int n_rho = 0;
    double dz = 0.0;
    double drho = 0.0;
    double z_min = 0.0;

    double z(int k) const { return z_min + k * dz; }
    double rho(int j) const { return j * drho; }
    double z_max() const { return z_min + (n_z - 1) * dz; }
    double rho_max() const { return (n_rho - 1) * drho; }
    std::size_t size() const { return static_cast<std::size_t>(n_z) * n_rho; }
    std::size_t index(int k, int j) const { return static_cast<std::size_t>(k) * n_rho + j; }

    void validate() const {
        if (!(dz > 0.0) || !(drho > 0.0)) throw ConfigError("grid spacing must be positive");
        if (n_z < 16) throw ConfigError("grid n_z must be at least 16");
        if (n_rho < 8) throw ConfigError("grid n_rho must be at least 8");
        if (!std::isfinite(z_min)) throw ConfigError("grid z_min must be finite");
    }

    bool operator==(const CylGrid&) const = default;

    /// z quadrature weights: dz on interior nodes, 0 on the Dirichlet end nodes.
    std::vector<double> z_weights() const {
        std::vector<double> w(n_z, dz);
        w.front() = 0.0;
        w.back() = 0.0;
        return w;
    }

    /**
     * @brief Weights for 2*pi * integral f(rho) rho drho.
     *
     * Interior nodes carry j*drho^2; the first two off-axis nodes use corrected
     * weights so that rho and rho^3 integrate exactly for even integrands.
     */
    std::vector<double> rho_weights() const {
        std::vector<double> w(n_rho, 0.0);
        const double h2 = drho * drho;
        for (int j = 1; j < n_rho - 1; ++j) w[j] = 2.0 * std::numbers::pi * radial_index_weight(j) * h2;
        return w;
    }

    /// Dimensionless radial weight of node j (drho = 1 units).
    static double radial_index_weight(int j) {
        if (j == 1) return 401.0 / 360.0;
        if (j == 2) return 709.0 / 360.0;
        return static_cast<double>(j);
    }

    /// Index of the node closest to z = 0.
    int k_origin() const {
        int k = static_cast<int>(std::lround(-z_min / dz));
        if (k < 0) k = 0;
        if (k > n_z - 1) k = n_z - 1;
        return k;
    }
};

/// Masses of the two-body system in atomic units (electron mass 1).
struct ReducedMass {
    double m_e = 1.0;
    double m_c = 0.999456 / (1.0 - 0.999456);

    double M() const { return m_e + m_c; }
    double mu() const { return m_e * m_c / M(); }
    double alpha_e() const { return m_e / M(); }
    double alpha_c() const { return m_c / M(); }

    /// Core mass chosen so that the reduced mass equals mu (electron mass 1).
    static ReducedMass from_mu(double mu) {
        if (!(mu > 0.0 && mu < 1.0)) throw ConfigError("reduced mass must lie in (0, 1)");
        return ReducedMass{1.0, mu / (1.0 - mu)};
    }
};

/// Relative wave function Psi(z, rho, t), row-major with rho fastest.
struct WaveField {
    CylGrid grid;
    std::vector<cplx> amp;
    double t = 0.0;

    WaveField() = default;
    explicit WaveField(const CylGrid& g, double time = 0.0) : grid(g), amp(g.size(), cplx(0.0, 0.0)), t(time) {}

    cplx& at(int k, int j) { return amp[grid.index(k, j)]; }
    const cplx& at(int k, int j) const { return amp[grid.index(k, j)]; }

    /// Zero the Dirichlet nodes and refresh the axis column.
    void enforce_boundaries() {
        const int nr = grid.n_rho;
        for (int j = 0; j < nr; ++j) {
            at(0, j) = 0.0;
            at(grid.n_z - 1, j) = 0.0;
        }
        for (int k = 0; k < grid.n_z; ++k) at(k, nr - 1) = 0.0;
        fill_axis();
    }

    /**
     * @brief Even extrapolation to rho = 0 from the first four off-axis nodes
     * (Lagrange in rho^2 through rho = h, 2h, 3h, 4h).
     */
    void fill_axis() {
        if (grid.n_rho < 6) return;
        for (int k = 0; k < grid.n_z; ++k) {
            at(k, 0) = (8.0 / 5.0) * at(k, 1) - (4.0 / 5.0) * at(k, 2) + (8.0 / 35.0) * at(k, 3) -
                       (1.0 / 35.0) * at(k, 4);
        }
    }

    template <class F>
    static WaveField from_function(const CylGrid& g, F&& f, double time = 0.0) {
        WaveField w(g, time);
        for (int k = 0; k < g.n_z; ++k)
            for (int j = 0; j < g.n_rho; ++j) w.at(k, j) = f(g.z(k), g.rho(j));
        return w;
    }
};

inline void check_finite(const WaveField& psi) {
    for (const auto& a : psi.amp)
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw NumericalError("non-finite field");
}

/// Discrete 2*pi * integral |Psi|^2 rho drho dz in fixed index order.
inline double norm2(const WaveField& psi) {
    const auto wz = psi.grid.z_weights();
    const auto wr = psi.grid.rho_weights();
    double s = 0.0;
    for (int k = 0; k < psi.grid.n_z; ++k) {
        double row = 0.0;
        const cplx* p = &psi.amp[psi.grid.index(k, 0)];
        for (int j = 0; j < psi.grid.n_rho; ++j) row += wr[j] * std::norm(p[j]);
        s += wz[k] * row;
    }
    if (!std::isfinite(s)) throw NumericalError("non-finite field");
    return s;
}

/// <a|b>, conjugate-linear in a.
inline cplx inner(const WaveField& a, const WaveField& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("inner: grid mismatch");
    const auto wz = a.grid.z_weights();
    const auto wr = a.grid.rho_weights();
    cplx s = 0.0;
    for (int k = 0; k < a.grid.n_z; ++k) {
        cplx row = 0.0;
        const std::size_t base = a.grid.index(k, 0);
        for (int j = 0; j < a.grid.n_rho; ++j) row += wr[j] * std::conj(a.amp[base + j]) * b.amp[base + j];
        s += wz[k] * row;
    }
    return s;
}

inline void normalize(WaveField& psi) {
    const double n = norm2(psi);
    if (!(n > 0.0)) throw NumericalError("cannot normalize a zero field");
    const double s = 1.0 / std::sqrt(n);
    for (auto& a : psi.amp) a *= s;
}

/// Desk-scale and full-scale boxes used by the presets.
inline CylGrid make_grid(double z_extent, double rho_extent, double dz, double drho) {
    CylGrid g;
    g.dz = dz;
    g.drho = drho;
    g.n_z = static_cast<int>(std::lround(2.0 * z_extent / dz)) + 1;
    g.n_rho = static_cast<int>(std::lround(rho_extent / drho)) + 1;
    g.z_min = -0.5 * (g.n_z - 1) * dz;
    return g;
}

}  // namespace sfent
