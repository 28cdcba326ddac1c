#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "grid.hpp"

namespace sfent {

namespace stencil {
/// Fourth-order central second and first derivative weights (unit spacing), offsets -2..2.
inline constexpr std::array<double, 5> d2{-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0};
inline constexpr std::array<double, 5> d1{1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0};
}  // namespace stencil

/// Real symmetric pentadiagonal matrix stored by bands: band[d][i] = A(i, i + d - 2).
using Bands = std::array<std::vector<double>, 5>;

/**
 * @brief Second-difference matrix along z on the n_z - 2 interior nodes,
 * Dirichlet ends closed by odd reflection (ghost f_{-1} = -f_1). Unit spacing.
 */
inline Bands z_second_difference(int n_interior) {
    Bands b;
    for (auto& v : b) v.assign(n_interior, 0.0);
    for (int i = 0; i < n_interior; ++i)
        for (int d = 0; d < 5; ++d) {
            const int l = i + d - 2;
            if (l >= 0 && l < n_interior) b[d][i] = stencil::d2[d];
        }
    b[2].front() -= stencil::d2[0];
    b[2].back() -= stencil::d2[0];
    return b;
}

/**
 * @brief Symmetric radial matrix K approximating d/drho(rho d/drho) times drho
 * on nodes j = 1 .. n_rho - 2 (unit spacing, index weights j).
 *
 * Interior rows use the flux form j*d2 + d1, which is symmetric. The 2x2 block
 * at the axis is the even-function closure matching the corrected weights of
 * CylGrid::radial_index_weight; the outer end uses odd reflection.
 */
inline Bands radial_flux_matrix(int n_interior) {
    const auto entry = [](int j, int l) {
        const int m = l - j;
        if (m < -2 || m > 2) return 0.0;
        return j * stencil::d2[m + 2] + stencil::d1[m + 2];
    };
    Bands b;
    for (auto& v : b) v.assign(n_interior, 0.0);
    for (int i = 0; i < n_interior; ++i) {
        const int j = i + 1;
        for (int d = 0; d < 5; ++d) {
            const int l = j + d - 2;
            if (l >= 1 && l <= n_interior) b[d][i] = entry(j, l);
        }
    }
    if (n_interior >= 2) {
        b[2][0] = -238.0 / 135.0;
        b[3][0] = 521.0 / 270.0;
        b[1][1] = 521.0 / 270.0;
        b[2][1] = -2707.0 / 540.0;
    }
    const int jn = n_interior;
    b[2][n_interior - 1] -= entry(jn, jn + 2);
    return b;
}

/**
 * @brief Static part of the relative Hamiltonian on the unknown nodes
 * (k = 1..n_z-2, j = 1..n_rho-2):
 *   H0 = T_z + T_rho + V_C + V_cusp,
 * with T_z = -(1/2mu) D2/dz^2, T_rho = -(1/2mu) W^{-1} K / drho^2 and the diagonal
 * Coulomb term -1/r. V_cusp lives on the three nodes nearest r = 0.
 */
struct Hamiltonian {
    CylGrid grid;
    double mu = 1.0;
    Bands tz;      ///< T_z bands in physical units (symmetric)
    Bands krho;    ///< -(1/2mu) K in physical units / drho^2 (symmetric, before W^{-1})
    std::vector<double> wrho_idx;  ///< radial index weights of unknown nodes
    std::vector<double> v_static;  ///< Coulomb plus cusp term on all nodes (0 on non-unknowns)
    double cusp_amplitude = 0.0;
    std::array<std::size_t, 3> cusp_nodes{};

    int nzi() const { return grid.n_z - 2; }
    int nri() const { return grid.n_rho - 2; }
};

/// Apply T_z + T_rho + diag(v) to psi on the unknown nodes; other nodes of out are 0.
inline void apply_kinetic_plus(const Hamiltonian& h, const std::vector<cplx>& psi, const std::vector<double>& v,
                               std::vector<cplx>& out) {
    const CylGrid& g = h.grid;
    out.assign(g.size(), cplx(0.0, 0.0));
    const int nzi = h.nzi(), nri = h.nri();
#pragma omp parallel for schedule(static)
    for (int kk = 0; kk < nzi; ++kk) {
        const int k = kk + 1;
        for (int jj = 0; jj < nri; ++jj) {
            const int j = jj + 1;
            cplx acc = v[g.index(k, j)] * psi[g.index(k, j)];
            cplx tzs = 0.0;
            for (int d = 0; d < 5; ++d) {
                const int l = kk + d - 2;
                if (l >= 0 && l < nzi) tzs += h.tz[d][kk] * psi[g.index(l + 1, j)];
            }
            cplx trs = 0.0;
            for (int d = 0; d < 5; ++d) {
                const int l = jj + d - 2;
                if (l >= 0 && l < nri) trs += h.krho[d][jj] * psi[g.index(k, l + 1)];
            }
            out[g.index(k, j)] = acc + tzs + trs / (h.wrho_idx[jj]);
        }
    }
}

/// <a|H|b> in the quadrature inner product for the static Hamiltonian plus z*E.
inline cplx matrix_element(const Hamiltonian& h, const WaveField& a, const WaveField& b, double Ez = 0.0) {
    std::vector<double> v = h.v_static;
    for (int k = 0; k < h.grid.n_z; ++k)
        for (int j = 0; j < h.grid.n_rho; ++j) v[h.grid.index(k, j)] += h.grid.z(k) * Ez;
    WaveField hb(b.grid, b.t);
    apply_kinetic_plus(h, b.amp, v, hb.amp);
    return inner(a, hb);
}

/// Rayleigh quotient <psi|H|psi>/<psi|psi>.
inline double energy(const Hamiltonian& h, const WaveField& psi, double Ez = 0.0) {
    return matrix_element(h, psi, psi, Ez).real() / norm2(psi);
}

/**
 * @brief Build the static Hamiltonian.
 *
 * The cusp amplitude c is chosen so that the Rayleigh quotient of the cusp
 * function exp(-mu r), which satisfies [d/drho + mu]Psi = 0 at r = 0, equals
 * -mu/2 on this grid. It is applied on (z=0, rho=drho) and (z=+-dz, rho=drho).
 */
inline Hamiltonian build_hamiltonian(const CylGrid& grid, double mu, bool cusp_correction = true) {
    grid.validate();
    Hamiltonian h;
    h.grid = grid;
    h.mu = mu;
    const double ck = -0.5 / mu;
    h.tz = z_second_difference(grid.n_z - 2);
    for (auto& v : h.tz)
        for (auto& x : v) x *= ck / (grid.dz * grid.dz);
    h.krho = radial_flux_matrix(grid.n_rho - 2);
    for (auto& v : h.krho)
        for (auto& x : v) x *= ck / (grid.drho * grid.drho);
    h.wrho_idx.resize(grid.n_rho - 2);
    for (int jj = 0; jj < grid.n_rho - 2; ++jj) h.wrho_idx[jj] = CylGrid::radial_index_weight(jj + 1);

    h.v_static.assign(grid.size(), 0.0);
    for (int k = 1; k < grid.n_z - 1; ++k)
        for (int j = 1; j < grid.n_rho - 1; ++j) {
            const double z = grid.z(k), r = grid.rho(j);
            h.v_static[grid.index(k, j)] = -1.0 / std::sqrt(z * z + r * r);
        }

    const int k0 = grid.k_origin();
    if (k0 < 2 || k0 > grid.n_z - 3) throw ConfigError("grid must contain z = 0 away from the box edges");
    h.cusp_nodes = {grid.index(k0 - 1, 1), grid.index(k0, 1), grid.index(k0 + 1, 1)};
    if (cusp_correction) {
        // Calibrate on a fixed 40 a.u. box with the same spacing and node offset,
        // so the amplitude does not depend on where the user's box is cut.
        const int nz_half = static_cast<int>(std::ceil(40.0 / grid.dz));
        CylGrid cal;
        cal.dz = grid.dz;
        cal.drho = grid.drho;
        cal.n_z = 2 * nz_half + 1;
        cal.n_rho = static_cast<int>(std::ceil(40.0 / grid.drho)) + 1;
        cal.z_min = grid.z(k0) - nz_half * grid.dz;
        const Hamiltonian hc = build_hamiltonian(cal, mu, false);
        WaveField c = WaveField::from_function(cal, [&](double z, double r) {
            return cplx(std::exp(-mu * std::sqrt(z * z + r * r)), 0.0);
        });
        c.enforce_boundaries();
        const double num = matrix_element(hc, c, c).real();
        const double den = norm2(c);
        const int kc = cal.k_origin();
        const auto wz = cal.z_weights();
        const auto wr = cal.rho_weights();
        double s = 0.0;
        for (int dk = -1; dk <= 1; ++dk) s += wz[kc + dk] * wr[1] * std::norm(c.at(kc + dk, 1));
        h.cusp_amplitude = (-0.5 * mu * den - num) / s;
        for (auto n : h.cusp_nodes) h.v_static[n] += h.cusp_amplitude;
    }
    return h;
}

}  // namespace sfent
