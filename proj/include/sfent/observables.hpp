#pragma once

#include <cmath>

#include "grid.hpp"
#include "hamiltonian.hpp"

namespace sfent {

/// Scalar diagnostics of one output time.
struct DiagnosticsRow {
    double t = 0.0;
    double Ez = 0.0;
    double f = 0.0;
    double vz = 0.0;
};

/**
 * @brief Im <Psi | d/dz Psi> / (mu <Psi|Psi>), fourth-order central differences
 * with zero values beyond the z ends.
 */
inline double mean_velocity(const WaveField& psi, double mu) {
    const CylGrid& g = psi.grid;
    const auto wr = g.rho_weights();
    const auto wz = g.z_weights();
    const auto& d1 = stencil::d1;
    double s = 0.0;
    for (int k = 0; k < g.n_z; ++k) {
        if (wz[k] == 0.0) continue;
        double row = 0.0;
        for (int j = 0; j < g.n_rho; ++j) {
            if (wr[j] == 0.0) continue;
            cplx d = 0.0;
            for (int o = -2; o <= 2; ++o) {
                const int kk = k + o;
                if (o == 0 || kk < 0 || kk >= g.n_z) continue;
                d += d1[o + 2] * psi.at(kk, j);
            }
            row += wr[j] * (std::conj(psi.at(k, j)) * d).imag();
        }
        s += wz[k] * row;
    }
    const double n = norm2(psi);
    if (!(n > 0.0)) throw NumericalError("mean_velocity: zero field");
    return s / g.dz / (mu * n);
}

/// 1 - |<Psi0|Psi>|^2.
inline double ground_state_loss(const WaveField& psi, const WaveField& psi0) {
    const double ov = std::norm(inner(psi0, psi));
    return 1.0 - ov;
}

}  // namespace sfent
