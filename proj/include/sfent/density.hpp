#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "com.hpp"
#include "density_matrix.hpp"
#include "grid.hpp"
#include "linalg.hpp"
#include "spline.hpp"

namespace sfent {

/// Grid of the relative z coordinate with the field's z quadrature weights.
inline Grid1D rel_z_grid(const CylGrid& g) {
    Grid1D out{g.n_z, g.z_min, g.dz, g.z_weights()};
    return out;
}

/**
 * @brief rho_z(z', z) = 2 pi integral Psi*(z', rho) Psi(z, rho) rho drho, built as
 * a Hermitian rank update of the weighted field array; unit trace.
 */
inline DensityMatrix reduce_rel_z(const WaveField& psi) {
    const CylGrid& g = psi.grid;
    const auto wr = g.rho_weights();
    const int nri = g.n_rho - 2;
    Eigen::MatrixXcd a(g.n_z, nri);
    for (int k = 0; k < g.n_z; ++k)
        for (int jj = 0; jj < nri; ++jj) a(k, jj) = std::sqrt(wr[jj + 1]) * std::conj(psi.at(k, jj + 1));
    DensityMatrix dm;
    dm.label = DmLabel::rel_z;
    dm.grid = rel_z_grid(g);
    dm.t = psi.t;
    dm.mat = Eigen::MatrixXcd::Zero(g.n_z, g.n_z);
    dm.mat.selfadjointView<Eigen::Lower>().rankUpdate(a);
    dm.mat.triangularView<Eigen::StrictlyUpper>() = dm.mat.adjoint();
    Eigen::VectorXd sw(g.n_z);
    for (int k = 0; k < g.n_z; ++k) sw(k) = std::sqrt(dm.grid.weights[k]);
    dm.factor = sw.asDiagonal() * a;
    hermitize(dm);
    normalize_trace(dm);
    return dm;
}

/// How to treat Cartesian points whose radius exceeds rho_max.
enum class Outside { error, zero };

/**
 * @brief Psi(x, y, z) on a Cartesian block, index ((k * n_y) + iy) * n_x + ix,
 * from an even cubic spline in rho along each z row.
 */
namespace detail {
/// Distinct |x| values of a grid (to 1e-9 relative) and the map from grid index to them.
inline std::vector<double> fold_abs(const Grid1D& g, std::vector<int>& map) {
    std::vector<double> vals;
    std::map<long long, int> seen;
    map.resize(g.n);
    const double q = 1e-9 * std::max(1.0, g.spacing);
    for (int i = 0; i < g.n; ++i) {
        const double a = std::abs(g.x(i));
        const long long key = std::llround(a / q);
        auto it = seen.find(key);
        if (it == seen.end()) {
            it = seen.emplace(key, static_cast<int>(vals.size())).first;
            vals.push_back(a);
        }
        map[i] = it->second;
    }
    return vals;
}
}  // namespace detail

/**
 * @brief Psi(x, y, z) on a Cartesian block, index ((k * n_y) + iy) * n_x + ix,
 * from an even cubic spline in rho along each z row. Mirrored points share one
 * evaluation, so the block is exactly symmetric under x -> -x and y -> -y.
 */
inline std::vector<cplx> resample_cartesian(const WaveField& psi, const Grid1D& xg, const Grid1D& yg,
                                            Outside outside = Outside::error) {
    const CylGrid& g = psi.grid;
    const EvenSpline sp(g.n_rho, g.drho);
    const double rmax = sp.r_max();
    std::vector<int> xmap, ymap;
    const auto xs = detail::fold_abs(xg, xmap);
    const auto ys = detail::fold_abs(yg, ymap);
    const std::size_t nxs = xs.size();
    std::vector<double> radius(nxs * ys.size());
    for (std::size_t iy = 0; iy < ys.size(); ++iy)
        for (std::size_t ix = 0; ix < nxs; ++ix) {
            const double r = std::hypot(xs[ix], ys[iy]);
            if (r > rmax * (1.0 + 1e-12) && outside == Outside::error)
                throw std::out_of_range("resample_cartesian: radius beyond rho_max");
            radius[iy * nxs + ix] = r;
        }
    std::vector<cplx> out(static_cast<std::size_t>(g.n_z) * yg.n * xg.n);
    std::vector<cplx> m(g.n_rho), folded(radius.size());
    for (int k = 0; k < g.n_z; ++k) {
        const cplx* f = &psi.amp[g.index(k, 0)];
        sp.second_derivatives(f, m.data());
        for (std::size_t q = 0; q < radius.size(); ++q)
            folded[q] = radius[q] > rmax ? cplx(0.0, 0.0) : sp.eval(f, m.data(), radius[q]);
        cplx* blk = &out[static_cast<std::size_t>(k) * yg.n * xg.n];
        for (int iy = 0; iy < yg.n; ++iy)
            for (int ix = 0; ix < xg.n; ++ix)
                blk[static_cast<std::size_t>(iy) * xg.n + ix] = folded[ymap[iy] * nxs + xmap[ix]];
    }
    return out;
}

/**
 * @brief rho_x(x', x) = integral Psi*(x', y, z) Psi(x, y, z) dy dz.
 *
 * Equivalent to the flattened (y, z) product over resample_cartesian, evaluated
 * through the radial density matrix R(rho', rho) = sum_z w_z Psi*(z, rho') Psi(z, rho):
 * with R = sum_k l_k v_k v_k^H, rho_x(x', x) = sum_{y,k} w_y l_k s_k(r(x', y)) conj(s_k(r(x, y))),
 * where s_k is the even spline of v_k. Radial components with l_k below
 * 1e-14 of the trace of R are dropped. Points beyond rho_max carry zero amplitude.
 */
inline DensityMatrix reduce_rel_x(const WaveField& psi, const Grid1D& xg, const Grid1D& yg) {
    const CylGrid& g = psi.grid;
    const auto wz = g.z_weights();
    Eigen::MatrixXcd p(g.n_z, g.n_rho);
    for (int k = 0; k < g.n_z; ++k)
        for (int j = 0; j < g.n_rho; ++j) p(k, j) = std::sqrt(wz[k]) * psi.at(k, j);
    // R(j', j) = sum_k p(k, j') conj(p(k, j))
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(g.n_rho, g.n_rho);
    r.selfadjointView<Eigen::Lower>().rankUpdate(p.transpose());
    r.triangularView<Eigen::StrictlyUpper>() = r.adjoint();
    Eigen::MatrixXcd vecs;
    const auto lam = hermitian_eigensystem(r, vecs);
    double ltot = 0.0;
    for (double l : lam) ltot += std::max(l, 0.0);
    std::vector<int> keep;
    for (int i = static_cast<int>(lam.size()) - 1; i >= 0; --i)
        if (lam[i] > 1e-14 * ltot) keep.push_back(i);

    std::vector<int> xmap, ymap;
    const auto xs = detail::fold_abs(xg, xmap);
    const auto ys = detail::fold_abs(yg, ymap);
    std::vector<double> wy(ys.size(), 0.0);
    for (int i = 0; i < yg.n; ++i) wy[ymap[i]] += yg.weights[i];
    const int nx = static_cast<int>(xs.size()), ny = static_cast<int>(ys.size());

    // Spline evaluation at every (x, y) radius reduces to four fixed coefficients.
    const EvenSpline sp(g.n_rho, g.drho);
    const double rmax = sp.r_max();
    struct Tap {
        int i = -1;
        double a = 0.0, s = 0.0, ca = 0.0, cs = 0.0;
    };
    std::vector<Tap> taps(static_cast<std::size_t>(nx) * ny);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const double rad = std::hypot(xs[ix], ys[iy]);
            if (rad > rmax) continue;
            Tap& t = taps[static_cast<std::size_t>(iy) * nx + ix];
            const double u = rad / g.drho;
            t.i = std::min(static_cast<int>(std::floor(u)), g.n_rho - 2);
            t.s = u - t.i;
            t.a = 1.0 - t.s;
            t.ca = (t.a * t.a * t.a - t.a) / 6.0;
            t.cs = (t.s * t.s * t.s - t.s) / 6.0;
        }

    Eigen::MatrixXcd folded = Eigen::MatrixXcd::Zero(nx, nx);
    const int nk = static_cast<int>(keep.size());
    constexpr int chunk = 16;
    std::vector<cplx> vk(g.n_rho), mk(g.n_rho);
    for (int q0 = 0; q0 < nk; q0 += chunk) {
        const int nq = std::min(chunk, nk - q0);
        // Columns (q, iy) with F(ix, col) = sqrt(w_y l_k) s_k(r(x, y)).
        Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(nx, static_cast<Eigen::Index>(nq) * ny);
        for (int q = 0; q < nq; ++q) {
            const int k = keep[q0 + q];
            for (int j = 0; j < g.n_rho; ++j) vk[j] = vecs(j, k);
            sp.second_derivatives(vk.data(), mk.data());
            const double sl = std::sqrt(lam[k]);
            for (int iy = 0; iy < ny; ++iy) {
                const double c = sl * std::sqrt(wy[iy]);
                const Eigen::Index col = static_cast<Eigen::Index>(q) * ny + iy;
                for (int ix = 0; ix < nx; ++ix) {
                    const Tap& t = taps[static_cast<std::size_t>(iy) * nx + ix];
                    if (t.i < 0) continue;
                    f(ix, col) = c * (t.a * vk[t.i] + t.s * vk[t.i + 1] + t.ca * mk[t.i] + t.cs * mk[t.i + 1]);
                }
            }
        }
        folded.selfadjointView<Eigen::Lower>().rankUpdate(f.conjugate());
    }
    folded.triangularView<Eigen::StrictlyUpper>() = folded.adjoint();
    DensityMatrix dm;
    dm.label = DmLabel::rel_x;
    dm.grid = xg;
    dm.t = psi.t;
    dm.mat.resize(xg.n, xg.n);
    for (int a = 0; a < xg.n; ++a)
        for (int b = 0; b < xg.n; ++b) dm.mat(a, b) = folded(xmap[a], xmap[b]);
    hermitize(dm);
    normalize_trace(dm);
    return dm;
}

enum class Interp { cubic, linear };

/// Coordinate-transformation data for the electron and core reductions.
struct TransformSpec {
    double alpha_e = 0.0;
    double alpha_c = 1.0;
    Grid1D core;
    Interp interp = Interp::cubic;

    void validate() const {
        if (!(alpha_e >= 0.0 && alpha_c >= 0.0) || std::abs(alpha_e + alpha_c - 1.0) > 1e-12)
            throw ConfigError("alpha_e + alpha_c must equal 1");
        if (core.n < 3) throw ConfigError("core grid needs at least 3 points");
    }
};

namespace detail {

/// Position of u in rel-grid index units: u = origin + (base + frac) * spacing.
struct Shift {
    int base = 0;
    std::array<double, 4> w{0.0, 1.0, 0.0, 0.0};
    bool aligned = true;
};

inline Shift index_shift(double pos, Interp interp) {
    Shift s;
    const double r = std::round(pos);
    if (std::abs(pos - r) < 1e-9) {
        s.base = static_cast<int>(r);
        return s;
    }
    s.base = static_cast<int>(std::floor(pos));
    const double frac = pos - s.base;
    s.w = interp == Interp::cubic ? catmull_rom_weights(frac) : linear_weights(frac);
    s.aligned = false;
    return s;
}

inline cplx rel_value(const Eigen::MatrixXcd& m, int a, int b) {
    if (a < 0 || b < 0 || a >= m.rows() || b >= m.cols()) return cplx(0.0, 0.0);
    return m(a, b);
}

inline cplx rel_interp(const Eigen::MatrixXcd& m, int a, const Shift& sa, int b, const Shift& sb) {
    if (sa.aligned && sb.aligned) return rel_value(m, a + sa.base, b + sb.base);
    cplx acc = 0.0;
    for (int p = 0; p < 4; ++p) {
        if (sa.w[p] == 0.0) continue;
        for (int q = 0; q < 4; ++q) {
            if (sb.w[q] == 0.0) continue;
            acc += sa.w[p] * sb.w[q] * rel_value(m, a + sa.base + p - 1, b + sb.base + q - 1);
        }
    }
    return acc;
}

inline void check_transform(const DensityMatrix& rel, const ComSpec& com, double t, const TransformSpec& ts) {
    ts.validate();
    if (rel.label != DmLabel::rel_z && rel.label != DmLabel::rel_x)
        throw std::invalid_argument("transform: input must be a relative density matrix");
    const double w = com_width(com, t);
    const double ext = std::min(-ts.core.front(), ts.core.back());
    // |Psi0|^2 ~ exp(-x^2 / w^2): mass outside +-ext is erfc(ext / w).
    if (std::erfc(ext / w) > 1e-6) throw NumericalError("support truncation");
}

}  // namespace detail

/**
 * @brief rho_c(u', u) = integral rho_rel(v - u', v - u) rho0(a_e v + a_c u', a_e v + a_c u) dv,
 * v over the relative grid, u over the core grid, rho0(a, b) = conj(g(a)) g(b).
 */
inline DensityMatrix reduce_core_1d(const DensityMatrix& rel, const ComSpec& com, double t, const TransformSpec& ts) {
    detail::check_transform(rel, com, t, ts);
    const Grid1D& vg = rel.grid;
    const Grid1D& ug = ts.core;
    const int nv = vg.n, nu = ug.n;
    std::vector<detail::Shift> sh(nu);
    for (int m = 0; m < nu; ++m)
        sh[m] = detail::index_shift((vg.origin - ug.x(m) - vg.origin) / vg.spacing, ts.interp);
    Eigen::MatrixXcd gk(nv, nu);
    for (int k = 0; k < nv; ++k)
        for (int m = 0; m < nu; ++m) gk(k, m) = com_amplitude(com, t, ts.alpha_e * vg.x(k) + ts.alpha_c * ug.x(m));
    DensityMatrix dm;
    dm.label = rel.label == DmLabel::rel_z ? DmLabel::core_z : DmLabel::core_x;
    dm.grid = ug;
    dm.t = t;
    dm.mat = Eigen::MatrixXcd::Zero(nu, nu);
#pragma omp parallel for schedule(dynamic)
    for (int a = 0; a < nu; ++a)
        for (int b = 0; b <= a; ++b) {
            cplx acc = 0.0;
            for (int k = 0; k < nv; ++k) {
                const double wv = vg.weights[k];
                if (wv == 0.0) continue;
                const cplx r = detail::rel_interp(rel.mat, k, sh[a], k, sh[b]);
                if (r == cplx(0.0, 0.0)) continue;
                acc += wv * r * std::conj(gk(k, a)) * gk(k, b);
            }
            dm.mat(a, b) = acc;
            dm.mat(b, a) = std::conj(acc);
        }
    hermitize(dm);
    normalize_trace(dm);
    return dm;
}

/**
 * @brief rho_e(v', v) = integral rho_rel(v' - u, v - u) rho0(a_e v' + a_c u, a_e v + a_c u) du
 * on the relative grid.
 */
inline DensityMatrix reduce_elec_1d(const DensityMatrix& rel, const ComSpec& com, double t, const TransformSpec& ts) {
    detail::check_transform(rel, com, t, ts);
    const Grid1D& vg = rel.grid;
    const Grid1D& ug = ts.core;
    const int nv = vg.n, nu = ug.n;
    DensityMatrix dm;
    dm.label = rel.label == DmLabel::rel_z ? DmLabel::elec_z : DmLabel::elec_x;
    dm.grid = vg;
    dm.t = t;
    dm.mat = Eigen::MatrixXcd::Zero(nv, nv);
    Eigen::VectorXcd gm(nv);
    for (int m = 0; m < nu; ++m) {
        const double wu = ug.weights[m];
        if (wu == 0.0) continue;
        const detail::Shift s = detail::index_shift(-ug.x(m) / vg.spacing, ts.interp);
        for (int k = 0; k < nv; ++k) gm(k) = com_amplitude(com, t, ts.alpha_e * vg.x(k) + ts.alpha_c * ug.x(m));
#pragma omp parallel for schedule(static)
        for (int b = 0; b < nv; ++b) {
            const cplx gb = wu * gm(b);
            for (int a = 0; a < nv; ++a) {
                const cplx r = detail::rel_interp(rel.mat, a, s, b, s);
                if (r == cplx(0.0, 0.0)) continue;
                dm.mat(a, b) += r * std::conj(gm(a)) * gb;
            }
        }
    }
    hermitize(dm);
    normalize_trace(dm);
    return dm;
}

}  // namespace sfent
