#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "density_matrix.hpp"
#include "errors.hpp"
#include "linalg.hpp"

namespace sfent {

/// Occupation numbers of a density matrix, descending, summing to one.
struct Spectrum {
    std::vector<double> eigenvalues;
    double discarded_mass = 0.0;
    double most_negative = 0.0;  ///< smallest raw eigenvalue relative to the trace, before clamping
};

/// Raw eigenvalues below -this (relative to the trace) are treated as a failure, not round-off.
constexpr double kNegativeTolerance = 1e-8;
constexpr double kDefaultThreshold = 1e-12;

/**
 * @brief Eigenvalues of W^{1/2} rho W^{1/2}; those below threshold (relative to
 * the trace) go into discarded_mass and the rest are renormalized.
 *
 * With a stored factor B of fewer columns than rows the Gram matrix B^H B is
 * diagonalized instead. Otherwise rows whose diagonal magnitude is below 1e-16
 * of the trace are trimmed first (positivity bounds their off-diagonal entries too).
 */
inline Spectrum spectrum(const DensityMatrix& dm, double threshold = kDefaultThreshold) {
    std::vector<double> raw;
    double trimmed = 0.0;
    if (dm.factor && dm.factor->cols() < dm.factor->rows()) {
        const Eigen::MatrixXcd& b = *dm.factor;
        Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(b.cols(), b.cols());
        gram.selfadjointView<Eigen::Lower>().rankUpdate(b.adjoint());
        raw = hermitian_eigenvalues(gram);
    } else {
        const Eigen::MatrixXcd m = dm.weighted();
        const double tr = m.diagonal().real().sum();
        std::vector<int> keep;
        for (int i = 0; i < m.rows(); ++i) {
            if (std::abs(m(i, i).real()) > 1e-16 * tr) keep.push_back(i);
            else trimmed += m(i, i).real();
        }
        Eigen::MatrixXcd sub(keep.size(), keep.size());
        for (std::size_t a = 0; a < keep.size(); ++a)
            for (std::size_t b = 0; b < keep.size(); ++b) sub(a, b) = m(keep[a], keep[b]);
        raw = hermitian_eigenvalues(sub);
    }
    double total = trimmed;
    for (double l : raw) total += l;
    if (!(total > 0.0) || !std::isfinite(total)) throw NumericalError("spectrum: non-positive trace");
    Spectrum s;
    s.most_negative = raw.empty() ? 0.0 : std::min(0.0, raw.front() / total);
    if (s.most_negative < -kNegativeTolerance) throw NumericalError("spectrum: density matrix is not positive");
    s.discarded_mass = trimmed / total;
    std::sort(raw.begin(), raw.end(), std::greater<>());
    double kept = 0.0;
    for (double l : raw) {
        const double p = std::max(l, 0.0) / total;
        if (p > threshold) {
            s.eigenvalues.push_back(p);
            kept += p;
        } else {
            s.discarded_mass += p;
        }
    }
    for (double& p : s.eigenvalues) p /= kept;
    return s;
}

/// -sum lambda ln lambda, in nats.
inline double neumann_entropy(const Spectrum& s) {
    double h = 0.0;
    for (double l : s.eigenvalues)
        if (l > 0.0) h -= l * std::log(l);
    return h;
}

/// 1 - Tr(rho^2) without diagonalization.
inline double linear_entropy(const DensityMatrix& dm) {
    if (dm.factor && dm.factor->cols() < dm.factor->rows()) {
        const Eigen::MatrixXcd& b = *dm.factor;
        Eigen::MatrixXcd gram = b.adjoint() * b;
        return 1.0 - gram.squaredNorm();
    }
    return 1.0 - dm.weighted().squaredNorm();
}

/// Half of the quantum mutual information, 1/2 (S_e + S_c - S_joint).
inline double mutual_avg(double s_e, double s_c, double s_joint) { return 0.5 * (s_e + s_c - s_joint); }

/// S_other - S_joint, the negative conditional entropy; positive values certify entanglement.
inline double conditional_neg(double s_joint, double s_other) { return s_other - s_joint; }

/// Total entanglement from average mutual entropies: two equivalent x directions plus z.
inline double total_entanglement(double mut_x, double mut_z) { return 2.0 * mut_x + mut_z; }

/// Strong-subadditivity bound S_cz + 2 S_cx.
inline double entropy_bound(double s_cz, double s_cx) { return s_cz + 2.0 * s_cx; }

/// Full mutual information above min(S_e, S_c), which can only happen for quantum correlations.
inline bool exceeds_classical_limit(double s_e, double s_c, double s_joint) {
    return 2.0 * mutual_avg(s_e, s_c, s_joint) > std::min(s_e, s_c) + 1e-12;
}

/// Entropies of one direction: the relative matrix and its core and electron reductions.
struct DirectionEntropies {
    double S = 0.0, S_c = 0.0, S_e = 0.0;
    double lambda1 = 0.0;
    double SL = 0.0, SL_c = 0.0, SL_e = 0.0;
    double discarded = 0.0;
};

inline DirectionEntropies direction_entropies(const DensityMatrix& rel, const DensityMatrix& core,
                                              const DensityMatrix& elec, double threshold, bool linear) {
    DirectionEntropies d;
    const Spectrum sr = spectrum(rel, threshold);
    const Spectrum sc = spectrum(core, threshold);
    const Spectrum se = spectrum(elec, threshold);
    d.S = neumann_entropy(sr);
    d.S_c = neumann_entropy(sc);
    d.S_e = neumann_entropy(se);
    d.lambda1 = sr.eigenvalues.empty() ? 0.0 : sr.eigenvalues.front();
    d.discarded = std::max({sr.discarded_mass, sc.discarded_mass, se.discarded_mass});
    if (linear) {
        d.SL = linear_entropy(rel);
        d.SL_c = linear_entropy(core);
        d.SL_e = linear_entropy(elec);
    }
    return d;
}

/// One output row of entropies; x-direction values are absent between x samples.
struct EntropyRecord {
    double t = 0.0;
    double S_z = 0.0, S_cz = 0.0, S_ez = 0.0;
    double negcond_z = 0.0, mut_z = 0.0;
    std::optional<double> S_x, S_cx, S_ex, negcond_x, mut_x, S_total, S_bound;
    std::optional<double> SL_z, SL_cz, SL_ez;
};

inline EntropyRecord make_record(double t, const DirectionEntropies& z, const std::optional<DirectionEntropies>& x,
                                 bool linear) {
    EntropyRecord r;
    r.t = t;
    r.S_z = z.S;
    r.S_cz = z.S_c;
    r.S_ez = z.S_e;
    r.negcond_z = conditional_neg(z.S, z.S_e);
    r.mut_z = mutual_avg(z.S_e, z.S_c, z.S);
    if (x) {
        r.S_x = x->S;
        r.S_cx = x->S_c;
        r.S_ex = x->S_e;
        r.negcond_x = conditional_neg(x->S, x->S_e);
        r.mut_x = mutual_avg(x->S_e, x->S_c, x->S);
        r.S_total = total_entanglement(*r.mut_x, r.mut_z);
        r.S_bound = entropy_bound(z.S_c, x->S_c);
    }
    if (linear) {
        r.SL_z = z.SL;
        r.SL_cz = z.SL_c;
        r.SL_ez = z.SL_e;
    }
    return r;
}

}  // namespace sfent
