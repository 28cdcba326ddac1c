#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace sfent {

/**
 * @brief Cubic spline on nodes r_j = j*h (j = 0..n-1) of a function that is
 * even in r: slope 0 at r = 0 (equivalent to the natural spline of the mirrored
 * data) and a natural end at r_max. The tridiagonal factors are shared by all
 * data sets on the same nodes.
 */
class EvenSpline {
public:
    EvenSpline() = default;

    EvenSpline(int n, double h) : n_(n), h_(h) {
        if (n < 3 || !(h > 0.0)) throw std::invalid_argument("EvenSpline: need n >= 3 and h > 0");
        // Unknowns M_0..M_{n-2}; M_{n-1} = 0.
        const int m = n - 1;
        diag_.assign(m, 4.0);
        diag_[0] = 2.0;
        sub_.assign(m, 1.0);
        sup_.assign(m, 1.0);
        // Thomas factorization.
        cprime_.assign(m, 0.0);
        denom_.assign(m, 0.0);
        denom_[0] = diag_[0];
        cprime_[0] = sup_[0] / denom_[0];
        for (int i = 1; i < m; ++i) {
            denom_[i] = diag_[i] - sub_[i] * cprime_[i - 1];
            cprime_[i] = sup_[i] / denom_[i];
        }
    }

    int size() const { return n_; }
    double spacing() const { return h_; }
    double r_max() const { return (n_ - 1) * h_; }

    /// Second derivatives (times h^2) of the spline through f.
    template <class T>
    void second_derivatives(const T* f, T* M) const {
        const int m = n_ - 1;
        std::vector<T> d(m);
        d[0] = 6.0 * (f[1] - f[0]);
        for (int i = 1; i < m; ++i) d[i] = 6.0 * (f[i - 1] - 2.0 * f[i] + f[i + 1]);
        d[0] = d[0] / denom_[0];
        for (int i = 1; i < m; ++i) d[i] = (d[i] - sub_[i] * d[i - 1]) / denom_[i];
        for (int i = m - 2; i >= 0; --i) d[i] -= cprime_[i] * d[i + 1];
        for (int i = 0; i < m; ++i) M[i] = d[i];
        M[m] = T(0);
    }

    /// Evaluate at r in [0, r_max].
    template <class T>
    T eval(const T* f, const T* M, double r) const {
        double u = r / h_;
        int i = static_cast<int>(std::floor(u));
        if (i < 0) i = 0;
        if (i > n_ - 2) i = n_ - 2;
        const double s = u - i;
        const double a = 1.0 - s;
        return a * f[i] + s * f[i + 1] + ((a * a * a - a) * M[i] + (s * s * s - s) * M[i + 1]) / 6.0;
    }

private:
    int n_ = 0;
    double h_ = 1.0;
    std::vector<double> diag_, sub_, sup_, cprime_, denom_;
};

/// Catmull-Rom weights for points at offsets -1, 0, 1, 2 and fractional position s in [0, 1).
inline std::array<double, 4> catmull_rom_weights(double s) {
    const double s2 = s * s, s3 = s2 * s;
    return {0.5 * (-s3 + 2.0 * s2 - s), 0.5 * (3.0 * s3 - 5.0 * s2 + 2.0), 0.5 * (-3.0 * s3 + 4.0 * s2 + s),
            0.5 * (s3 - s2)};
}

/// Linear interpolation weights in the same four-point layout.
inline std::array<double, 4> linear_weights(double s) { return {0.0, 1.0 - s, s, 0.0}; }

}  // namespace sfent
