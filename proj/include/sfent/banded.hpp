#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"

namespace sfent {

/**
 * @brief LU factorization (no pivoting) of a pentadiagonal matrix.
 *
 * The matrix is given by its five bands: band[d][i] = A(i, i + d - 2).
 * Intended for A = D + c*S with D positive diagonal, S real symmetric and
 * Re(c) >= 0, for which elimination without pivoting is stable.
 */
template <class T>
class PentaLU {
public:
    PentaLU() = default;

    explicit PentaLU(std::array<std::vector<T>, 5> band) { factor(std::move(band)); }

    void factor(std::array<std::vector<T>, 5> band) {
        n_ = band[2].size();
        for (const auto& b : band)
            if (b.size() != n_) throw std::invalid_argument("PentaLU: inconsistent band sizes");
        l1_.assign(n_, T(0));
        l2_.assign(n_, T(0));
        u1_.assign(n_, T(0));
        u2_.assign(n_, T(0));
        inv_d_.assign(n_, T(0));
        std::vector<T> d = band[2], e1 = band[3], e2 = band[4];
        std::vector<T> s1 = band[1], s2 = band[0];
        for (std::size_t k = 0; k < n_; ++k) {
            if (std::abs(d[k]) == 0.0 || !std::isfinite(std::abs(d[k])))
                throw NumericalError("PentaLU: zero or non-finite pivot at row " + std::to_string(k));
            inv_d_[k] = T(1) / d[k];
            u1_[k] = k + 1 < n_ ? e1[k] : T(0);
            u2_[k] = k + 2 < n_ ? e2[k] : T(0);
            if (k + 1 < n_) {
                const T l = s1[k + 1] * inv_d_[k];
                l1_[k + 1] = l;
                d[k + 1] -= l * u1_[k];
                e1[k + 1] -= l * u2_[k];
            }
            if (k + 2 < n_) {
                const T l = s2[k + 2] * inv_d_[k];
                l2_[k + 2] = l;
                s1[k + 2] -= l * u1_[k];
                d[k + 2] -= l * u2_[k];
            }
        }
    }

    std::size_t size() const { return n_; }

    /// Solve in place for one right-hand side with the given stride.
    template <class V>
    void solve(V* x, std::ptrdiff_t stride = 1) const {
        const auto at = [&](std::size_t i) -> V& { return x[static_cast<std::ptrdiff_t>(i) * stride]; };
        for (std::size_t i = 1; i < n_; ++i) {
            V v = at(i) - l1_[i] * at(i - 1);
            if (i >= 2) v -= l2_[i] * at(i - 2);
            at(i) = v;
        }
        for (std::size_t ii = n_; ii-- > 0;) {
            V v = at(ii);
            if (ii + 1 < n_) v -= u1_[ii] * at(ii + 1);
            if (ii + 2 < n_) v -= u2_[ii] * at(ii + 2);
            at(ii) = v * inv_d_[ii];
        }
    }

    /**
     * @brief Solve for m right-hand sides stored interleaved: entry i of system
     * r is x[i*ld + r]. The inner loop runs over r, so rows are swept contiguously.
     */
    template <class V>
    void solve_many(V* x, std::size_t m, std::size_t ld) const {
        for (std::size_t i = 1; i < n_; ++i) {
            V* xi = x + i * ld;
            const V* xa = x + (i - 1) * ld;
            const T a = l1_[i];
            if (i >= 2) {
                const V* xb = x + (i - 2) * ld;
                const T b = l2_[i];
                for (std::size_t r = 0; r < m; ++r) xi[r] -= a * xa[r] + b * xb[r];
            } else {
                for (std::size_t r = 0; r < m; ++r) xi[r] -= a * xa[r];
            }
        }
        for (std::size_t ii = n_; ii-- > 0;) {
            V* xi = x + ii * ld;
            const T inv = inv_d_[ii];
            if (ii + 2 < n_) {
                const V* xa = x + (ii + 1) * ld;
                const V* xb = x + (ii + 2) * ld;
                const T a = u1_[ii], b = u2_[ii];
                for (std::size_t r = 0; r < m; ++r) xi[r] = (xi[r] - a * xa[r] - b * xb[r]) * inv;
            } else if (ii + 1 < n_) {
                const V* xa = x + (ii + 1) * ld;
                const T a = u1_[ii];
                for (std::size_t r = 0; r < m; ++r) xi[r] = (xi[r] - a * xa[r]) * inv;
            } else {
                for (std::size_t r = 0; r < m; ++r) xi[r] *= inv;
            }
        }
    }

private:
    std::size_t n_ = 0;
    std::vector<T> l1_, l2_, u1_, u2_, inv_d_;
};

}  // namespace sfent
