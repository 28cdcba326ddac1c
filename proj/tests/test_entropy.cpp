#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <sfent/entropy.hpp>

using namespace sfent;

namespace {

DensityMatrix diag_dm(const std::vector<double>& p, std::vector<double> w = {}) {
    const int n = static_cast<int>(p.size());
    DensityMatrix dm;
    dm.grid = Grid1D::uniform(n, 0.0, 1.0);
    if (!w.empty()) dm.grid.weights = w;
    dm.mat = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) dm.mat(i, i) = p[i] / dm.grid.weights[i];
    return dm;
}

/// Random density matrix with given eigenvalues, rotated by a random unitary.
DensityMatrix rotated(const std::vector<double>& p, unsigned seed) {
    const int n = static_cast<int>(p.size());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = cplx(nd(rng), nd(rng));
    const Eigen::MatrixXcd q = a.householderQr().householderQ();
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = p[i];
    DensityMatrix dm;
    dm.grid = Grid1D::uniform(n, 0.0, 1.0);
    dm.mat = q * d.asDiagonal() * q.adjoint();
    return dm;
}

}  // namespace

TEST(Spectrum, TrivialCases) {
    DensityMatrix pure = rotated({1.0, 0.0, 0.0, 0.0}, 1);
    const Spectrum s = spectrum(pure);
    ASSERT_EQ(s.eigenvalues.size(), 1u);
    EXPECT_NEAR(s.eigenvalues[0], 1.0, 1e-12);
    const Spectrum h = spectrum(diag_dm({0.5, 0.5}));
    ASSERT_EQ(h.eigenvalues.size(), 2u);
    EXPECT_NEAR(h.eigenvalues[0], 0.5, 1e-15);
    EXPECT_NEAR(h.eigenvalues[1], 0.5, 1e-15);
}

TEST(Spectrum, DescendingNormalizedWithDiscardedMass) {
    const Spectrum s = spectrum(rotated({0.6, 0.3, 0.1 - 1e-13, 1e-13}, 2), 1e-12);
    ASSERT_EQ(s.eigenvalues.size(), 3u);
    double sum = 0.0;
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
        sum += s.eigenvalues[i];
        if (i) EXPECT_GE(s.eigenvalues[i - 1], s.eigenvalues[i]);
    }
    EXPECT_NEAR(sum, 1.0, 1e-10);
    EXPECT_NEAR(s.discarded_mass, 1e-13, 1e-14);
}

TEST(Spectrum, WeightAwareSimilarity) {
    // The operator rho W with non-uniform weights: eigenvalues of W^{1/2} rho W^{1/2}.
    const std::vector<double> w{0.5, 1.0, 2.0};
    const Spectrum s = spectrum(diag_dm({0.2, 0.3, 0.5}, w));
    EXPECT_NEAR(s.eigenvalues[0], 0.5, 1e-14);
    EXPECT_NEAR(s.eigenvalues[2], 0.2, 1e-14);
    // A refined grid representation of the same state has the same spectrum.
    DensityMatrix coarse = rotated({0.7, 0.2, 0.1}, 3);
    DensityMatrix fine;
    fine.grid = Grid1D::uniform(6, 0.0, 0.5);
    fine.mat.resize(6, 6);
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) fine.mat(a, b) = coarse.mat(a / 2, b / 2);
    const Spectrum sc = spectrum(coarse), sf = spectrum(fine);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(sc.eigenvalues[i], sf.eigenvalues[i], 1e-12);
}

TEST(Spectrum, NegativeEigenvaluesClampedOrRejected) {
    const Spectrum s = spectrum(diag_dm({0.6, 0.4 + 5e-9, -5e-9}));
    EXPECT_EQ(s.eigenvalues.size(), 2u);
    EXPECT_NEAR(s.most_negative, -5e-9, 1e-15);
    EXPECT_THROW(spectrum(diag_dm({0.6, 0.4 + 1e-6, -1e-6})), NumericalError);
}

TEST(Spectrum, TrimsNegligibleRows) {
    std::vector<double> p(50, 0.0);
    p[3] = 0.25;
    p[10] = 0.75;
    const Spectrum s = spectrum(diag_dm(p));
    ASSERT_EQ(s.eigenvalues.size(), 2u);
    EXPECT_NEAR(s.eigenvalues[0], 0.75, 1e-15);
}

TEST(Spectrum, GramRouteEqualsDenseRoute) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> nd;
    const int n = 30, r = 4;
    Eigen::MatrixXcd b(n, r);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < r; ++j) b(i, j) = cplx(nd(rng), nd(rng));
    DensityMatrix dm;
    dm.grid = Grid1D::uniform(n, 0.0, 0.5);
    const double s = 1.0 / std::sqrt(0.5);
    dm.mat = s * s * b * b.adjoint();
    dm.factor = b;
    normalize_trace(dm);
    DensityMatrix dense = dm;
    dense.factor.reset();
    const Spectrum a = spectrum(dm), d = spectrum(dense);
    ASSERT_EQ(a.eigenvalues.size(), static_cast<std::size_t>(r));
    ASSERT_EQ(d.eigenvalues.size(), static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) EXPECT_NEAR(a.eigenvalues[i], d.eigenvalues[i], 1e-12);
    EXPECT_NEAR(linear_entropy(dm), linear_entropy(dense), 1e-12);
}

TEST(Entropy, NeumannValues) {
    EXPECT_NEAR(neumann_entropy(Spectrum{{1.0}, 0.0, 0.0}), 0.0, 1e-15);
    EXPECT_NEAR(neumann_entropy(Spectrum{{0.5, 0.5}, 0.0, 0.0}), std::log(2.0), 1e-15);
    EXPECT_NEAR(neumann_entropy(spectrum(diag_dm({0.25, 0.25, 0.25, 0.25}))), std::log(4.0), 1e-14);
}

TEST(Entropy, LinearValues) {
    EXPECT_NEAR(linear_entropy(rotated({1.0, 0.0, 0.0}, 5)), 0.0, 1e-8);
    EXPECT_NEAR(linear_entropy(diag_dm({0.5, 0.5})), 0.5, 1e-15);
    for (int n : {2, 3, 7}) EXPECT_NEAR(linear_entropy(rotated(std::vector<double>(n, 1.0 / n), n)), 1.0 - 1.0 / n, 1e-12);
    // With weights the purity is Tr((rho W)^2).
    EXPECT_NEAR(linear_entropy(diag_dm({0.2, 0.8}, {0.5, 2.0})), 1.0 - 0.04 - 0.64, 1e-14);
}

TEST(Entropy, TwoLevelFamilyMonotoneTowardsHalf) {
    double sn = -1.0, sl = -1.0;
    for (double l = 0.0; l <= 0.5 + 1e-12; l += 0.05) {
        const DensityMatrix dm = rotated({1.0 - l, l}, 17);
        const double n = neumann_entropy(spectrum(dm)), lin = linear_entropy(dm);
        if (l == 0.0) {
            EXPECT_NEAR(n, 0.0, 1e-10);
            EXPECT_NEAR(lin, 0.0, 1e-10);
        } else {
            EXPECT_GT(n, sn);
            EXPECT_GT(lin, sl);
        }
        sn = n;
        sl = lin;
    }
}

TEST(Entropy, MutualAndConditional) {
    EXPECT_DOUBLE_EQ(mutual_avg(0.4, 0.4, 0.0), 0.4);
    EXPECT_DOUBLE_EQ(mutual_avg(0.3, 0.5, 0.8), 0.0);
    EXPECT_DOUBLE_EQ(conditional_neg(0.0, 0.4), 0.4);
    EXPECT_LE(conditional_neg(0.3 + 0.5, 0.3), 0.0);
    EXPECT_DOUBLE_EQ(conditional_neg(0.8, 0.3), -0.5);
}

TEST(Entropy, TotalEntanglementAndBound) {
    // Pure separable directions: mut_d = S_cd, and S_total = S_cx + S_cy + S_cz with S_cy = S_cx.
    const double scx = 0.21, scz = 0.37;
    EXPECT_NEAR(total_entanglement(mutual_avg(scx, scx, 0.0), mutual_avg(scz, scz, 0.0)), scx + scx + scz, 1e-15);
    EXPECT_DOUBLE_EQ(total_entanglement(0.0, 0.3), 0.3);
    EXPECT_DOUBLE_EQ(entropy_bound(0.0, 0.0), 0.0);
    EXPECT_NEAR(entropy_bound(0.3, 0.2), 0.7, 1e-15);
}

TEST(Entropy, ClassicalLimitFlag) {
    EXPECT_TRUE(exceeds_classical_limit(0.4, 0.4, 0.0));
    EXPECT_FALSE(exceeds_classical_limit(0.4, 0.4, 0.8));
}

TEST(Entropy, RecordCombinesDirections) {
    DirectionEntropies z{0.07, 0.42, 0.46, 0.98, 0.0, 0.0, 0.0, 0.0};
    DirectionEntropies x{0.08, 0.30, 0.33, 0.97, 0.0, 0.0, 0.0, 0.0};
    const EntropyRecord r = make_record(2.0, z, x, false);
    EXPECT_DOUBLE_EQ(r.negcond_z, 0.46 - 0.07);
    EXPECT_DOUBLE_EQ(r.mut_z, 0.5 * (0.46 + 0.42 - 0.07));
    ASSERT_TRUE(r.mut_x && r.S_total && r.S_bound && r.negcond_x);
    EXPECT_DOUBLE_EQ(*r.S_total, 2.0 * *r.mut_x + r.mut_z);
    EXPECT_DOUBLE_EQ(*r.S_bound, 0.42 + 2.0 * 0.30);
    EXPECT_FALSE(r.SL_z.has_value());
    const EntropyRecord no_x = make_record(3.0, z, std::nullopt, true);
    EXPECT_FALSE(no_x.S_x.has_value());
    EXPECT_FALSE(no_x.S_total.has_value());
    EXPECT_TRUE(no_x.SL_z.has_value());
}
