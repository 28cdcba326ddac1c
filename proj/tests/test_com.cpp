#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <sfent/com.hpp>
#include <sfent/entropy.hpp>

using namespace sfent;

TEST(Com, WidthLaw) {
    ComSpec c{1.0, 1837.0};
    EXPECT_DOUBLE_EQ(com_width(c, 0.0), 1.0);
    EXPECT_NEAR(com_width(c, 300.0), 1.0132, 1e-4);
    EXPECT_NEAR(com_width(c, 300.0) - 1.0, 0.013, 1e-3);
    EXPECT_DOUBLE_EQ(com_width(c, -120.0), com_width(c, 120.0));
    double prev = 0.0;
    for (double t = 0.0; t < 1000.0; t += 10.0) {
        EXPECT_GT(com_width(c, t), prev);
        prev = com_width(c, t);
    }
    EXPECT_LT(com_width(c, 300.0) - 1.0, 0.015);
}

TEST(Com, AmplitudeIsNormalizedAndDiagonalMatchesGaussian) {
    ComSpec c{0.8, 50.0};
    for (double t : {0.0, 7.0, 40.0}) {
        const double w = com_width(c, t);
        double s = 0.0;
        const double h = 0.01;
        for (double x = -15.0; x <= 15.0; x += h) {
            const double p = std::norm(com_amplitude(c, t, x));
            s += h * p;
            EXPECT_NEAR(p, std::exp(-x * x / (w * w)) / (std::sqrt(std::numbers::pi) * w), 1e-12);
        }
        EXPECT_NEAR(s, 1.0, 1e-10);
    }
}

TEST(Com, DensityMatrixIsPureUnitTrace) {
    ComSpec c{1.0, 1838.0};
    const Grid1D g = Grid1D::centred(12.0, 0.2);
    for (double t : {0.0, 150.0, 330.0}) {
        const DensityMatrix dm = com_dm_1d(c, t, g);
        EXPECT_EQ(dm.label, DmLabel::com);
        EXPECT_NEAR(dm.trace(), 1.0, 1e-10);
        EXPECT_LT(dm.hermiticity_error(), 1e-14);
        EXPECT_NEAR(linear_entropy(dm), 0.0, 1e-8);
        EXPECT_NEAR(neumann_entropy(spectrum(dm)), 0.0, 1e-8);
        // Same result without the rank-1 factor shortcut.
        DensityMatrix plain = dm;
        plain.factor.reset();
        EXPECT_NEAR(neumann_entropy(spectrum(plain)), 0.0, 1e-8);
        EXPECT_NEAR(1.0 - linear_entropy(plain), 1.0, 1e-8);
    }
}

TEST(Com, SupportTruncation) {
    ComSpec c{1.0, 1838.0};
    try {
        com_dm_1d(c, 0.0, Grid1D::centred(5.0, 0.2));
        FAIL();
    } catch (const NumericalError& e) {
        EXPECT_STREQ(e.what(), "support truncation");
    }
    ComSpec bad{0.0, 1.0};
    EXPECT_THROW(bad.validate(), ConfigError);
}
