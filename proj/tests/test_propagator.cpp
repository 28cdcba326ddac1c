#include <cstdio>
#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include <Eigen/Dense>

#include <sfent/banded.hpp>
#include <sfent/hamiltonian.hpp>
#include <sfent/propagator.hpp>

using namespace sfent;

namespace {

constexpr double kMu = 0.999456;

WaveField random_field(const CylGrid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    WaveField w(g);
    for (auto& a : w.amp) a = cplx(nd(rng), nd(rng));
    w.enforce_boundaries();
    return w;
}

/// Smooth off-centre packet with some momentum.
WaveField packet(const CylGrid& g) {
    WaveField w = WaveField::from_function(g, [](double z, double r) {
        const double zz = z - 2.0;
        return std::exp(-(zz * zz + r * r) / 4.0) * std::exp(cplx(0.0, 0.4 * z));
    });
    w.enforce_boundaries();
    normalize(w);
    return w;
}

double distance(const WaveField& a, const WaveField& b) {
    WaveField d = a;
    for (std::size_t i = 0; i < d.amp.size(); ++i) d.amp[i] -= b.amp[i];
    return std::sqrt(norm2(d));
}

struct ItpFixture : ::testing::Test {
    static const GroundState& ground() {
        static const GroundState gs = ground_state_itp(ham(), ItpOptions{}, hydrogenic_guess(ham().grid));
        return gs;
    }
    static const Hamiltonian& ham() {
        static const Hamiltonian h = build_hamiltonian(make_grid(20.0, 20.0, 0.2, 0.2), kMu);
        return h;
    }
};

}  // namespace

TEST(Banded, PentadiagonalSolveMatchesDense) {
    const int n = 40;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::array<std::vector<cplx>, 5> band;
    for (auto& b : band) b.assign(n, 0.0);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int d = 0; d < 5; ++d) {
            const int j = i + d - 2;
            if (j < 0 || j >= n) continue;
            const cplx v = d == 2 ? cplx(6.0 + u(rng), u(rng)) : cplx(u(rng), u(rng));
            band[d][i] = v;
            a(i, j) = v;
        }
    PentaLU<cplx> lu(band);
    Eigen::VectorXcd rhs(n);
    for (int i = 0; i < n; ++i) rhs(i) = cplx(u(rng), u(rng));
    const Eigen::VectorXcd ref = a.partialPivLu().solve(rhs);
    std::vector<cplx> x(rhs.data(), rhs.data() + n);
    lu.solve(x.data());
    for (int i = 0; i < n; ++i) EXPECT_NEAR(std::abs(x[i] - ref(i)), 0.0, 1e-12);
    // Several right-hand sides interleaved with leading dimension 3.
    std::vector<cplx> many(3 * n);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < 3; ++c) many[i * 3 + c] = rhs(i) * cplx(c + 1.0, 0.0);
    lu.solve_many(many.data(), 3, 3);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < 3; ++c) EXPECT_NEAR(std::abs(many[i * 3 + c] - ref(i) * cplx(c + 1.0, 0.0)), 0.0, 1e-11);
}

TEST(Banded, ZeroPivotIsANumericalError) {
    std::array<std::vector<double>, 5> band;
    for (auto& b : band) b.assign(4, 0.0);
    EXPECT_THROW(PentaLU<double>{band}, NumericalError);
}

TEST(Hamiltonian, SelfAdjointInQuadratureInnerProduct) {
    const CylGrid g = make_grid(6.0, 5.0, 0.2, 0.2);
    const Hamiltonian h = build_hamiltonian(g, kMu);
    const WaveField a = random_field(g, 1), b = random_field(g, 2);
    const cplx ab = matrix_element(h, a, b, 0.03), ba = matrix_element(h, b, a, 0.03);
    EXPECT_NEAR(std::abs(ab - std::conj(ba)), 0.0, 1e-10 * std::abs(ab));
}

TEST(Hamiltonian, CuspCalibrationReproducesExactEnergyOfCuspFunction) {
    const CylGrid g = make_grid(20.0, 20.0, 0.2, 0.2);
    const Hamiltonian h = build_hamiltonian(g, kMu);
    WaveField c = WaveField::from_function(g, [](double z, double r) { return cplx(std::exp(-kMu * std::hypot(z, r)), 0.0); });
    c.enforce_boundaries();
    EXPECT_NEAR(energy(h, c), -kMu / 2.0, 1e-12);
    EXPECT_LT(h.cusp_amplitude, 0.0);
}

TEST(Hamiltonian, RequiresOriginInsideBox) {
    CylGrid g = make_grid(6.0, 5.0, 0.2, 0.2);
    g.z_min = 1.0;
    EXPECT_THROW(build_hamiltonian(g, kMu), ConfigError);
}

TEST_F(ItpFixture, GroundStateEnergyNearReducedMassLimit) {
    const GroundState& gs = ground();
    EXPECT_NEAR(gs.energy, -kMu / 2.0, 5e-4);
    EXPECT_NEAR(norm2(gs.psi), 1.0, 1e-12);
    EXPECT_LT(gs.residual, 5e-3);
}

TEST_F(ItpFixture, GroundStateIsEvenInZ) {
    const GroundState& gs = ground();
    const WaveField odd = WaveField::from_function(gs.psi.grid, [](double z, double r) {
        return cplx(z * std::exp(-std::hypot(z, r) / 2.0), 0.0);
    });
    EXPECT_NEAR(std::abs(inner(gs.psi, odd)) / std::sqrt(norm2(odd)), 0.0, 1e-8);
}

TEST_F(ItpFixture, EnergyNonIncreasingDuringRelaxation) {
    const auto& e = ground().energy_history;
    ASSERT_GT(e.size(), 3u);
    for (std::size_t i = 1; i < e.size(); ++i) EXPECT_LE(e[i], e[i - 1] + 1e-12) << i;
}

TEST(Itp, EnergyApproachesLimitUnderRefinement) {
    const double mu = kMu;
    auto eps = [mu](double h) {
        const CylGrid g = make_grid(15.0, 15.0, h, h);
        const Hamiltonian H = build_hamiltonian(g, mu);
        ItpOptions o;
        o.tau_min = 0.25 * h * h / 2.0;
        return ground_state_itp(H, o, hydrogenic_guess(g)).energy;
    };
    const double e2 = eps(0.2), e1 = eps(0.1);
    EXPECT_LT(std::abs(e1 + mu / 2.0), std::abs(e2 + mu / 2.0));
    EXPECT_NEAR(e1, -mu / 2.0, 5e-5);
}

TEST(Itp, NonConvergenceCarriesLastEnergy) {
    const CylGrid g = make_grid(10.0, 10.0, 0.2, 0.2);
    const Hamiltonian h = build_hamiltonian(g, kMu);
    ItpOptions o;
    o.max_steps = 5;
    try {
        ground_state_itp(h, o, hydrogenic_guess(g));
        FAIL();
    } catch (const NumericalError& e) {
        EXPECT_NE(std::string(e.what()).find("last energy"), std::string::npos);
    }
}

TEST(Propagator, Composed4RejectedInImaginaryTime) {
    const Hamiltonian h = build_hamiltonian(make_grid(6.0, 5.0, 0.2, 0.2), kMu);
    EXPECT_THROW(PropagatorPlan(h, 0.01, SplitOrder::composed4, true), ConfigError);
    EXPECT_THROW(PropagatorPlan(h, 0.0, SplitOrder::strang2), ConfigError);
}

TEST_F(ItpFixture, NormPreservedEveryStep) {
    for (SplitOrder o : {SplitOrder::strang2, SplitOrder::composed4}) {
        PropagatorPlan plan(ham(), 0.01, o);
        PotentialSpec pot;
        pot.pulse.F = 0.1;
        WaveField psi = packet(ham().grid);
        psi.t = 140.0;
        for (int n = 0; n < 50; ++n) {
            plan.step(psi, pot);
            EXPECT_NEAR(norm2(psi), 1.0, 1e-10 * (n + 1)) << n;
        }
        EXPECT_NEAR(psi.t, 140.5, 1e-12);
    }
}

TEST_F(ItpFixture, GroundStateStationaryFieldFree) {
    const GroundState& gs = ground();
    for (SplitOrder o : {SplitOrder::strang2, SplitOrder::composed4}) {
        PropagatorPlan plan(ham(), 0.01, o);
        PotentialSpec pot;
        pot.field_free = true;
        int calls = 0;
        double worst = 1.0;
        run(gs.psi, plan, pot, 10.0, 1.0, [&](const WaveField& psi, long) {
            ++calls;
            worst = std::min(worst, std::norm(inner(gs.psi, psi)));
        });
        EXPECT_EQ(calls, 11);
        EXPECT_GE(worst, 0.999);
        EXPECT_GE(worst, 1.0 - 1e-6);
    }
}

TEST_F(ItpFixture, EnergyConservedFieldFree) {
    PropagatorPlan plan(ham(), 0.01, SplitOrder::composed4);
    PotentialSpec pot;
    pot.field_free = true;
    const WaveField psi0 = packet(ham().grid);
    const double e0 = energy(ham(), psi0);
    double drift = 0.0;
    run(psi0, plan, pot, 10.0, 1.0, [&](const WaveField& psi, long) { drift = std::max(drift, std::abs(energy(ham(), psi) - e0)); });
    EXPECT_LT(drift, 1e-6);
}

TEST(Propagator, ConvergenceOrderUnderDtHalving) {
    const CylGrid g = make_grid(12.0, 10.0, 0.2, 0.2);
    const Hamiltonian h = build_hamiltonian(g, kMu);
    PotentialSpec pot;
    pot.field_free = true;
    // Centred away from the nucleus: the Coulomb cusp itself reduces both schemes to about first order.
    WaveField psi0 = WaveField::from_function(g, [](double z, double r) {
        return std::exp(-((z - 6.0) * (z - 6.0) + r * r) / 4.0) * std::exp(cplx(0.0, 0.4 * z));
    });
    psi0.enforce_boundaries();
    normalize(psi0);
    auto evolve = [&](double dt, SplitOrder o) {
        PropagatorPlan plan(h, dt, o);
        WaveField w = psi0;
        plan.advance(w, pot, std::lround(1.0 / dt));
        return w;
    };
    const WaveField ref = evolve(0.000625, SplitOrder::composed4);
    const double s1 = distance(evolve(0.1, SplitOrder::strang2), ref);
    const double s2 = distance(evolve(0.05, SplitOrder::strang2), ref);
    EXPECT_GT(s1 / s2, 3.5);
    const double c1 = distance(evolve(0.0125, SplitOrder::composed4), ref);
    const double c2 = distance(evolve(0.00625, SplitOrder::composed4), ref);
    EXPECT_GT(c1 / c2, 8.0);
    EXPECT_LT(c2, distance(evolve(0.00625, SplitOrder::strang2), ref));
}

TEST(Propagator, FieldFreeEnergyErrorIsSecondOrder) {
    const CylGrid g = make_grid(12.0, 10.0, 0.2, 0.2);
    const Hamiltonian h = build_hamiltonian(g, kMu);
    PotentialSpec pot;
    pot.field_free = true;
    const WaveField psi0 = packet(g);
    const double e0 = energy(h, psi0);
    auto err = [&](double dt) {
        PropagatorPlan plan(h, dt, SplitOrder::strang2);
        WaveField w = psi0;
        plan.advance(w, pot, std::lround(1.0 / dt));
        return std::abs(energy(h, w) - e0);
    };
    const double e1 = err(0.025);
    const double e2 = err(0.0125);
    const double e3 = err(0.00625);
    std::printf("strang2 energy error %.3e -> %.3e -> %.3e\n", e1, e2, e3);
    EXPECT_GT(e1 / e2, 3.5);
    EXPECT_GT(e2 / e3, 3.5);
}

TEST(Propagator, RunCountsObserverCallsAndRejectsBadCadence) {
    const CylGrid g = make_grid(2.0, 2.0, 0.2, 0.2);
    const Hamiltonian h = build_hamiltonian(g, kMu);
    PropagatorPlan plan(h, 0.5, SplitOrder::strang2);
    PotentialSpec pot;
    WaveField psi = hydrogenic_guess(g);
    int calls = 0;
    run(psi, plan, pot, 330.0, 1.0, [&](const WaveField&, long) { ++calls; });
    EXPECT_EQ(calls, 331);
    EXPECT_THROW(run(psi, plan, pot, 10.0, 0.75, {}), ConfigError);
    EXPECT_THROW(run(psi, plan, pot, 10.5, 1.0, {}), ConfigError);
}

TEST(Propagator, Deterministic) {
    const CylGrid g = make_grid(8.0, 6.0, 0.2, 0.2);
    const Hamiltonian h = build_hamiltonian(g, kMu);
    PotentialSpec pot;
    pot.pulse.F = 0.1;
    auto go = [&] {
        PropagatorPlan plan(h, 0.01, SplitOrder::composed4);
        return run(packet(g), plan, pot, 2.0, 1.0, {});
    };
    const WaveField a = go(), b = go();
    EXPECT_EQ(std::memcmp(a.amp.data(), b.amp.data(), a.amp.size() * sizeof(cplx)), 0);
}

TEST(Propagator, NonFiniteFieldReportsStep) {
    const CylGrid g = make_grid(4.0, 4.0, 0.2, 0.2);
    const Hamiltonian h = build_hamiltonian(g, kMu);
    PropagatorPlan plan(h, 0.01, SplitOrder::strang2);
    PotentialSpec pot;
    WaveField psi = hydrogenic_guess(g);
    psi.at(10, 3) = cplx(std::nan(""), 0.0);
    try {
        run(psi, plan, pot, 1.0, 0.5, {});
        FAIL();
    } catch (const NumericalError& e) {
        EXPECT_NE(std::string(e.what()).find("step 50"), std::string::npos) << e.what();
    }
}
