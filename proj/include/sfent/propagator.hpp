#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "banded.hpp"
#include "hamiltonian.hpp"
#include "pulse.hpp"

namespace sfent {

enum class SplitOrder { strang2, composed4 };

inline std::string to_string(SplitOrder o) { return o == SplitOrder::strang2 ? "strang2" : "composed4"; }

inline SplitOrder split_order_from_string(const std::string& s) {
    if (s == "strang2") return SplitOrder::strang2;
    if (s == "composed4") return SplitOrder::composed4;
    throw ConfigError("unknown solver.order '" + s + "' (expected strang2 or composed4)");
}

/// External potential: the dipole term z*E_z(t) of a pulse (no pulse means field free).
struct PotentialSpec {
    PulseSpec pulse;
    bool field_free = false;

    double field(double t) const { return field_free ? 0.0 : field_at(pulse, t); }
};

/**
 * @brief Split-step propagator for exp(kappa * s * H), kappa = -i (real time)
 * or -1 (imaginary time).
 *
 * One symmetric substep of length s is
 *   P(s/2) CN_z(s) CN_rho(s) P(s/2),
 * where P multiplies by exp(kappa s/2 V) with V evaluated at the substep
 * midpoint and CN_* are Crank-Nicolson solves of the commuting kinetic parts.
 * composed4 chains three substeps with the triple-jump weights.
 */
class PropagatorPlan {
public:
    PropagatorPlan(const Hamiltonian& h, double dt, SplitOrder order, bool imaginary = false)
        : h_(&h), dt_(dt), order_(order), kappa_(imaginary ? cplx(-1.0, 0.0) : cplx(0.0, -1.0)) {
        if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time step must be positive");
        if (imaginary && order == SplitOrder::composed4)
            throw ConfigError("composed4 has a negative substep and is unstable in imaginary time");
        if (order == SplitOrder::strang2) {
            subs_.push_back(make_sub(dt));
        } else {
            const double g1 = 1.0 / (2.0 - std::cbrt(2.0));
            const double g2 = 1.0 - 2.0 * g1;
            subs_.push_back(make_sub(g1 * dt));
            subs_.push_back(make_sub(g2 * dt));
            sequence_ = {0, 1, 0};
        }
        if (sequence_.empty()) sequence_ = {0};
        const std::size_t ns = sequence_.size();
        for (std::size_t q = 0; q < ns; ++q) {
            const int a = sequence_[q], b = sequence_[(q + 1) % ns];
            if (merged_.count(pair_key(a, b))) continue;
            std::vector<cplx> m(h.v_static.size());
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = subs_[a].static_phase[i] * subs_[b].static_phase[i];
            merged_.emplace(pair_key(a, b), std::move(m));
        }
        const auto& g = h.grid;
        tmp_.assign(g.size(), cplx(0.0, 0.0));
        row_phase_.assign(g.n_z, cplx(1.0, 0.0));
    }

    double dt() const { return dt_; }
    SplitOrder order() const { return order_; }
    const Hamiltonian& hamiltonian() const { return *h_; }

    /// Advance psi by dt (psi.t is advanced as well).
    void step(WaveField& psi, const PotentialSpec& pot) { advance(psi, pot, 1); }

    /**
     * @brief Advance psi by nsteps * dt. Adjacent potential half-steps of
     * consecutive substeps are fused into one phase multiplication.
     */
    void advance(WaveField& psi, const PotentialSpec& pot, long nsteps) {
        if (!(psi.grid == h_->grid)) throw std::invalid_argument("step: grid mismatch");
        if (nsteps <= 0) return;
        const double t0 = psi.t;
        const std::size_t ns = sequence_.size();
        const long total = nsteps * static_cast<long>(ns);
        double t = t0;
        int prev = -1;
        double prev_s = 0.0, prev_e = 0.0;
        for (long q = 0; q < total; ++q) {
            const int idx = sequence_[static_cast<std::size_t>(q) % ns];
            const Sub& s = subs_[idx];
            const double e = pot.field(t + 0.5 * s.s);
            if (prev < 0) {
                phase(psi, s.static_phase, 0.5 * s.s * e);
            } else {
                phase(psi, merged_.at(pair_key(prev, idx)), 0.5 * (prev_s * prev_e + s.s * e));
            }
            kinetic_z(psi, s);
            kinetic_rho(psi, s);
            prev = idx;
            prev_s = s.s;
            prev_e = e;
            t += s.s;
            if ((q + 1) % static_cast<long>(ns) == 0) t = t0 + ((q + 1) / static_cast<long>(ns)) * dt_;
        }
        phase(psi, subs_[prev].static_phase, 0.5 * prev_s * prev_e);
        psi.t = t0 + nsteps * dt_;
    }

private:
    struct Sub {
        double s = 0.0;
        cplx c;                       // CN coefficient -kappa*s/2
        PentaLU<cplx> lz, lr;
        std::array<std::vector<cplx>, 5> az, ar;  // -c times the kinetic bands
        std::vector<cplx> static_phase;  // exp(kappa s/2 V_static)
    };

    static int pair_key(int a, int b) { return 4 * a + b; }

    Sub make_sub(double s) const {
        Sub sub;
        sub.s = s;
        sub.c = -kappa_ * (0.5 * s);
        const Hamiltonian& h = *h_;
        std::array<std::vector<cplx>, 5> bz, br;
        for (int d = 0; d < 5; ++d) {
            bz[d].resize(h.tz[d].size());
            for (std::size_t i = 0; i < bz[d].size(); ++i) bz[d][i] = sub.c * h.tz[d][i] + (d == 2 ? 1.0 : 0.0);
            br[d].resize(h.krho[d].size());
            for (std::size_t i = 0; i < br[d].size(); ++i)
                br[d][i] = sub.c * h.krho[d][i] + (d == 2 ? h.wrho_idx[i] : 0.0);
        }
        for (int d = 0; d < 5; ++d) {
            sub.az[d].resize(h.tz[d].size());
            for (std::size_t i = 0; i < h.tz[d].size(); ++i) sub.az[d][i] = -sub.c * h.tz[d][i];
            sub.ar[d].resize(h.krho[d].size());
            for (std::size_t i = 0; i < h.krho[d].size(); ++i) sub.ar[d][i] = -sub.c * h.krho[d][i];
        }
        sub.lz.factor(std::move(bz));
        sub.lr.factor(std::move(br));
        sub.static_phase.resize(h.v_static.size());
        for (std::size_t i = 0; i < h.v_static.size(); ++i)
            sub.static_phase[i] = std::exp(kappa_ * (0.5 * s) * h.v_static[i]);
        return sub;
    }

    /// Multiply by stat * exp(kappa z a) on the unknown nodes.
    void phase(WaveField& psi, const std::vector<cplx>& stat, double a) {
        const CylGrid& g = h_->grid;
        for (int k = 0; k < g.n_z; ++k) row_phase_[k] = std::exp(kappa_ * (g.z(k) * a));
#pragma omp parallel for schedule(static)
        for (int k = 1; k < g.n_z - 1; ++k) {
            const std::size_t base = g.index(k, 0);
            const cplx rp = row_phase_[k];
            cplx* p = &psi.amp[base];
            const cplx* f = &stat[base];
            for (int j = 1; j < g.n_rho - 1; ++j) p[j] *= f[j] * rp;
        }
    }

    void kinetic_z(WaveField& psi, const Sub& s) {
        const Hamiltonian& h = *h_;
        const CylGrid& g = h.grid;
        const int nzi = h.nzi(), nri = h.nri();
#pragma omp parallel for schedule(static)
        for (int kk = 0; kk < nzi; ++kk) {
            cplx* out = &tmp_[g.index(kk + 1, 1)];
            const cplx* in = &psi.amp[g.index(kk + 1, 1)];
            for (int jj = 0; jj < nri; ++jj) out[jj] = in[jj];
            for (int d = 0; d < 5; ++d) {
                const int l = kk + d - 2;
                if (l < 0 || l >= nzi) continue;
                const cplx a = s.az[d][kk];
                const cplx* src = &psi.amp[g.index(l + 1, 1)];
                for (int jj = 0; jj < nri; ++jj) out[jj] += a * src[jj];
            }
        }
        constexpr int chunk = 64;
        const int nchunks = (nri + chunk - 1) / chunk;
#pragma omp parallel for schedule(static)
        for (int ch = 0; ch < nchunks; ++ch) {
            const int j0 = ch * chunk;
            const int m = std::min(chunk, nri - j0);
            s.lz.solve_many(&tmp_[g.index(1, 1 + j0)], static_cast<std::size_t>(m), static_cast<std::size_t>(g.n_rho));
        }
        psi.amp.swap(tmp_);
    }

    /// Rows are solved in blocks through a transposed buffer so that the
    /// recurrences of different rows interleave.
    void kinetic_rho(WaveField& psi, const Sub& s) {
        const Hamiltonian& h = *h_;
        const CylGrid& g = h.grid;
        const int nzi = h.nzi(), nri = h.nri();
        const cplx* a0 = s.ar[0].data();
        const cplx* a1 = s.ar[1].data();
        const cplx* a2 = s.ar[2].data();
        const cplx* a3 = s.ar[3].data();
        const cplx* a4 = s.ar[4].data();
        const double* w = h.wrho_idx.data();
        constexpr int B = 16;
        const int nblocks = (nzi + B - 1) / B;
#pragma omp parallel
        {
            std::vector<cplx> tb(static_cast<std::size_t>(nri) * B);
#pragma omp for schedule(static)
            for (int blk = 0; blk < nblocks; ++blk) {
                const int k0 = blk * B;
                const int m = std::min(B, nzi - k0);
                for (int r = 0; r < m; ++r) {
                    const cplx* in = &psi.amp[g.index(k0 + r + 1, 1)];
                    for (int jj = 0; jj < nri; ++jj) {
                        cplx acc = w[jj] * in[jj];
                        if (jj >= 2 && jj < nri - 2) {
                            acc += a0[jj] * in[jj - 2] + a1[jj] * in[jj - 1] + a2[jj] * in[jj] + a3[jj] * in[jj + 1] +
                                   a4[jj] * in[jj + 2];
                        } else {
                            for (int d = 0; d < 5; ++d) {
                                const int l = jj + d - 2;
                                if (l >= 0 && l < nri) acc += s.ar[d][jj] * in[l];
                            }
                        }
                        tb[static_cast<std::size_t>(jj) * B + r] = acc;
                    }
                }
                s.lr.solve_many(tb.data(), static_cast<std::size_t>(m), static_cast<std::size_t>(B));
                for (int r = 0; r < m; ++r) {
                    cplx* out = &tmp_[g.index(k0 + r + 1, 1)];
                    for (int jj = 0; jj < nri; ++jj) out[jj] = tb[static_cast<std::size_t>(jj) * B + r];
                }
            }
        }
        psi.amp.swap(tmp_);
    }

    const Hamiltonian* h_;
    double dt_;
    SplitOrder order_;
    cplx kappa_;
    std::vector<Sub> subs_;
    std::vector<int> sequence_;
    std::vector<cplx> tmp_;
    std::vector<cplx> row_phase_;
    std::map<int, std::vector<cplx>> merged_;
};

/// Observer invoked at t = 0, cadence, 2 cadence, ..., t_max.
using Observer = std::function<void(const WaveField&, long step)>;

/**
 * @brief Real-time propagation from psi0 to t_max.
 * The axis column is refreshed before every observer call.
 */
inline WaveField run(const WaveField& psi0, PropagatorPlan& plan, const PotentialSpec& pot, double t_max,
                     double cadence, const Observer& sink) {
    const double ratio = cadence / plan.dt();
    const long per = std::lround(ratio);
    if (per < 1 || std::abs(ratio - per) > 1e-9 * std::max(1.0, ratio))
        throw ConfigError("time.cadence must be a positive multiple of time.dt");
    const double nobs_f = t_max / cadence;
    const long nobs = std::lround(nobs_f);
    if (nobs < 0 || std::abs(nobs_f - nobs) > 1e-9 * std::max(1.0, nobs_f))
        throw ConfigError("time.t_max must be a multiple of time.cadence");
    WaveField psi = psi0;
    const double t0 = psi0.t;
    psi.enforce_boundaries();
    if (sink) sink(psi, 0);
    long step = 0;
    for (long n = 1; n <= nobs; ++n) {
        plan.advance(psi, pot, per);
        step += per;
        psi.t = t0 + step * plan.dt();
        for (const auto& a : psi.amp)
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
                throw NumericalError("non-finite field after step " + std::to_string(step));
        psi.fill_axis();
        if (sink) sink(psi, step);
    }
    return psi;
}

struct GroundState {
    WaveField psi;
    double energy = 0.0;
    double residual = 0.0;   ///< ||H psi - E psi|| in the quadrature norm
    long iterations = 0;
    std::vector<double> energy_history;
};

struct ItpOptions {
    double tau = 0.05;
    double tau_min = 0.005;  ///< tau is halved after each converged stage down to this value
    double tol = 1e-8;
    long max_steps = 40000;
    int check_every = 10;
};

/// Default starting guess exp(-r).
inline WaveField hydrogenic_guess(const CylGrid& g) {
    WaveField w = WaveField::from_function(g, [](double z, double r) { return cplx(std::exp(-std::sqrt(z * z + r * r)), 0.0); });
    w.enforce_boundaries();
    normalize(w);
    return w;
}

/**
 * @brief Imaginary-time relaxation with renormalization after every step.
 *
 * A stage converges when |Delta E| per unit imaginary time drops below tol.
 * The splitting error of the fixed point grows with tau near the Coulomb
 * singularity, so after the first stage tau is halved and the relaxation
 * continues until tau_min is reached.
 */
inline GroundState ground_state_itp(const Hamiltonian& h, const ItpOptions& opt, WaveField guess) {
    if (!(opt.tau > 0.0)) throw ConfigError("itp.tau must be positive");
    if (!(opt.tol > 0.0)) throw ConfigError("itp.tol must be positive");
    PotentialSpec free;
    free.field_free = true;
    GroundState gs;
    WaveField psi = std::move(guess);
    psi.t = 0.0;
    psi.enforce_boundaries();
    normalize(psi);
    double e_prev = energy(h, psi);
    gs.energy_history.push_back(e_prev);
    long it = 0;
    double tau = opt.tau;
    while (true) {
        PropagatorPlan plan(h, tau, SplitOrder::strang2, true);
        bool converged = false;
        long stage_it = 0;
        while (it < opt.max_steps) {
            plan.step(psi, free);
            psi.t = 0.0;
            normalize(psi);
            ++it;
            ++stage_it;
            if (stage_it % opt.check_every == 0) {
                const double e = energy(h, psi);
                if (!std::isfinite(e)) throw NumericalError("imaginary-time energy became non-finite");
                gs.energy_history.push_back(e);
                const double rate = std::abs(e - e_prev) / (opt.check_every * tau);
                e_prev = e;
                if (rate < opt.tol) {
                    converged = true;
                    break;
                }
            }
        }
        if (!converged)
            throw NumericalError("imaginary-time propagation did not converge; last energy " + std::to_string(e_prev));
        if (tau <= opt.tau_min * (1.0 + 1e-12)) break;
        tau = std::max(0.5 * tau, opt.tau_min);
    }
    psi.fill_axis();
    gs.energy = e_prev;
    gs.iterations = it;
    WaveField hp(psi.grid);
    apply_kinetic_plus(h, psi.amp, h.v_static, hp.amp);
    for (std::size_t i = 0; i < hp.amp.size(); ++i) hp.amp[i] -= gs.energy * psi.amp[i];
    gs.residual = std::sqrt(norm2(hp));
    gs.psi = std::move(psi);
    return gs;
}

}  // namespace sfent
