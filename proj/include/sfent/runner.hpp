#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "csv.hpp"
#include "density.hpp"
#include "entropy.hpp"
#include "hamiltonian.hpp"
#include "observables.hpp"
#include "propagator.hpp"
#include "snapshot.hpp"

namespace sfent {

/// Density matrices of one sampled time, for callers that inspect them.
struct MatrixSet {
    DensityMatrix rel_z, core_z, elec_z;
    std::optional<DensityMatrix> rel_x, core_x, elec_x;
};

using MatrixInspector = std::function<void(const MatrixSet&)>;

/// All reduced density matrices of psi; x-direction ones only when with_x.
inline MatrixSet reduce_all(const WaveField& psi, const SimConfig& cfg, bool with_x) {
    const ComSpec com = cfg.resolved_com();
    MatrixSet m;
    m.rel_z = reduce_rel_z(psi);
    const TransformSpec tz = cfg.transform(m.rel_z.grid);
    m.core_z = reduce_core_1d(m.rel_z, com, psi.t, tz);
    m.elec_z = reduce_elec_1d(m.rel_z, com, psi.t, tz);
    if (with_x) {
        const Grid1D xg = cfg.x_grid();
        m.rel_x = reduce_rel_x(psi, xg, xg);
        const TransformSpec tx = cfg.transform(m.rel_x->grid);
        m.core_x = reduce_core_1d(*m.rel_x, com, psi.t, tx);
        m.elec_x = reduce_elec_1d(*m.rel_x, com, psi.t, tx);
    }
    return m;
}

inline EntropyRecord entropies_of(const MatrixSet& m, double t, double threshold, bool linear) {
    const DirectionEntropies z = direction_entropies(m.rel_z, m.core_z, m.elec_z, threshold, linear);
    std::optional<DirectionEntropies> x;
    if (m.rel_x) x = direction_entropies(*m.rel_x, *m.core_x, *m.elec_x, threshold, false);
    return make_record(t, z, x, linear);
}

inline EntropyRecord compute_entropies(const WaveField& psi, const SimConfig& cfg, bool with_x,
                                       const MatrixInspector& inspect = {}) {
    const MatrixSet m = reduce_all(psi, cfg, with_x);
    if (inspect) inspect(m);
    return entropies_of(m, psi.t, cfg.threshold, cfg.linear_entropies);
}

/// Ground state from cfg.ground_state if set, else by imaginary-time relaxation.
inline GroundState prepare_ground_state(const SimConfig& cfg, const Hamiltonian& h) {
    if (!cfg.ground_state.empty()) {
        Snapshot s = read_sfw1(cfg.ground_state);
        if (!(s.psi.grid == cfg.grid)) throw ConfigError("ground-state snapshot grid does not match the config grid");
        if (std::abs(s.mu - cfg.mu) > 1e-15) throw ConfigError("ground-state snapshot mu does not match mass.mu");
        GroundState gs;
        gs.psi = std::move(s.psi);
        gs.psi.t = 0.0;
        gs.energy = energy(h, gs.psi);
        return gs;
    }
    return ground_state_itp(h, cfg.itp, hydrogenic_guess(cfg.grid));
}

/// Warning text when the box edges hold more than 1e-6 of the probability of psi.
inline std::optional<std::string> support_warning(const WaveField& psi) {
    const CylGrid& g = psi.grid;
    const auto wz = g.z_weights();
    const auto wr = g.rho_weights();
    const int band = std::max(1, static_cast<int>(std::lround(5.0 / g.dz)));
    const int rband = std::max(1, static_cast<int>(std::lround(5.0 / g.drho)));
    double edge = 0.0, total = 0.0;
    for (int k = 0; k < g.n_z; ++k)
        for (int j = 0; j < g.n_rho; ++j) {
            const double p = wz[k] * wr[j] * std::norm(psi.at(k, j));
            total += p;
            if (k < band || k >= g.n_z - band || j >= g.n_rho - rband) edge += p;
        }
    if (total > 0.0 && edge / total > 1e-6)
        return "support truncation: " + csv::cell(edge / total) + " of the probability lies within 5 a.u. of the box edge";
    return std::nullopt;
}

struct RunHooks {
    std::function<void(const RunRow&)> row;
    MatrixInspector matrices;
    std::function<void(const WaveField&)> snapshot;
    std::function<void(const WaveField&)> state;  ///< every observed state
};

/**
 * @brief Real-time run from the ground state. z-direction entropies at every
 * cadence tick, x-direction ones every x_cadence.
 */
inline std::vector<RunRow> run_simulation(const SimConfig& cfg, const Hamiltonian& h, const WaveField& psi0,
                                          const RunHooks& hooks = {}) {
    PropagatorPlan plan(h, cfg.dt, cfg.order);
    PotentialSpec pot{cfg.pulse, false};
    const long x_every = std::lround(cfg.x_cadence / cfg.cadence);
    const long snap_every = cfg.snapshot_every > 0.0 ? std::lround(cfg.snapshot_every / cfg.cadence) : 0;
    std::vector<RunRow> rows;
    long tick = 0;
    auto observe = [&](const WaveField& psi, long) {
        RunRow r;
        r.diag.t = psi.t;
        r.diag.Ez = field_at(cfg.pulse, psi.t);
        r.diag.f = ground_state_loss(psi, psi0);
        r.diag.vz = mean_velocity(psi, cfg.mu);
        if (cfg.entropies) r.ent = compute_entropies(psi, cfg, tick % x_every == 0, hooks.matrices);
        if (hooks.state) hooks.state(psi);
        if (snap_every > 0 && tick % snap_every == 0 && hooks.snapshot) hooks.snapshot(psi);
        if (hooks.row) hooks.row(r);
        rows.push_back(std::move(r));
        ++tick;
    };
    run(psi0, plan, pot, cfg.t_max, cfg.cadence, observe);
    return rows;
}

/// End-of-run summary of one sweep member.
struct SweepSummary {
    double value = 0.0;
    bool ok = false;
    std::string error;
    double f_end = 0.0, S_z_end = 0.0, mut_z_end = 0.0;
    std::optional<double> mut_x_end, S_total_end;
};

inline SweepSummary summarize(double value, const std::vector<RunRow>& rows) {
    SweepSummary s;
    s.value = value;
    s.ok = true;
    if (rows.empty()) return s;
    s.f_end = rows.back().diag.f;
    if (rows.back().ent) {
        s.S_z_end = rows.back().ent->S_z;
        s.mut_z_end = rows.back().ent->mut_z;
    }
    for (auto it = rows.rbegin(); it != rows.rend(); ++it)
        if (it->ent && it->ent->mut_x) {
            s.mut_x_end = it->ent->mut_x;
            s.S_total_end = it->ent->S_total;
            break;
        }
    return s;
}

enum class SweepAxis { F, CEP };

inline SweepAxis sweep_axis_from_string(const std::string& s) {
    if (s == "F") return SweepAxis::F;
    if (s == "CEP" || s == "cep") return SweepAxis::CEP;
    throw ConfigError("unknown sweep axis '" + s + "' (expected F or CEP)");
}

inline std::string member_name(SweepAxis axis, double v) {
    return std::string(axis == SweepAxis::F ? "F_" : "CEP_") + csv::cell(v);
}

/**
 * @brief Independent runs over one pulse parameter sharing a ground state.
 * Each member writes its own CSV; a failing member is recorded and skipped.
 */
inline std::vector<SweepSummary> run_sweep(const SimConfig& base, SweepAxis axis, const std::vector<double>& values,
                                           const std::filesystem::path& out, const Hamiltonian& h,
                                           const WaveField& psi0) {
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    std::vector<SweepSummary> out_rows;
    for (double v : values) {
        SimConfig c = base;
        if (axis == SweepAxis::F) c.pulse.F = v;
        else c.pulse.cep = v;
        const std::filesystem::path file = out / (member_name(axis, v) + ".csv");
        const std::filesystem::path part = file.string() + ".part";
        try {
            c.validate();
            std::ofstream os(part);
            if (!os) throw std::runtime_error("cannot write '" + part.string() + "'");
            const bool aligned = axis == SweepAxis::CEP;
            write_csv_header(os, aligned);
            RunHooks hooks;
            hooks.row = [&](const RunRow& r) {
                std::optional<double> ta;
                if (aligned) ta = r.diag.t + cep_time_shift(c.pulse);
                write_csv_row(os, r, ta);
            };
            const auto rows = run_simulation(c, h, psi0, hooks);
            os.close();
            std::filesystem::rename(part, file);
            out_rows.push_back(summarize(v, rows));
        } catch (const std::exception& e) {
            std::error_code ec;
            std::filesystem::remove(part, ec);
            SweepSummary s;
            s.value = v;
            s.error = e.what();
            out_rows.push_back(s);
        }
    }
    return out_rows;
}

inline void write_sweep_summary(std::ostream& os, SweepAxis axis, const std::vector<SweepSummary>& rows) {
    os << (axis == SweepAxis::F ? "F" : "CEP") << ",status,f_end,S_z_end,mut_z_end,mut_x_end,S_total_end\n";
    for (const auto& s : rows) {
        os << csv::cell(s.value) << ',' << (s.ok ? "ok" : "failed");
        if (s.ok)
            os << ',' << csv::cell(s.f_end) << ',' << csv::cell(s.S_z_end) << ',' << csv::cell(s.mut_z_end) << ','
               << csv::cell(s.mut_x_end) << ',' << csv::cell(s.S_total_end);
        else
            os << ",,,,,";
        os << '\n';
    }
}

}  // namespace sfent
