// Command-line driver: ground state, runs, sweeps and snapshot analysis.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <sfent/sfent.hpp>

namespace fs = std::filesystem;
using namespace sfent;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
    std::string config;
    std::string out = "out";
    std::string preset = "desk";
    std::string axis = "F";
    std::vector<double> values;
    double snapshots = 0.0;
    std::string snapshot_path;
};

SimConfig resolve(const Options& o) {
    SimConfig c = preset(preset_from_string(o.preset));
    if (!o.config.empty()) c = load_config(o.config, c);
    if (o.snapshots > 0.0) c.snapshot_every = o.snapshots;
    c.validate();
#ifdef _OPENMP
    if (c.threads > 0) omp_set_num_threads(c.threads);
#endif
    return c;
}

fs::path prepare_out(const Options& o) {
    const fs::path p(o.out);
    fs::create_directories(p);
    return p;
}

std::string snapshot_name(double t) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "psi_t%08.2f.sfw", t);
    return buf;
}

GroundState ground(const SimConfig& c, const Hamiltonian& h) {
    GroundState gs = prepare_ground_state(c, h);
    if (const auto w = support_warning(gs.psi)) std::cerr << "warning: " << *w << '\n';
    return gs;
}

int cmd_ground_state(const Options& o) {
    const SimConfig c = resolve(o);
    const fs::path out = prepare_out(o);
    const Hamiltonian h = build_hamiltonian(c.grid, c.mu, c.cusp_correction);
    SimConfig fresh = c;
    fresh.ground_state.clear();
    const GroundState gs = ground(fresh, h);
    write_sfw1((out / "ground_state.sfw").string(), gs.psi, c.mu);
    std::ofstream rep(out / "ground_state.txt");
    std::ostringstream text;
    text << "epsilon0 = " << csv::cell(gs.energy) << '\n'
         << "residual = " << csv::cell(gs.residual) << '\n'
         << "iterations = " << gs.iterations << '\n'
         << "F_tu = " << csv::cell(critical_field(gs.energy)) << '\n';
    rep << text.str();
    std::cout << text.str();
    return 0;
}

int cmd_run(const Options& o) {
    const SimConfig c = resolve(o);
    const fs::path out = prepare_out(o);
    const Hamiltonian h = build_hamiltonian(c.grid, c.mu, c.cusp_correction);
    const GroundState gs = ground(c, h);
    std::ofstream cfg_out(out / "config.txt");
    cfg_out << print_config(c);
    std::ofstream os(out / "run.csv");
    write_csv_header(os);
    RunHooks hooks;
    hooks.row = [&](const RunRow& r) {
        write_csv_row(os, r);
        os.flush();
    };
    hooks.snapshot = [&](const WaveField& psi) { write_sfw1((out / snapshot_name(psi.t)).string(), psi, c.mu); };
    run_simulation(c, h, gs.psi, hooks);
    return 0;
}

int cmd_sweep(const Options& o) {
    const SimConfig c = resolve(o);
    const SweepAxis axis = sweep_axis_from_string(o.axis);
    if (o.values.empty()) throw ConfigError("--values is required for sweep");
    const fs::path out = prepare_out(o);
    const Hamiltonian h = build_hamiltonian(c.grid, c.mu, c.cusp_correction);
    const GroundState gs = ground(c, h);
    const auto rows = run_sweep(c, axis, o.values, out, h, gs.psi);
    std::ofstream sum(out / "summary.csv");
    write_sweep_summary(sum, axis, rows);
    write_sweep_summary(std::cout, axis, rows);
    for (const auto& r : rows)
        if (!r.ok) std::cerr << "member " << csv::cell(r.value) << " failed: " << r.error << '\n';
    return 0;
}

int cmd_entropy(const Options& o) {
    SimConfig c = resolve(o);
    const fs::path out = prepare_out(o);
    const Snapshot snap = read_sfw1(o.snapshot_path);
    if (!(snap.psi.grid == c.grid)) throw ConfigError("snapshot grid does not match the config grid");
    const Hamiltonian h = build_hamiltonian(c.grid, c.mu, c.cusp_correction);
    const GroundState gs = ground(c, h);
    const MatrixSet m = reduce_all(snap.psi, c, true);
    for (const DensityMatrix* d : {&m.rel_z, &m.core_z, &m.elec_z, &*m.rel_x, &*m.core_x, &*m.elec_x})
        write_sdm1((out / (to_string(d->label) + ".sdm")).string(), *d);
    RunRow r;
    r.diag.t = snap.psi.t;
    r.diag.Ez = field_at(c.pulse, snap.psi.t);
    r.diag.f = ground_state_loss(snap.psi, gs.psi);
    r.diag.vz = mean_velocity(snap.psi, c.mu);
    r.ent = entropies_of(m, snap.psi.t, c.threshold, c.linear_entropies);
    std::ofstream os(out / "entropy.csv");
    write_csv_header(os);
    write_csv_row(os, r);
    write_csv_header(std::cout);
    write_csv_row(std::cout, r);
    return 0;
}

int cmd_print_config(const Options& o) {
    std::cout << print_config(resolve(o));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Strong-field ionization TDSE with electron-core entanglement entropies"};
    app.require_subcommand(1);
    Options o;
    auto common = [&o](CLI::App* s) {
        s->add_option("--config", o.config, "key = value config file");
        s->add_option("--preset", o.preset, "base preset")->check(CLI::IsMember({"desk", "full"}));
        s->add_option("--out", o.out, "output directory");
    };
    auto* gs = app.add_subcommand("ground-state", "imaginary-time ground state and energy report");
    common(gs);
    auto* run = app.add_subcommand("run", "real-time run writing run.csv");
    common(run);
    run->add_option("--snapshots", o.snapshots, "write an SFW1 snapshot every this many a.u.");
    auto* sweep = app.add_subcommand("sweep", "independent runs over F or CEP");
    common(sweep);
    sweep->add_option("--axis", o.axis, "F or CEP")->check(CLI::IsMember({"F", "CEP", "cep"}));
    sweep->add_option("--values", o.values, "parameter values")->delimiter(',');
    sweep->add_option("--snapshots", o.snapshots, "write an SFW1 snapshot every this many a.u.");
    auto* ent = app.add_subcommand("entropy-from-snapshot", "all entropies of one SFW1 snapshot");
    common(ent);
    ent->add_option("snapshot", o.snapshot_path, "SFW1 file")->required();
    auto* pc = app.add_subcommand("print-config", "print the fully resolved config");
    common(pc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }
    try {
        if (*gs) return cmd_ground_state(o);
        if (*run) return cmd_run(o);
        if (*sweep) return cmd_sweep(o);
        if (*ent) return cmd_entropy(o);
        if (*pc) return cmd_print_config(o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
