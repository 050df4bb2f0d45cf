// stochmesh: adaptive moving meshes from the time-relaxed Winslow equation.
//
//   stochmesh run       --config ring.yaml --seed 42 --out out/
//   stochmesh reference --config ring.yaml --out ref/
//   stochmesh compare   a.csv b.csv
//   stochmesh mc-study  --seeds 32

#include "stochmesh/config.hpp"
#include "stochmesh/driver.hpp"
#include "stochmesh/quality.hpp"
#include "stochmesh/snapshot_io.hpp"
#include "stochmesh/studies.hpp"
#include "stochmesh/svg.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace stochmesh;

namespace {

struct RunOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    std::optional<double> dt;
    std::optional<double> t_end;
    std::optional<int> substeps;
    std::optional<std::string> subdomains;
    std::optional<std::string> out;
    std::optional<unsigned> workers;
    std::optional<std::size_t> points;
};

void add_run_flags(CLI::App* cmd, RunOptions& o) {
    cmd->add_option("--config", o.config, "Configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "Random seed");
    cmd->add_option("--paths", o.paths, "Monte Carlo paths per estimate");
    cmd->add_option("--dt", o.dt, "Mesh time step");
    cmd->add_option("--tend", o.t_end, "Final time");
    cmd->add_option("--substeps", o.substeps, "SDE sub-steps per time step");
    cmd->add_option("--subdomains", o.subdomains, "Subdomain layout MxN");
    cmd->add_option("--points", o.points, "Interpolation anchors per interface");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--workers", o.workers, "Worker threads");
}

CliConfig resolve(const RunOptions& o) {
    CliConfig c = o.config.empty() ? parse_config_text("") : parse_config(o.config);
    auto& r = c.run;
    if (o.seed) r.seed = *o.seed;
    if (o.paths) r.n_paths = *o.paths;
    if (o.dt) r.dt = *o.dt;
    if (o.t_end) {
        r.t_end = *o.t_end;
        std::erase_if(r.output_times, [&](double t) { return t > r.t_end + 1e-12; });
        if (r.output_times.empty() || std::llround(r.output_times.back() / r.dt) != std::llround(r.t_end / r.dt)) {
            r.output_times.push_back(r.t_end);
        }
    }
    if (o.substeps) r.n_sub = *o.substeps;
    if (o.points) r.points_per_interface = *o.points;
    if (o.workers) r.workers = *o.workers;
    if (o.subdomains) {
        std::size_t m = 0, n = 0;
        char x = 0;
        std::istringstream in(*o.subdomains);
        if (!(in >> m >> x >> n) || (x != 'x' && x != 'X') || !in.eof()) {
            throw ConfigError("subdomains: expected MxN, got '" + *o.subdomains + "'");
        }
        r.sub_x = m;
        r.sub_y = n;
    }
    if (o.out) c.output.directory = *o.out;
    try {
        r.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

std::string snapshot_stem(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "snapshot_t%.4f", t);
    return buf;
}

int do_run(const RunOptions& o, bool reference) {
    CliConfig c = resolve(o);
    if (reference) c.run.mode = RunMode::SingleDomain;
    for (const auto& n : c.notices) std::cerr << n << '\n';

    const fs::path dir(c.output.directory);
    fs::create_directories(dir);
    const MeshGenerator gen(c.run);

    nlohmann::json summary;
    summary["mode"] = c.run.mode == RunMode::SingleDomain ? "single" : "dd";
    summary["config_hash"] = config_fingerprint(c.run);
    summary["seed"] = c.run.seed;
    summary["grid"] = {c.run.nx, c.run.ny};
    summary["subdomains"] = {gen.partition().m, gen.partition().n};
    summary["dt"] = c.run.dt;
    summary["t_end"] = c.run.t_end;
    summary["n_sub"] = c.run.n_sub;
    summary["n_paths"] = c.run.n_paths;
    summary["alpha"] = c.run.ring.alpha;
    summary["beta"] = c.run.ring.beta;
    summary["snapshots"] = nlohmann::json::array();

    auto write_summary = [&] {
        std::ofstream f(dir / "summary.json");
        f << summary.dump(2) << '\n';
    };

    const auto t0 = std::chrono::steady_clock::now();
    RunResult result;
    try {
        result = gen.run([&](const MeshSnapshot& snap) {
            const std::string stem = snapshot_stem(snap.state.t);
            if (c.output.csv) write_snapshot_csv(snap.state, (dir / (stem + ".csv")).string());
            if (c.output.svg) write_mesh_svg(snap, (dir / (stem + ".svg")).string());
            const QualityReport q = assess(snap.state);
            summary["snapshots"].push_back({{"t", snap.state.t},
                                            {"file", stem},
                                            {"min_jacobian", q.min_jacobian},
                                            {"fold_free", q.fold_free},
                                            {"max_node_displacement_from_uniform", q.max_node_displacement_from_uniform},
                                            {"min_value", q.min_value},
                                            {"max_value", q.max_value},
                                            {"stochastic_points", snap.stochastic_points.size()}});
            std::cout << "t=" << snap.state.t << " min_jacobian=" << q.min_jacobian
                      << " fold_free=" << (q.fold_free ? "yes" : "no") << '\n';
        });
    } catch (const std::exception& e) {
        summary["error"] = e.what();
        write_summary();
        throw;
    }
    summary["steps"] = result.steps;
    summary["max_std_error"] = result.max_std_error;
    summary["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    summary["stage_seconds"] = result.timings.seconds;
    write_summary();
    std::cout << "wrote " << result.snapshots.size() << " snapshot(s) to " << dir.string() << '\n';
    return 0;
}

int do_compare(const std::string& a, const std::string& b) {
    const MeshDistance d = mesh_distance(read_snapshot_csv(a), read_snapshot_csv(b));
    std::printf("l_inf %.17g\nl_2 %.17g\n", d.l_inf, d.l_2);
    return 0;
}

int do_mc_study(std::size_t seeds, std::uint64_t base_seed) {
    McStudyConfig cfg;
    cfg.seeds = seeds;
    cfg.base_seed = base_seed;
    const McStudyResult r = run_mc_study(cfg);
    std::printf("%10s %14s %14s\n", "N", "rms_error", "mean_std_err");
    for (const auto& row : r.rows) std::printf("%10zu %14.6e %14.6e\n", row.n_paths, row.rms_error, row.mean_std_error);
    std::printf("slope %.4f\n", r.slope);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive moving meshes by stochastic domain decomposition"};
    app.require_subcommand(1);

    RunOptions run_opts, ref_opts;
    auto* run = app.add_subcommand("run", "Full hybrid stochastic / deterministic run");
    add_run_flags(run, run_opts);
    auto* ref = app.add_subcommand("reference", "Single-domain deterministic reference run");
    add_run_flags(ref, ref_opts);

    std::string file_a, file_b;
    auto* cmp = app.add_subcommand("compare", "Distance between two snapshot CSV files");
    cmp->add_option("a", file_a)->required()->check(CLI::ExistingFile);
    cmp->add_option("b", file_b)->required()->check(CLI::ExistingFile);

    std::size_t seeds = 32;
    std::uint64_t base_seed = 1;
    auto* mc = app.add_subcommand("mc-study", "Monte Carlo error versus path count, driftless case");
    mc->add_option("--seeds", seeds, "Independent repetitions per path count");
    mc->add_option("--seed", base_seed, "First seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run) return do_run(run_opts, false);
        if (*ref) return do_run(ref_opts, true);
        if (*cmp) return do_compare(file_a, file_b);
        if (*mc) return do_mc_study(seeds, base_seed);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
