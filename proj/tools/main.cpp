#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "jumpflow/config.hpp"
#include "jumpflow/diagnostics.hpp"
#include "jumpflow/io.hpp"
#include "jumpflow/ns.hpp"
#include "jumpflow/parabolic.hpp"
#include "jumpflow/runner.hpp"

namespace fs = std::filesystem;
using namespace jumpflow;

namespace {

void set_threads(int k) {
#ifdef _OPENMP
    if (k > 0) omp_set_num_threads(k);
#else
    (void)k;
#endif
}

std::vector<int> parse_grid_list(const std::string& spec) {
    std::vector<int> out;
    std::string token;
    std::stringstream ss(spec);
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) out.push_back(std::stoi(token));
    }
    return out;
}

int cmd_converge(const RunConfig& cfg, const std::string& out_dir, const std::string& grids) {
    fs::create_directories(out_dir);
    std::vector<int> ns = parse_grid_list(grids);
    if (ns.empty()) ns = {20, 40, 80};

    std::vector<ConvergenceRow> rows;
    double prev_err = std::nan("");
    for (const int n : ns) {
        ConvergenceRow row{n, std::nan(""), std::nan("")};
        try {
            const ParabolicCase pc = to_parabolic_case(cfg, n);
            const ParabolicResult r = run_parabolic(pc);
            row.max_error = r.max_error;
            if (!std::isnan(prev_err)) {
                if (auto roc = convergence_order(prev_err, r.max_error)) row.roc = *roc;
            }
            prev_err = r.max_error;
            std::printf("N=%4d  max_error=%.6e  roc=%s\n", n, row.max_error,
                        std::isnan(row.roc) ? "-" : std::to_string(row.roc).c_str());
        } catch (const std::exception& e) {
            std::fprintf(stderr, "N=%d failed: %s\n", n, e.what());
            prev_err = std::nan("");
        }
        rows.push_back(row);
    }
    write_convergence_csv((fs::path(out_dir) / "convergence.csv").string(), rows);
    return 0;
}

int cmd_run(const RunConfig& cfg, const std::string& out_dir, int snapshots_every,
            const std::string& restart_path) {
    RunOptions opt;
    opt.snapshots_every_override = snapshots_every;
    opt.restart_file = restart_path;
    opt.progress_every = 500;
    run_flow_to_dir(cfg, out_dir, opt);
    return 0;
}

int cmd_post(const std::string& series, const std::string& op, const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::vector<double> t, cl;
    read_forces_csv(series, t, cl);
    if (t.size() < 2) throw IoError(series + ": need at least 2 samples");
    const double dt_sample = t[1] - t[0];

    if (op == "strouhal") {
        const auto st = strouhal(cl, dt_sample);
        std::ofstream out((fs::path(out_dir) / "strouhal.csv"));
        out << "st\n";
        if (st) {
            out << *st << "\n";
            std::printf("St = %.6f\n", *st);
        } else {
            out << "no-shedding\n";
            std::printf("no shedding signal detected\n");
        }
        return 0;
    }
    if (op == "spectrum") {
        write_spectrum_csv((fs::path(out_dir) / "spectrum.csv").string(),
                           power_spectrum(cl, dt_sample));
        return 0;
    }
    throw ConfigError("unknown post operation '" + op + "' (use strouhal or spectrum)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"structured-grid immersed-interface flow solver"};
    app.require_subcommand(1);

    std::string config_path, out_dir, grids = "20,40,80";
    std::string series, op = "strouhal", restart;
    int snapshots_every = -1, threads = 0;

    auto* conv = app.add_subcommand("converge", "grid refinement study (parabolic case)");
    conv->add_option("--config", config_path, "configuration file")->required();
    conv->add_option("--out", out_dir, "output directory");
    conv->add_option("--grids", grids, "comma-separated grid sizes");
    conv->add_option("--threads", threads, "worker threads");

    auto* run = app.add_subcommand("run", "time-march a flow case");
    run->add_option("--config", config_path, "configuration file")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--snapshots-every", snapshots_every, "steps between VTK snapshots");
    run->add_option("--threads", threads, "worker threads");
    run->add_option("--restart", restart, "checkpoint file to resume from");

    auto* post = app.add_subcommand("post", "post-process a force time series");
    post->add_option("--series", series, "forces CSV file")->required();
    post->add_option("--op", op, "strouhal | spectrum");
    post->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (conv->parsed() || run->parsed()) {
            RunConfig cfg = load_config(config_path);
            if (threads > 0) cfg.threads = threads;
            set_threads(cfg.threads);
            if (out_dir.empty()) out_dir = cfg.out_dir;
            if (conv->parsed()) return cmd_converge(cfg, out_dir, grids);
            return cmd_run(cfg, out_dir, snapshots_every, restart);
        }
        if (post->parsed()) {
            if (out_dir.empty()) out_dir = ".";
            return cmd_post(series, op, out_dir);
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    return 0;
}
