#include "jumpflow/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "jumpflow/diagnostics.hpp"
#include "jumpflow/io.hpp"
#include "jumpflow/ns.hpp"

namespace fs = std::filesystem;

namespace jumpflow {

namespace {

std::string stamp_path(const std::string& out_dir) { return (fs::path(out_dir) / "done.stamp").string(); }

// retain force rows up to and including time t (text level, per body file)
void trim_forces_csv(const std::string& path, double tmax, std::vector<std::string>& kept) {
    kept.clear();
    std::ifstream in(path);
    if (!in) return;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            first = false;
            continue; // header rewritten by the writer
        }
        if (line.empty()) continue;
        const double t = std::atof(line.substr(0, line.find(',')).c_str());
        if (t <= tmax + 1e-12) kept.push_back(line);
    }
}

} // namespace

bool flow_run_complete(const RunConfig& cfg, const std::string& out_dir) {
    std::ifstream in(stamp_path(out_dir));
    if (!in) return false;
    uint64_t h = 0;
    in >> h;
    return h == config_hash(cfg);
}

void run_flow_to_dir(const RunConfig& cfg, const std::string& out_dir, const RunOptions& opt) {
    fs::create_directories(out_dir);
    const FlowCase fc = to_flow_case(cfg);
    const uint64_t hash = config_hash(cfg);
    NsSolver solver(fc);

    const std::string ckpt = (fs::path(out_dir) / "checkpoint.jfck").string();
    const int nbody = static_cast<int>(cfg.bodies.size());
    std::vector<std::vector<std::string>> retained(nbody);

    std::string resume_from = opt.restart_file;
    if (resume_from.empty() && opt.auto_resume && fs::exists(ckpt)) resume_from = ckpt;
    if (!resume_from.empty()) {
        FlowState s = load_checkpoint(resume_from, hash);
        if (s.psi.m() != fc.grid.m || s.psi.n() != fc.grid.n)
            throw ConfigError("checkpoint grid does not match the configuration");
        for (int b = 0; b < nbody; ++b)
            trim_forces_csv((fs::path(out_dir) / ("forces_body" + std::to_string(b) + ".csv")).string(),
                            s.t, retained[b]);
        solver.state() = std::move(s);
    }

    std::vector<ControlBox> boxes;
    for (const auto& b : cfg.bodies) boxes.push_back(default_control_box(b, fc.grid, cfg.box_inflate));
    std::vector<std::vector<ForceSample>> forces(nbody);
    std::vector<std::vector<double>> displacement(nbody);

    StreaklineTracer tracer(cfg.seeds, cfg.release_every);
    const std::string streak_path = (fs::path(out_dir) / "streaklines.csv").string();
    bool streak_header = !(opt.auto_resume && fs::exists(streak_path) && !resume_from.empty());

    auto flush_forces = [&]() {
        for (int b = 0; b < nbody; ++b) {
            const std::string path =
                (fs::path(out_dir) / ("forces_body" + std::to_string(b) + ".csv")).string();
            std::ofstream out(path, std::ios::trunc);
            if (!out) throw IoError("cannot open " + path);
            out << "t,cd,cl,displacement\n";
            for (const auto& row : retained[b]) out << row << "\n";
            char buf[160];
            for (size_t k = 0; k < forces[b].size(); ++k) {
                std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g\n", forces[b][k].t,
                              forces[b][k].cd, forces[b][k].cl, displacement[b][k]);
                out << buf;
            }
        }
    };

    const int snap_every = opt.snapshots_every_override >= 0 ? opt.snapshots_every_override
                                                             : cfg.snapshot_every;
    const long total_steps = std::lround(fc.t_end / fc.dt);
    while (solver.state().step < total_steps) {
        solver.advance();
        const FlowState& s = solver.state();

        if (cfg.forces_every > 0 && s.step % cfg.forces_every == 0 && nbody > 0) {
            for (int b = 0; b < nbody; ++b) {
                forces[b].push_back(force_coefficients(fc.grid, solver.classification(), s,
                                                       solver.prev_u(), solver.prev_v(), fc.dt,
                                                       boxes[b], fc.re));
                displacement[b].push_back(cfg.bodies[b].motion.displacement(s.t));
            }
        }
        if (cfg.streaklines) tracer.advance(fc.grid, fc.bodies, s.t - fc.dt, fc.dt, s.u, s.v);
        if (snap_every > 0 && s.step % snap_every == 0) {
            char name[64];
            std::snprintf(name, sizeof name, "snap_%08ld.vtk", s.step);
            write_vtk((fs::path(out_dir) / name).string(), fc.grid, s);
            if (cfg.streaklines) {
                std::vector<StreakRow> rows;
                for (const auto& tr : tracer.tracers())
                    if (!tr.retired) rows.push_back({tr.id, s.t, tr.x, tr.y});
                append_streaklines_csv(streak_path, rows, streak_header);
                streak_header = false;
            }
        }
        if (cfg.checkpoint_every > 0 && s.step % cfg.checkpoint_every == 0) {
            flush_forces();
            save_checkpoint(ckpt, s, hash);
        }
        if (opt.progress_every > 0 && s.step % opt.progress_every == 0) {
            std::printf("step %ld/%ld  t=%.3f  zeta_iters=%d psi_iters=%d", s.step, total_steps,
                        s.t, solver.last_zeta_iterations(), solver.last_psi_iterations());
            if (nbody > 0 && !forces[0].empty())
                std::printf("  cd=%.4f cl=%.4f", forces[0].back().cd, forces[0].back().cl);
            std::printf("\n");
            std::fflush(stdout);
        }
    }
    flush_forces();
    save_checkpoint(ckpt, solver.state(), hash);
    write_vtk((fs::path(out_dir) / "final.vtk").string(), fc.grid, solver.state());
    std::ofstream stamp(stamp_path(out_dir), std::ios::trunc);
    stamp << hash << "\n";
}

} // namespace jumpflow
