#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jumpflow/ns.hpp"
#include "jumpflow/parabolic.hpp"

namespace jumpflow {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Run description parsed from the plain-text key/value configuration (see
/// docs in the repository for the schema).
struct RunConfig {
    std::string case_kind = "flow"; // flow | parabolic

    // [grid]
    double x0 = -5.0, xf = 25.0, y0 = -5.0, yf = 5.0;
    int m = 601, n = 201;

    // [physics]
    double re = 100.0;
    double u0 = 1.0;
    double nu = 1.0 / 200.0; // parabolic
    double kx = 2.0, ky = 2.0;

    // [numerics]
    double dt = 5e-3;
    double t_end = 150.0;
    int korder = 2;
    double solver_tol = 1e-13;
    int solver_maxiter = 0;
    bool fixed_point_sweep = false;
    int threads = 1;

    // [output]
    std::string out_dir = "out";
    int snapshot_every = 0;   // steps; 0 = off
    int forces_every = 5;     // steps
    int checkpoint_every = 0; // steps; 0 = off

    // [forces]
    double box_inflate = 1.5;

    // [streaklines]
    bool streaklines = false;
    double release_every = 0.5;
    std::vector<Point> seeds;

    std::vector<Shape> bodies;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& c);
/// FNV-1a hash of the canonical serialisation (checkpoint compatibility key).
uint64_t config_hash(const RunConfig& c);

FlowCase to_flow_case(const RunConfig& c);
ParabolicCase to_parabolic_case(const RunConfig& c, int n_override = 0);

} // namespace jumpflow
