#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jumpflow/diagnostics.hpp"
#include "jumpflow/field.hpp"
#include "jumpflow/geometry.hpp"
#include "jumpflow/ns.hpp"

namespace jumpflow {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Legacy VTK structured-points ASCII snapshot with ψ, ζ, u, v point arrays.
void write_vtk(const std::string& path, const Grid2D& grid, const FlowState& s);

/// CSV writers (comma separated, single header row).
void write_forces_csv(const std::string& path,
                      const std::vector<ForceSample>& samples,
                      const std::vector<double>& displacement);
void write_spectrum_csv(const std::string& path,
                        const std::vector<std::pair<double, double>>& spectrum);
struct StreakRow {
    int id;
    double t, x, y;
};
void append_streaklines_csv(const std::string& path, const std::vector<StreakRow>& rows,
                            bool header);
struct ConvergenceRow {
    int n;
    double max_error;
    double roc; // NaN for the first row
};
void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows);

/// Read a forces CSV back (t and C_L columns) for post-processing.
void read_forces_csv(const std::string& path, std::vector<double>& t, std::vector<double>& cl,
                     std::vector<double>* cd = nullptr);

/// Versioned binary checkpoint of a FlowState, keyed by the config hash.
void save_checkpoint(const std::string& path, const FlowState& s, uint64_t config_hash);
FlowState load_checkpoint(const std::string& path, uint64_t expected_hash);

} // namespace jumpflow
