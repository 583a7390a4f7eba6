#pragma once

#include <string>

#include "jumpflow/config.hpp"

namespace jumpflow {

struct RunOptions {
    int snapshots_every_override = -1; // <0: use config
    std::string restart_file;          // explicit checkpoint to resume from
    bool auto_resume = false;          // resume from <out_dir>/checkpoint.jfck when present
    int progress_every = 500;          // steps between progress lines; 0 = quiet
};

/// March a flow case to t_end, writing forces CSVs (one per body), optional
/// VTK snapshots, streakline positions and periodic checkpoints into out_dir.
void run_flow_to_dir(const RunConfig& cfg, const std::string& out_dir, const RunOptions& opt = {});

/// True when <out_dir>/done.stamp matches this configuration's hash.
bool flow_run_complete(const RunConfig& cfg, const std::string& out_dir);

} // namespace jumpflow
