#pragma once

#include <filesystem>
#include <iosfwd>

#include "cvrsp/config.hpp"

namespace cvrsp {

/// fig1c.csv (fidelity vs Q), fig1d.csv (vs heralding efficiency) and
/// fig1e.csv (vs window width), all `param,target,fidelity`.
void cmd_scan(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// state.json, bloch.json, wigner.csv and wigner.json for the configured
/// conditioning (or a published preset when preset is set). A summary
/// is written to `log`.
void cmd_prepare(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

/// records.csv, recon.json and report.json for a sample-reconstruct-compare
/// round trip on tomo.target.
void cmd_tomo(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

/// Resource state described by the config.
TwoModeState build_resource(const RunConfig& cfg);

}  // namespace cvrsp
