#pragma once

#include <string>
#include <vector>

#include "cbohf/ensemble.hpp"
#include "cbohf/run_config.hpp"
#include "cbohf/table.hpp"

namespace cbohf {

/// Tables produced by one driver plus convergence bookkeeping.
struct ScanOutput {
  std::vector<Table> tables;
  int points = 0;
  int flagged = 0;  // rows with converged = 0

  const Table& table(const std::string& name) const;
};

/// E_CBO(q) on a q grid for every field, plus a per-field q_min summary.
ScanOutput run_qc_scan(const RunConfig& config);
/// Molecule rotated by phi about an axis through its charge center
/// perpendicular to the polarization; q optimized at every point.
ScanOutput run_angle_scan(const RunConfig& config);
/// Bond length of the scanned molecule varied inside each ensemble.
ScanOutput run_bond_scan(const RunConfig& config);
/// Ensemble and per-molecule energies over the ensemble sizes.
ScanOutput run_size_sweep(const RunConfig& config);
/// One report per field for the first ensemble size.
ScanOutput run_single(const RunConfig& config);

ScanOutput run_scan(const RunConfig& config);

EnsembleSettings ensemble_settings(const RunConfig& config);

/// Writes every table; returns the written paths.
std::vector<std::string> write_output(const ScanOutput& output, const RunConfig& config);

/// 0 when every point converged, 2 otherwise.
int exit_code(const ScanOutput& output);

}  // namespace cbohf
