#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "smqs/harness/scenario.hpp"

namespace smqs::harness {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Report schema (schema_version 1), top-level object:
//   scenario            scenario tag
//   params              d, n, m, eta, decoys, error_threshold, trials, seed,
//                       secrets (null or list of digit lists), fake_r (null or int)
//   per_trial           one object per trial, ordered by index
//   aggregates          name -> {value, wilson_low, wilson_high, successes, total}
//   oracle_predictions  name -> {expected, sigma, observed, within_4sigma}
//   schema_version      integer
//   tool_version        string
//   wall_clock_seconds  number (the only field that varies between identical runs)
nlohmann::json to_json(const ReportDocument& doc);
ReportDocument report_from_json(const nlohmann::json& j);

nlohmann::json per_trial_json(const ReportDocument& doc);

/// Writes to a sibling temporary file and renames it into place, so a
/// failure never leaves a partial report. Throws IoError.
void write_report(const ReportDocument& doc, const std::filesystem::path& path);
ReportDocument read_report(const std::filesystem::path& path);

}  // namespace smqs::harness
