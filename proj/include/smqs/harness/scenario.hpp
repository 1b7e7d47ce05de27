#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smqs/harness/stats.hpp"
#include "smqs/protocol.hpp"
#include "smqs/verification.hpp"

namespace smqs::harness {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "smqs 1.0.0";

enum class Scenario { Honest, IqftAttack, ModifiedHonest, ModifiedAttack, EveDecoy };

struct ScenarioInfo {
  Scenario scenario;
  const char* tag;
  const char* description;
};

std::span<const ScenarioInfo> scenario_catalog();
std::string to_string(Scenario scenario);
/// Throws protocol::InvalidConfig for an unknown tag.
Scenario scenario_from_string(const std::string& tag);

struct ScenarioConfig {
  Scenario scenario = Scenario::Honest;
  protocol::ProtocolConfig protocol;
  int eta = 0;
  int trials = 1;
  std::uint64_t master_seed = 0;
  /// Fixed secrets for every trial; drawn per trial when absent.
  std::optional<std::vector<protocol::SecretString>> secrets;
  /// Fixed fabrication value for the attack scenarios; drawn per state when absent.
  std::optional<int> fake_r;
  std::string output_path;

  void validate() const;
};

/// Independent, reproducible stream for one trial: the engine is seeded
/// with splitmix64(splitmix64(master_seed) ^ trial_index).
RandomStream derive_trial_stream(std::uint64_t master_seed, std::uint64_t trial_index);

struct TrialRecord {
  std::uint64_t index = 0;
  std::vector<std::vector<int>> secrets;
  std::vector<int> expected_sum;
  std::optional<std::vector<int>> sum;   // absent when the run aborted
  std::vector<std::vector<int>> announced;  // R of every participant
  std::vector<std::vector<int>> recovered;  // attack scenarios only
  std::vector<int> fake_r;
  std::size_t decoy_errors = 0;
  std::size_t decoys_checked = 0;
  bool aborted = false;
  bool detected = false;
  std::vector<verification::CheckOutcome> checks;
  bool sum_correct = false;
  bool recovery_success = false;

  bool operator==(const TrialRecord&) const = default;
};

/// Aggregate rates keyed by name: sum_correct_rate, recovery_success_rate,
/// detection_rate, mean_decoy_error_rate, check_pass_rate. Only the rates
/// meaningful for the scenario are present.
using AggregateStats = std::map<std::string, RateEstimate>;

struct OraclePrediction {
  double expected = 0.0;
  double sigma = 0.0;
  double observed = 0.0;
  bool within_4sigma = true;
};

struct ReportDocument {
  ScenarioConfig config;
  std::vector<TrialRecord> trials;
  AggregateStats aggregates;
  std::map<std::string, OraclePrediction> oracle_predictions;
  std::string tool_version = kToolVersion;
  double wall_clock_seconds = 0.0;
  int schema_version = kSchemaVersion;
};

TrialRecord run_trial(const ScenarioConfig& cfg, std::uint64_t trial_index);

/// Runs every trial (in parallel, ordered by index), then aggregates and
/// attaches exact predictions.
ReportDocument run_scenario(const ScenarioConfig& cfg);

/// Exact expected value of each aggregate for `cfg`.
std::map<std::string, double> predicted_rates(const ScenarioConfig& cfg);

}  // namespace smqs::harness
