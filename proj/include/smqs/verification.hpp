#pragma once

// Modified protocol: P1 prepares m + eta shared states, the recipients
// sacrifice eta of them as checking states, and the remaining m carry the
// secrets exactly as in the original protocol.
//
// A check on position p with basis B: every participant applies QFT to its
// qudit of state p and measures it in B; P1 announces first, then the
// others in index order. V1 passes iff the announced values sum to 0 mod d,
// V2 passes iff all announced values are equal.

#include <optional>
#include <span>
#include <vector>

#include "smqs/adversary.hpp"
#include "smqs/protocol.hpp"

namespace smqs::verification {

using protocol::Basis;
using protocol::ProtocolConfig;
using protocol::RoundState;
using protocol::SecretString;

enum class P1Strategy {
  Honest,        // genuine omega states, truthful announcements
  IqftAdaptive,  // fabricated QFT^-1|r> states, announcements tuned to pass V1
};

struct ModifiedConfig {
  ProtocolConfig base;
  int eta = 0;

  void validate() const;
  int total_states() const { return base.m + eta; }
};

struct CheckAssignment {
  int chooser;  // participant index in [1, n)
  std::size_t position;
  Basis basis;

  bool operator==(const CheckAssignment&) const = default;
};

struct CheckOutcome {
  CheckAssignment assignment;
  std::vector<int> announced;  // P1 first
  bool passed;

  bool operator==(const CheckOutcome&) const = default;
};

/// Number of checks owned by each chooser (entry 0 is participant 1). The
/// remainder of eta / (n-1) goes to the lowest-indexed choosers.
std::vector<int> check_shares(int eta, int n);

std::vector<CheckAssignment> select_checks(const ModifiedConfig& cfg, RandomStream& rng);

bool v1_pass(std::span<const int> announced, int d);
bool v2_pass(std::span<const int> announced);
bool check_passes(std::span<const int> announced, Basis basis, int d);

/// Runs one check on `state` and consumes it. Throws std::logic_error if
/// the state was already measured.
CheckOutcome execute_check(RoundState& state, const CheckAssignment& assignment, P1Strategy strategy,
                           RandomStream& rng);

/// Exact probability that a check in `basis` on `state` passes, read off
/// the amplitudes. Under IqftAdaptive P1's announcement is the fixed value
/// execute_check would use.
double check_pass_probability(const RoundState& state, Basis basis, P1Strategy strategy);

struct ModifiedRunReport {
  std::vector<protocol::DecoyCheckResult> decoy_checks;
  std::vector<CheckOutcome> checks;
  bool aborted = false;
  bool detected = false;  // some state check failed
  std::vector<std::size_t> payload_positions;
  std::optional<protocol::AnnouncementLog> log;  // set when the run completes
  std::vector<SecretString> recovered;           // IqftAdaptive runs that went undetected
  bool attack_success = false;
};

/// `plan` supplies r per state for IqftAdaptive (drawn uniformly if absent).
ModifiedRunReport run_modified(const ModifiedConfig& cfg, std::span<const SecretString> secrets,
                               P1Strategy strategy, RandomStream& rng,
                               std::optional<adversary::IqftAttackPlan> plan = std::nullopt);

}  // namespace smqs::verification
