#pragma once

// The original summation protocol: n participants, participant 0 (P1)
// prepares the shared states and distributes qudit i of every round to
// participant i, with decoy particles interleaved into each transmitted
// sequence. Participant indices are 0-based throughout; P_i in the usual
// 1-based notation is participant i-1.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "smqs/qudit.hpp"
#include "smqs/random.hpp"

namespace smqs::protocol {

using qudit::Basis;
using qudit::Register;

class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by run_original_honest when a decoy check exceeds the threshold.
class ProtocolAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProtocolConfig {
  int d = 10;
  int n = 3;
  int m = 1;
  int decoy_count = 16;
  double error_threshold = 0.0;
  std::uint64_t seed = 0;
  std::size_t max_entries = qudit::kDefaultMaxEntries;

  /// Throws InvalidConfig, or qudit::DimensionCapExceeded when d^n is too large.
  void validate() const;
};

struct SecretString {
  std::vector<int> digits;

  void validate(int d, int m) const;
  bool operator==(const SecretString&) const = default;
};

void validate_secrets(const ProtocolConfig& cfg, std::span<const SecretString> secrets);

/// Element-wise sum of the secrets mod d.
std::vector<int> expected_sum(std::span<const SecretString> secrets, int d);

struct DecoyRecord {
  std::size_t position;  // index within the transmitted sequence
  Basis basis;
  int value;
};

/// Decoys interleaved into one recipient's sequence. `particles[i]` is the
/// single-qudit decoy described by `records[i]`; records are sorted by position.
struct DecoySequence {
  std::size_t length = 0;  // payload + decoys
  std::vector<Register> particles;
  std::vector<DecoyRecord> records;

  bool is_decoy_position(std::size_t position) const;
};

/// Where a round's register came from.
enum class RoundOrigin { Genuine, Fabricated };

/// One shared state: qudit i is held by participant i.
struct RoundState {
  int round = 0;
  Register reg;
  std::vector<bool> measured;
  RoundOrigin origin = RoundOrigin::Genuine;
  /// Value r behind the fabricated QFT^-1|r> particles.
  std::optional<int> fabrication_value;

  explicit RoundState(int index, Register state)
      : round(index), reg(std::move(state)), measured(static_cast<std::size_t>(reg.qudit_count()), false) {}

  bool any_measured() const;
};

std::vector<RoundState> prepare_rounds(const ProtocolConfig& cfg);
/// `count` independent omega states (count = m for the original protocol).
std::vector<RoundState> prepare_rounds(const ProtocolConfig& cfg, int count);

/// One decoy sequence per recipient (participants 1..n-1) for `payload_length` payload particles.
std::vector<DecoySequence> insert_decoys(const ProtocolConfig& cfg, int payload_length,
                                         RandomStream& rng);
inline std::vector<DecoySequence> insert_decoys(const ProtocolConfig& cfg, RandomStream& rng) {
  return insert_decoys(cfg, cfg.m, rng);
}

struct DecoyCheckResult {
  std::size_t errors = 0;
  std::size_t checked = 0;

  double error_rate() const {
    return checked == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(checked);
  }
};

/// Measures every decoy in its preparation basis and counts mismatches.
DecoyCheckResult check_decoys(std::span<const DecoyRecord> records, std::span<const Register> received,
                              RandomStream& rng);

/// Something sitting on the quantum channel from P1 to the recipients.
class ChannelTap {
 public:
  virtual ~ChannelTap() = default;
  /// Called once per particle in transit; `target` is the particle's qudit in `reg`.
  virtual void intercept(Register& reg, int target, RandomStream& rng) = 0;
};

/// Sends every recipient its sequence in transmission order, handing each
/// particle to `tap` on the way. A null tap is an ideal channel.
void transmit(std::vector<RoundState>& rounds, std::vector<DecoySequence>& decoys, ChannelTap* tap,
              RandomStream& rng);

/// Applies QFT then U_digit to `target` and measures it in V1.
int encode_particle(Register& reg, int target, int digit, RandomStream& rng);

struct EncodeResult {
  int outcome;
  RoundState round;
};

/// Participant `participant` encodes `digit` on its qudit of `round` and measures it.
EncodeResult encode_and_measure(RoundState round, int participant, int digit, RandomStream& rng);

/// Element-wise sum of the announced results mod d.
std::vector<int> compute_sum(std::span<const std::vector<int>> results, int d);

struct Announcement {
  enum class Kind { Result, Sum };
  Kind kind;
  int sender;    // participant index
  int receiver;  // participant index, or -1 for a broadcast
  std::vector<int> values;
};

struct AnnouncementLog {
  std::vector<Announcement> entries;
  std::vector<std::vector<int>> results;  // results[i] = R of participant i
  std::vector<int> sum;
};

/// Logs R_i -> P1 for every i >= 1, then P1's Sum broadcast.
AnnouncementLog announce(std::vector<std::vector<int>> results, int d);

/// Steps 3-4 on already-distributed rounds: rounds[j] carries digit j of
/// every secret; every participant encodes and measures, then results are
/// announced and summed.
AnnouncementLog encode_and_announce(const ProtocolConfig& cfg, std::span<const SecretString> secrets,
                                    std::span<RoundState> rounds, RandomStream& rng);

struct OriginalRun {
  std::vector<DecoyCheckResult> decoy_checks;  // one per recipient
  bool aborted = false;
  std::optional<AnnouncementLog> log;  // absent when aborted
};

bool decoy_check_fails(const ProtocolConfig& cfg, std::span<const DecoyCheckResult> checks);

/// Full run of the original protocol; an optional tap models an eavesdropper.
OriginalRun run_original(const ProtocolConfig& cfg, std::span<const SecretString> secrets,
                         RandomStream& rng, ChannelTap* tap = nullptr);

/// Honest run; throws ProtocolAborted if the decoy check fails.
AnnouncementLog run_original_honest(const ProtocolConfig& cfg, std::span<const SecretString> secrets,
                                    RandomStream& rng);

}  // namespace smqs::protocol
