#pragma once

// Threat models against the original protocol: a malicious P1 who replaces
// the shared states with QFT^-1|r> product states, and an outside
// intercept-resend eavesdropper on the quantum channel.

#include <span>
#include <vector>

#include "smqs/protocol.hpp"

namespace smqs::adversary {

using protocol::ProtocolConfig;
using protocol::RoundState;
using protocol::SecretString;
using qudit::Register;

/// Per-round fabrication values r.
struct IqftAttackPlan {
  std::vector<int> r_choices;

  static IqftAttackPlan uniform(int d, int rounds, RandomStream& rng);
  static IqftAttackPlan constant(int r, int rounds) { return {std::vector<int>(static_cast<std::size_t>(rounds), r)}; }
  void validate(int d, int rounds) const;
};

/// What P1 announces as Sum once the secrets are known.
enum class SumPolicy {
  Honest,     // R1 chosen so the published Sum is still correct
  Arbitrary,  // R1 drawn uniformly; Sum is garbage
};

/// QFT^-1|r> on a single qudit.
Register fake_particle(int d, int r);

/// Round whose qudit 0 (P1's, never used) is |0> and every other qudit is QFT^-1|r>.
RoundState fabricate_round(const ProtocolConfig& cfg, int round, int r);

/// (announced - r) mod d
int recover_secret_digit(int announced, int r, int d);

struct AttackReport {
  protocol::AnnouncementLog log;
  std::vector<protocol::DecoyCheckResult> decoy_checks;
  /// recovered[i] is the string P1 reconstructed for participant i; entry 0 is P1's own secret.
  std::vector<SecretString> recovered;
  bool success = false;
};

/// Encoding and announcement on fabricated rounds: honest participants
/// encode digit j on rounds[j], P1 picks R1 per `policy` and recovers every
/// other secret. Decoy checks are left to the caller.
AttackReport complete_attack(const ProtocolConfig& cfg, std::span<const SecretString> secrets,
                             std::span<RoundState> rounds, RandomStream& rng, SumPolicy policy);

AttackReport run_iqft_attack_original(const ProtocolConfig& cfg, std::span<const SecretString> secrets,
                                      const IqftAttackPlan& plan, RandomStream& rng,
                                      SumPolicy policy = SumPolicy::Honest);

/// Measures each intercepted particle in a uniformly random basis and
/// forwards the collapsed state.
class EveInterceptResend final : public protocol::ChannelTap {
 public:
  void intercept(Register& reg, int target, RandomStream& rng) override;
  std::size_t intercepted() const { return intercepted_; }

 private:
  std::size_t intercepted_ = 0;
};

/// Intercept-resend on a batch of single-qudit particles.
void eve_intercept_resend(std::span<Register> in_transit, RandomStream& rng);

/// Exact probability that one intercepted decoy fails its check, averaged
/// over decoy basis, Eve's basis and decoy value.
double eve_decoy_error_probability(int d);

}  // namespace smqs::adversary
