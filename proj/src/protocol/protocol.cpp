#include "smqs/protocol.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace smqs::protocol {

void ProtocolConfig::validate() const {
  if (d < 2) throw InvalidConfig("d must be >= 2 (got " + std::to_string(d) + ")");
  if (n < 2) throw InvalidConfig("n must be >= 2 (got " + std::to_string(n) + ")");
  if (m < 1) throw InvalidConfig("m must be >= 1 (got " + std::to_string(m) + ")");
  if (decoy_count < 0) throw InvalidConfig("decoy count must be >= 0");
  if (!(error_threshold >= 0.0 && error_threshold <= 1.0))
    throw InvalidConfig("error threshold must lie in [0, 1]");
  qudit::checked_dimension(d, n, max_entries);
}

void SecretString::validate(int d, int m) const {
  if (static_cast<int>(digits.size()) != m)
    throw InvalidConfig("secret string has " + std::to_string(digits.size()) + " digits, expected " +
                        std::to_string(m));
  for (int k : digits)
    if (k < 0 || k >= d) throw InvalidConfig("secret digit " + std::to_string(k) + " outside [0, d)");
}

void validate_secrets(const ProtocolConfig& cfg, std::span<const SecretString> secrets) {
  if (static_cast<int>(secrets.size()) != cfg.n)
    throw InvalidConfig("expected " + std::to_string(cfg.n) + " secret strings, got " +
                        std::to_string(secrets.size()));
  for (const auto& s : secrets) s.validate(cfg.d, cfg.m);
}

std::vector<int> expected_sum(std::span<const SecretString> secrets, int d) {
  std::vector<std::vector<int>> rows;
  rows.reserve(secrets.size());
  for (const auto& s : secrets) rows.push_back(s.digits);
  return compute_sum(rows, d);
}

bool DecoySequence::is_decoy_position(std::size_t position) const {
  return std::ranges::binary_search(records, position, {}, &DecoyRecord::position);
}

bool RoundState::any_measured() const {
  return std::any_of(measured.begin(), measured.end(), [](bool b) { return b; });
}

std::vector<RoundState> prepare_rounds(const ProtocolConfig& cfg) { return prepare_rounds(cfg, cfg.m); }

std::vector<RoundState> prepare_rounds(const ProtocolConfig& cfg, int count) {
  cfg.validate();
  const auto omega = Register::omega_state(cfg.d, cfg.n, cfg.max_entries);
  std::vector<RoundState> rounds;
  rounds.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) rounds.emplace_back(j, omega);
  return rounds;
}

std::vector<DecoySequence> insert_decoys(const ProtocolConfig& cfg, int payload_length,
                                         RandomStream& rng) {
  const auto decoys = static_cast<std::size_t>(cfg.decoy_count);
  const std::size_t length = static_cast<std::size_t>(payload_length) + decoys;
  std::vector<DecoySequence> out;
  out.reserve(static_cast<std::size_t>(cfg.n - 1));
  for (int recipient = 1; recipient < cfg.n; ++recipient) {
    DecoySequence seq;
    seq.length = length;
    // Partial Fisher-Yates: the first `decoys` slots become the decoy positions.
    std::vector<std::size_t> slots(length);
    std::iota(slots.begin(), slots.end(), std::size_t{0});
    for (std::size_t i = 0; i < decoys; ++i) {
      const std::size_t j = i + rng.uniform_below(length - i);
      std::swap(slots[i], slots[j]);
    }
    std::vector<std::size_t> positions(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(decoys));
    std::sort(positions.begin(), positions.end());
    for (std::size_t position : positions) {
      const int value = rng.uniform_int(cfg.d);
      const Basis basis = rng.coin() ? Basis::V2 : Basis::V1;
      auto particle = Register::basis_state(cfg.d, {value});
      if (basis == Basis::V2) particle.qft_inplace(0);
      seq.records.push_back({position, basis, value});
      seq.particles.push_back(std::move(particle));
    }
    out.push_back(std::move(seq));
  }
  return out;
}

DecoyCheckResult check_decoys(std::span<const DecoyRecord> records, std::span<const Register> received,
                              RandomStream& rng) {
  if (records.size() != received.size())
    throw std::invalid_argument("check_decoys: " + std::to_string(records.size()) + " records but " +
                                std::to_string(received.size()) + " particles");
  DecoyCheckResult result;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto outcome = qudit::measure(received[i], 0, records[i].basis, rng);
    ++result.checked;
    if (outcome.value != records[i].value) ++result.errors;
  }
  return result;
}

void transmit(std::vector<RoundState>& rounds, std::vector<DecoySequence>& decoys, ChannelTap* tap,
              RandomStream& rng) {
  if (tap == nullptr) return;
  for (std::size_t r = 0; r < decoys.size(); ++r) {
    auto& seq = decoys[r];
    const int recipient = static_cast<int>(r) + 1;
    std::size_t next_decoy = 0;
    std::size_t next_payload = 0;
    for (std::size_t pos = 0; pos < seq.length; ++pos) {
      if (next_decoy < seq.records.size() && seq.records[next_decoy].position == pos) {
        tap->intercept(seq.particles[next_decoy], 0, rng);
        ++next_decoy;
      } else {
        tap->intercept(rounds.at(next_payload).reg, recipient, rng);
        ++next_payload;
      }
    }
  }
}

int encode_particle(Register& reg, int target, int digit, RandomStream& rng) {
  reg.qft_inplace(target);
  reg.shift_inplace(target, digit);
  auto outcome = qudit::measure(std::move(reg), target, Basis::V1, rng);
  reg = std::move(outcome.posterior);
  return outcome.value;
}

EncodeResult encode_and_measure(RoundState round, int participant, int digit, RandomStream& rng) {
  if (participant < 0 || participant >= round.reg.qudit_count())
    throw std::out_of_range("encode_and_measure: participant index out of range");
  if (round.measured[static_cast<std::size_t>(participant)])
    throw std::logic_error("encode_and_measure: participant " + std::to_string(participant) +
                           " already measured in round " + std::to_string(round.round));
  const int outcome = encode_particle(round.reg, participant, digit, rng);
  round.measured[static_cast<std::size_t>(participant)] = true;
  return {outcome, std::move(round)};
}

std::vector<int> compute_sum(std::span<const std::vector<int>> results, int d) {
  if (results.empty()) return {};
  const std::size_t m = results.front().size();
  std::vector<int> sum(m, 0);
  for (const auto& row : results) {
    if (row.size() != m) throw std::invalid_argument("compute_sum: result lists differ in length");
    for (std::size_t j = 0; j < m; ++j) {
      if (row[j] < 0 || row[j] >= d) throw std::out_of_range("compute_sum: entry outside [0, d)");
      sum[j] = (sum[j] + row[j]) % d;
    }
  }
  return sum;
}

AnnouncementLog announce(std::vector<std::vector<int>> results, int d) {
  AnnouncementLog log;
  for (std::size_t i = 1; i < results.size(); ++i)
    log.entries.push_back({Announcement::Kind::Result, static_cast<int>(i), 0, results[i]});
  log.sum = compute_sum(results, d);
  log.entries.push_back({Announcement::Kind::Sum, 0, -1, log.sum});
  log.results = std::move(results);
  return log;
}

AnnouncementLog encode_and_announce(const ProtocolConfig& cfg, std::span<const SecretString> secrets,
                                    std::span<RoundState> rounds, RandomStream& rng) {
  const auto n = static_cast<std::size_t>(cfg.n);
  std::vector<std::vector<int>> results(n, std::vector<int>(rounds.size()));
  for (std::size_t j = 0; j < rounds.size(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      auto encoded = encode_and_measure(std::move(rounds[j]), static_cast<int>(i), secrets[i].digits.at(j), rng);
      results[i][j] = encoded.outcome;
      rounds[j] = std::move(encoded.round);
    }
  }
  return announce(std::move(results), cfg.d);
}

bool decoy_check_fails(const ProtocolConfig& cfg, std::span<const DecoyCheckResult> checks) {
  return std::any_of(checks.begin(), checks.end(),
                     [&](const DecoyCheckResult& c) { return c.error_rate() > cfg.error_threshold; });
}

OriginalRun run_original(const ProtocolConfig& cfg, std::span<const SecretString> secrets,
                         RandomStream& rng, ChannelTap* tap) {
  cfg.validate();
  validate_secrets(cfg, secrets);

  auto rounds = prepare_rounds(cfg);
  auto decoys = insert_decoys(cfg, rng);
  transmit(rounds, decoys, tap, rng);

  OriginalRun run;
  for (auto& seq : decoys) run.decoy_checks.push_back(check_decoys(seq.records, seq.particles, rng));
  if (decoy_check_fails(cfg, run.decoy_checks)) {
    run.aborted = true;
    return run;
  }

  run.log = encode_and_announce(cfg, secrets, rounds, rng);
  return run;
}

AnnouncementLog run_original_honest(const ProtocolConfig& cfg, std::span<const SecretString> secrets,
                                    RandomStream& rng) {
  auto run = run_original(cfg, secrets, rng);
  if (run.aborted) throw ProtocolAborted("decoy error rate exceeded the threshold");
  return std::move(*run.log);
}

}  // namespace smqs::protocol
