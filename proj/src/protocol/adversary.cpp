#include "smqs/adversary.hpp"

#include <string>

namespace smqs::adversary {

using protocol::Basis;

IqftAttackPlan IqftAttackPlan::uniform(int d, int rounds, RandomStream& rng) {
  IqftAttackPlan plan;
  plan.r_choices.reserve(static_cast<std::size_t>(rounds));
  for (int j = 0; j < rounds; ++j) plan.r_choices.push_back(rng.uniform_int(d));
  return plan;
}

void IqftAttackPlan::validate(int d, int rounds) const {
  if (static_cast<int>(r_choices.size()) != rounds)
    throw protocol::InvalidConfig("attack plan covers " + std::to_string(r_choices.size()) + " rounds, need " +
                                  std::to_string(rounds));
  for (int r : r_choices)
    if (r < 0 || r >= d) throw protocol::InvalidConfig("fake value r=" + std::to_string(r) + " outside [0, d)");
}

Register fake_particle(int d, int r) {
  if (r < 0 || r >= d) throw std::out_of_range("fake_particle: r outside [0, d)");
  return qudit::apply_iqft(Register::basis_state(d, {r}), 0);
}

RoundState fabricate_round(const ProtocolConfig& cfg, int round, int r) {
  std::vector<Register> factors;
  factors.reserve(static_cast<std::size_t>(cfg.n));
  factors.push_back(Register::basis_state(cfg.d, {0}));
  const auto fake = fake_particle(cfg.d, r);
  for (int i = 1; i < cfg.n; ++i) factors.push_back(fake);
  RoundState state(round, Register::product(factors, cfg.max_entries));
  state.origin = protocol::RoundOrigin::Fabricated;
  state.fabrication_value = r;
  return state;
}

int recover_secret_digit(int announced, int r, int d) {
  if (announced < 0 || announced >= d || r < 0 || r >= d)
    throw std::out_of_range("recover_secret_digit: inputs outside [0, d)");
  return ((announced - r) % d + d) % d;
}

AttackReport run_iqft_attack_original(const ProtocolConfig& cfg, std::span<const SecretString> secrets,
                                      const IqftAttackPlan& plan, RandomStream& rng, SumPolicy policy) {
  cfg.validate();
  protocol::validate_secrets(cfg, secrets);
  plan.validate(cfg.d, cfg.m);

  std::vector<RoundState> rounds;
  rounds.reserve(static_cast<std::size_t>(cfg.m));
  for (int j = 0; j < cfg.m; ++j) rounds.push_back(fabricate_round(cfg, j, plan.r_choices[static_cast<std::size_t>(j)]));

  // Decoys are genuine, so the channel check has nothing to find.
  auto decoys = protocol::insert_decoys(cfg, rng);
  std::vector<protocol::DecoyCheckResult> checks;
  for (auto& seq : decoys) checks.push_back(protocol::check_decoys(seq.records, seq.particles, rng));

  auto report = complete_attack(cfg, secrets, rounds, rng, policy);
  report.decoy_checks = std::move(checks);
  return report;
}

AttackReport complete_attack(const ProtocolConfig& cfg, std::span<const SecretString> secrets,
                             std::span<RoundState> rounds, RandomStream& rng, SumPolicy policy) {
  const auto n = static_cast<std::size_t>(cfg.n);
  const std::size_t m = rounds.size();
  std::vector<int> r_values;
  for (const auto& round : rounds) {
    if (!round.fabrication_value) throw std::invalid_argument("complete_attack: round was not fabricated");
    r_values.push_back(*round.fabrication_value);
  }

  std::vector<std::vector<int>> results(n, std::vector<int>(m));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 1; i < n; ++i) {
      auto encoded = protocol::encode_and_measure(std::move(rounds[j]), static_cast<int>(i), secrets[i].digits.at(j), rng);
      results[i][j] = encoded.outcome;
      rounds[j] = std::move(encoded.round);
    }
    // P1 never measures; R1 is chosen classically.
    if (policy == SumPolicy::Honest) {
      const int offset = static_cast<int>((static_cast<long long>(cfg.n - 1) * r_values[j]) % cfg.d);
      results[0][j] = ((secrets[0].digits.at(j) - offset) % cfg.d + cfg.d) % cfg.d;
    } else {
      results[0][j] = rng.uniform_int(cfg.d);
    }
  }

  AttackReport report;
  report.recovered.resize(n);
  report.recovered[0] = secrets[0];
  report.success = true;
  for (std::size_t i = 1; i < n; ++i) {
    auto& digits = report.recovered[i].digits;
    for (std::size_t j = 0; j < m; ++j) digits.push_back(recover_secret_digit(results[i][j], r_values[j], cfg.d));
    report.success = report.success && report.recovered[i] == secrets[i];
  }
  report.log = protocol::announce(std::move(results), cfg.d);
  return report;
}

void EveInterceptResend::intercept(Register& reg, int target, RandomStream& rng) {
  const Basis basis = rng.coin() ? Basis::V2 : Basis::V1;
  auto outcome = qudit::measure(std::move(reg), target, basis, rng);
  reg = std::move(outcome.posterior);
  ++intercepted_;
}

void eve_intercept_resend(std::span<Register> in_transit, RandomStream& rng) {
  EveInterceptResend eve;
  for (auto& particle : in_transit) eve.intercept(particle, 0, rng);
}

double eve_decoy_error_probability(int d) {
  const Basis bases[] = {Basis::V1, Basis::V2};
  double total = 0.0;
  for (Basis prepared : bases) {
    for (int r = 0; r < d; ++r) {
      auto decoy = Register::basis_state(d, {r});
      if (prepared == Basis::V2) decoy.qft_inplace(0);
      for (Basis guess : bases) {
        const auto eve_dist = qudit::outcome_distribution(decoy, 0, guess);
        double mismatch = 0.0;
        for (int x = 0; x < d; ++x) {
          if (eve_dist[static_cast<std::size_t>(x)] == 0.0) continue;
          auto resent = Register::basis_state(d, {x});
          if (guess == Basis::V2) resent.qft_inplace(0);
          const auto check = qudit::outcome_distribution(resent, 0, prepared);
          mismatch += eve_dist[static_cast<std::size_t>(x)] * (1.0 - check[static_cast<std::size_t>(r)]);
        }
        total += mismatch;
      }
    }
  }
  return total / (4.0 * d);
}

}  // namespace smqs::adversary
