#include "smqs/verification.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace smqs::verification {

void ModifiedConfig::validate() const {
  base.validate();
  if (eta < 0) throw protocol::InvalidConfig("eta must be >= 0");
}

std::vector<int> check_shares(int eta, int n) {
  const int choosers = n - 1;
  std::vector<int> shares(static_cast<std::size_t>(choosers), eta / choosers);
  for (int i = 0; i < eta % choosers; ++i) ++shares[static_cast<std::size_t>(i)];
  return shares;
}

std::vector<CheckAssignment> select_checks(const ModifiedConfig& cfg, RandomStream& rng) {
  cfg.validate();
  const auto total = static_cast<std::size_t>(cfg.total_states());
  const auto eta = static_cast<std::size_t>(cfg.eta);
  std::vector<std::size_t> slots(total);
  std::iota(slots.begin(), slots.end(), std::size_t{0});
  for (std::size_t i = 0; i < eta; ++i) std::swap(slots[i], slots[i + rng.uniform_below(total - i)]);

  std::vector<CheckAssignment> out;
  out.reserve(eta);
  const auto shares = check_shares(cfg.eta, cfg.base.n);
  std::size_t next = 0;
  for (std::size_t c = 0; c < shares.size(); ++c) {
    for (int k = 0; k < shares[c]; ++k) {
      const Basis basis = rng.coin() ? Basis::V2 : Basis::V1;
      out.push_back({static_cast<int>(c) + 1, slots[next++], basis});
    }
  }
  return out;
}

bool v1_pass(std::span<const int> announced, int d) {
  long long total = 0;
  for (int v : announced) total += v;
  return total % d == 0;
}

bool v2_pass(std::span<const int> announced) {
  return std::adjacent_find(announced.begin(), announced.end(), std::not_equal_to<>()) == announced.end();
}

bool check_passes(std::span<const int> announced, Basis basis, int d) {
  return basis == Basis::V1 ? v1_pass(announced, d) : v2_pass(announced);
}

namespace {

// P1's announcement when cheating: -(n-1)r mod d makes V1 sums vanish;
// for V2 no value helps, so it announces r.
int adaptive_announcement(const RoundState& state, Basis basis) {
  if (!state.fabrication_value)
    throw std::invalid_argument("adaptive announcement needs a fabricated state");
  const int d = state.reg.level();
  const int n = state.reg.qudit_count();
  const int r = *state.fabrication_value;
  if (basis == Basis::V2) return r;
  const long long offset = static_cast<long long>(n - 1) * r % d;
  return static_cast<int>((d - offset) % d);
}

}  // namespace

CheckOutcome execute_check(RoundState& state, const CheckAssignment& assignment, P1Strategy strategy,
                           RandomStream& rng) {
  if (state.any_measured())
    throw std::logic_error("execute_check: state " + std::to_string(assignment.position) + " already consumed");
  const int n = state.reg.qudit_count();
  CheckOutcome outcome{assignment, {}, false};
  outcome.announced.reserve(static_cast<std::size_t>(n));
  // QFT followed by a V2 measurement is a V1 measurement followed by QFT. The
  // trailing QFTs act on already measured qudits, so they can wait until every
  // outcome is drawn; that keeps the collapsed qudits pinned meanwhile.
  const bool fourier = assignment.basis == Basis::V2;
  std::vector<int> pending;
  for (int i = 0; i < n; ++i) {
    if (i == 0 && strategy == P1Strategy::IqftAdaptive) {
      outcome.announced.push_back(adaptive_announcement(state, assignment.basis));
    } else {
      if (fourier) {
        pending.push_back(i);
      } else {
        state.reg.qft_inplace(i);
      }
      auto measured = qudit::measure(std::move(state.reg), i, Basis::V1, rng);
      state.reg = std::move(measured.posterior);
      outcome.announced.push_back(measured.value);
    }
    state.measured[static_cast<std::size_t>(i)] = true;
  }
  for (int i : pending) state.reg.qft_inplace(i);
  outcome.passed = check_passes(outcome.announced, assignment.basis, state.reg.level());
  return outcome;
}

double check_pass_probability(const RoundState& state, Basis basis, P1Strategy strategy) {
  if (state.any_measured()) throw std::logic_error("check_pass_probability: state already consumed");
  const int d = state.reg.level();
  const int n = state.reg.qudit_count();
  auto reg = state.reg;
  for (int i = 0; i < n; ++i) reg.qft_inplace(i);
  // Measuring in V2 is a computational measurement after IQFT.
  if (basis == Basis::V2)
    for (int i = 0; i < n; ++i) reg.iqft_inplace(i);

  const bool adaptive = strategy == P1Strategy::IqftAdaptive;
  const int fixed = adaptive ? adaptive_announcement(state, basis) : 0;
  std::vector<int> digits(static_cast<std::size_t>(n));
  double pass = 0.0;
  const auto amps = reg.amplitudes();
  for (std::size_t index = 0; index < amps.size(); ++index) {
    const double p = std::norm(amps[index]);
    if (p == 0.0) continue;
    std::size_t rest = index;
    for (int q = n - 1; q >= 0; --q) {
      digits[static_cast<std::size_t>(q)] = static_cast<int>(rest % static_cast<std::size_t>(d));
      rest /= static_cast<std::size_t>(d);
    }
    // P1's own outcome is marginalized out when it announces a fixed value.
    if (adaptive) digits[0] = fixed;
    if (check_passes(digits, basis, d)) pass += p;
  }
  return pass;
}

ModifiedRunReport run_modified(const ModifiedConfig& cfg, std::span<const SecretString> secrets,
                               P1Strategy strategy, RandomStream& rng,
                               std::optional<adversary::IqftAttackPlan> plan) {
  cfg.validate();
  const auto& base = cfg.base;
  protocol::validate_secrets(base, secrets);
  const int total = cfg.total_states();

  std::vector<RoundState> states;
  if (strategy == P1Strategy::Honest) {
    states = protocol::prepare_rounds(base, total);
  } else {
    if (!plan) plan = adversary::IqftAttackPlan::uniform(base.d, total, rng);
    plan->validate(base.d, total);
    states.reserve(static_cast<std::size_t>(total));
    for (int p = 0; p < total; ++p)
      states.push_back(adversary::fabricate_round(base, p, plan->r_choices[static_cast<std::size_t>(p)]));
  }

  ModifiedRunReport report;
  auto decoys = protocol::insert_decoys(base, total, rng);
  for (auto& seq : decoys) report.decoy_checks.push_back(protocol::check_decoys(seq.records, seq.particles, rng));
  if (protocol::decoy_check_fails(base, report.decoy_checks)) {
    report.aborted = true;
    return report;
  }

  const auto assignments = select_checks(cfg, rng);
  std::vector<bool> is_check(static_cast<std::size_t>(total), false);
  for (const auto& a : assignments) {
    report.checks.push_back(execute_check(states[a.position], a, strategy, rng));
    is_check[a.position] = true;
  }
  report.detected = std::any_of(report.checks.begin(), report.checks.end(),
                                [](const CheckOutcome& c) { return !c.passed; });
  if (report.detected) {
    report.aborted = true;
    return report;
  }

  std::vector<RoundState> payload;
  payload.reserve(static_cast<std::size_t>(base.m));
  for (int p = 0; p < total; ++p) {
    if (is_check[static_cast<std::size_t>(p)]) continue;
    report.payload_positions.push_back(static_cast<std::size_t>(p));
    payload.push_back(std::move(states[static_cast<std::size_t>(p)]));
  }

  if (strategy == P1Strategy::Honest) {
    report.log = protocol::encode_and_announce(base, secrets, payload, rng);
  } else {
    auto attack = adversary::complete_attack(base, secrets, payload, rng, adversary::SumPolicy::Honest);
    report.log = std::move(attack.log);
    report.recovered = std::move(attack.recovered);
    report.attack_success = attack.success;
  }
  return report;
}

}  // namespace smqs::verification
