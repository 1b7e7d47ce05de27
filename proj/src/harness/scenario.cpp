#include "smqs/harness/scenario.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>

#include "smqs/adversary.hpp"

namespace smqs::harness {

namespace {

constexpr ScenarioInfo kCatalog[] = {
    {Scenario::Honest, "honest", "original protocol, all participants honest"},
    {Scenario::IqftAttack, "iqft-attack", "original protocol, P1 sends QFT^-1|r> and recovers every secret"},
    {Scenario::ModifiedHonest, "modified-honest", "modified protocol with eta checking states, all honest"},
    {Scenario::ModifiedAttack, "modified-attack",
     "modified protocol against the inverse-QFT attack with an adaptive announcer"},
    {Scenario::EveDecoy, "eve-decoy", "original protocol with an intercept-resend eavesdropper on the channel"},
};

bool is_modified(Scenario s) { return s == Scenario::ModifiedHonest || s == Scenario::ModifiedAttack; }

std::vector<protocol::SecretString> draw_secrets(const protocol::ProtocolConfig& p, RandomStream& rng) {
  std::vector<protocol::SecretString> secrets(static_cast<std::size_t>(p.n));
  for (auto& s : secrets)
    for (int j = 0; j < p.m; ++j) s.digits.push_back(rng.uniform_int(p.d));
  return secrets;
}

void fill_from_log(TrialRecord& rec, const protocol::AnnouncementLog& log) {
  rec.sum = log.sum;
  rec.announced = log.results;
  rec.sum_correct = log.sum == rec.expected_sum;
}

void tally_decoys(TrialRecord& rec, std::span<const protocol::DecoyCheckResult> checks) {
  for (const auto& c : checks) {
    rec.decoy_errors += c.errors;
    rec.decoys_checked += c.checked;
  }
}

// Largest error count a recipient may see without aborting.
std::size_t tolerated_errors(std::size_t decoys, double threshold) {
  std::size_t e = 0;
  while (e < decoys && static_cast<double>(e + 1) / static_cast<double>(decoys) <= threshold) ++e;
  return e;
}

}  // namespace

std::span<const ScenarioInfo> scenario_catalog() { return kCatalog; }

std::string to_string(Scenario scenario) {
  for (const auto& info : kCatalog)
    if (info.scenario == scenario) return info.tag;
  return "unknown";
}

Scenario scenario_from_string(const std::string& tag) {
  for (const auto& info : kCatalog)
    if (tag == info.tag) return info.scenario;
  throw protocol::InvalidConfig("unknown scenario '" + tag + "'");
}

void ScenarioConfig::validate() const {
  protocol.validate();
  if (trials < 1) throw protocol::InvalidConfig("trials must be >= 1");
  if (eta < 0) throw protocol::InvalidConfig("eta must be >= 0");
  if (secrets) protocol::validate_secrets(protocol, *secrets);
  if (fake_r && (*fake_r < 0 || *fake_r >= protocol.d))
    throw protocol::InvalidConfig("fake-r must lie in [0, d)");
}

RandomStream derive_trial_stream(std::uint64_t master_seed, std::uint64_t trial_index) {
  return RandomStream(splitmix64(splitmix64(master_seed) ^ trial_index));
}

TrialRecord run_trial(const ScenarioConfig& cfg, std::uint64_t trial_index) {
  const auto& p = cfg.protocol;
  auto rng = derive_trial_stream(cfg.master_seed, trial_index);
  const auto secrets = cfg.secrets ? *cfg.secrets : draw_secrets(p, rng);

  TrialRecord rec;
  rec.index = trial_index;
  for (const auto& s : secrets) rec.secrets.push_back(s.digits);
  rec.expected_sum = protocol::expected_sum(secrets, p.d);

  switch (cfg.scenario) {
    case Scenario::Honest:
    case Scenario::EveDecoy: {
      adversary::EveInterceptResend eve;
      auto* tap = cfg.scenario == Scenario::EveDecoy ? &eve : nullptr;
      const auto run = protocol::run_original(p, secrets, rng, tap);
      tally_decoys(rec, run.decoy_checks);
      rec.aborted = run.aborted;
      rec.detected = run.aborted;
      if (run.log) fill_from_log(rec, *run.log);
      break;
    }
    case Scenario::IqftAttack: {
      const auto plan = cfg.fake_r ? adversary::IqftAttackPlan::constant(*cfg.fake_r, p.m)
                                   : adversary::IqftAttackPlan::uniform(p.d, p.m, rng);
      const auto report = adversary::run_iqft_attack_original(p, secrets, plan, rng);
      rec.fake_r = plan.r_choices;
      tally_decoys(rec, report.decoy_checks);
      fill_from_log(rec, report.log);
      for (const auto& s : report.recovered) rec.recovered.push_back(s.digits);
      rec.recovery_success = report.success;
      break;
    }
    case Scenario::ModifiedHonest:
    case Scenario::ModifiedAttack: {
      const verification::ModifiedConfig mcfg{p, cfg.eta};
      const bool attack = cfg.scenario == Scenario::ModifiedAttack;
      std::optional<adversary::IqftAttackPlan> plan;
      if (attack)
        plan = cfg.fake_r ? adversary::IqftAttackPlan::constant(*cfg.fake_r, mcfg.total_states())
                          : adversary::IqftAttackPlan::uniform(p.d, mcfg.total_states(), rng);
      const auto strategy = attack ? verification::P1Strategy::IqftAdaptive : verification::P1Strategy::Honest;
      const auto report = verification::run_modified(mcfg, secrets, strategy, rng, plan);
      if (plan) rec.fake_r = plan->r_choices;
      tally_decoys(rec, report.decoy_checks);
      rec.aborted = report.aborted;
      rec.detected = report.detected;
      rec.checks = report.checks;
      if (report.log) fill_from_log(rec, *report.log);
      for (const auto& s : report.recovered) rec.recovered.push_back(s.digits);
      rec.recovery_success = report.attack_success;
      break;
    }
  }
  return rec;
}

std::map<std::string, double> predicted_rates(const ScenarioConfig& cfg) {
  const auto& p = cfg.protocol;
  std::map<std::string, double> out;
  out["mean_decoy_error_rate"] = 0.0;
  switch (cfg.scenario) {
    case Scenario::Honest:
      out["sum_correct_rate"] = 1.0;
      break;
    case Scenario::IqftAttack:
      out["sum_correct_rate"] = 1.0;
      out["recovery_success_rate"] = 1.0;
      break;
    case Scenario::ModifiedHonest: {
      out["sum_correct_rate"] = 1.0;
      if (cfg.eta > 0) {
        const protocol::RoundState omega(0, qudit::Register::omega_state(p.d, p.n, p.max_entries));
        out["check_pass_rate"] =
            0.5 * (verification::check_pass_probability(omega, qudit::Basis::V1, verification::P1Strategy::Honest) +
                   verification::check_pass_probability(omega, qudit::Basis::V2, verification::P1Strategy::Honest));
      }
      break;
    }
    case Scenario::ModifiedAttack: {
      std::vector<int> rs;
      if (cfg.fake_r) {
        rs.push_back(*cfg.fake_r);
      } else {
        for (int r = 0; r < p.d; ++r) rs.push_back(r);
      }
      double per_check = 0.0;
      for (int r : rs) {
        const auto fake = adversary::fabricate_round(p, 0, r);
        for (qudit::Basis b : {qudit::Basis::V1, qudit::Basis::V2})
          per_check += verification::check_pass_probability(fake, b, verification::P1Strategy::IqftAdaptive);
      }
      per_check /= 2.0 * static_cast<double>(rs.size());
      const double undetected = std::pow(per_check, cfg.eta);
      out["detection_rate"] = 1.0 - undetected;
      out["recovery_success_rate"] = undetected;
      if (cfg.eta > 0) out["check_pass_rate"] = per_check;
      break;
    }
    case Scenario::EveDecoy: {
      const double q = adversary::eve_decoy_error_probability(p.d);
      const auto decoys = static_cast<std::size_t>(p.decoy_count);
      const double keep = decoys == 0 ? 1.0 : binomial_cdf(tolerated_errors(decoys, p.error_threshold), decoys, q);
      out["mean_decoy_error_rate"] = q;
      out["detection_rate"] = 1.0 - std::pow(keep, p.n - 1);
      break;
    }
  }
  return out;
}

ReportDocument run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  if (is_modified(cfg.scenario)) verification::ModifiedConfig{cfg.protocol, cfg.eta}.validate();
  const auto start = std::chrono::steady_clock::now();

  ReportDocument doc;
  doc.config = cfg;
  doc.trials.resize(static_cast<std::size_t>(cfg.trials));
  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(cfg.trials); ++t) {
    try {
      doc.trials[static_cast<std::size_t>(t)] = run_trial(cfg, static_cast<std::uint64_t>(t));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::size_t sum_ok = 0, recovered = 0, detected = 0, decoy_errors = 0, decoys = 0, checks = 0, checks_ok = 0;
  for (const auto& rec : doc.trials) {
    sum_ok += rec.sum_correct ? 1 : 0;
    recovered += rec.recovery_success ? 1 : 0;
    detected += rec.detected ? 1 : 0;
    decoy_errors += rec.decoy_errors;
    decoys += rec.decoys_checked;
    checks += rec.checks.size();
    for (const auto& c : rec.checks) checks_ok += c.passed ? 1 : 0;
  }
  const auto trials = static_cast<std::size_t>(cfg.trials);
  const auto s = cfg.scenario;
  doc.aggregates["mean_decoy_error_rate"] = wilson(decoy_errors, decoys);
  if (s != Scenario::EveDecoy && s != Scenario::ModifiedAttack) doc.aggregates["sum_correct_rate"] = wilson(sum_ok, trials);
  if (s == Scenario::IqftAttack || s == Scenario::ModifiedAttack)
    doc.aggregates["recovery_success_rate"] = wilson(recovered, trials);
  if (s == Scenario::ModifiedAttack || s == Scenario::EveDecoy) doc.aggregates["detection_rate"] = wilson(detected, trials);
  if (is_modified(s) && cfg.eta > 0) doc.aggregates["check_pass_rate"] = wilson(checks_ok, checks);

  for (const auto& [name, expected] : predicted_rates(cfg)) {
    const auto it = doc.aggregates.find(name);
    if (it == doc.aggregates.end()) continue;
    OraclePrediction pred;
    pred.expected = expected;
    pred.observed = it->second.value;
    pred.sigma = proportion_sigma(expected, it->second.total);
    pred.within_4sigma = within_band(pred.observed, expected, pred.sigma);
    doc.oracle_predictions[name] = pred;
  }

  doc.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return doc;
}

}  // namespace smqs::harness
