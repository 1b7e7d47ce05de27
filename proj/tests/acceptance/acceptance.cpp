// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails. Expected values are computed here from closed
// forms, not taken from the simulator's own oracle code.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "smqs/adversary.hpp"
#include "smqs/harness/report.hpp"
#include "smqs/harness/scenario.hpp"
#include "smqs/protocol.hpp"
#include "smqs/qudit.hpp"
#include "smqs/verification.hpp"
#include "test_support.hpp"

using namespace smqs;
using harness::Scenario;
using harness::ScenarioConfig;
using qudit::Basis;
using qudit::Register;

namespace {

constexpr double kAmpTol = 1e-9;

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ScenarioConfig make_config(Scenario s, int d, int n, int m, int eta, int trials, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.scenario = s;
  cfg.protocol.d = d;
  cfg.protocol.n = n;
  cfg.protocol.m = m;
  cfg.eta = eta;
  cfg.trials = trials;
  cfg.master_seed = seed;
  return cfg;
}

int pow_int(int base, int exp) {
  int out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

// Every k tuple in [0, d)^n, in lexicographic order.
std::vector<std::vector<int>> all_tuples(int d, int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> t(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < pow_int(d, n); ++i) {
    int rest = i;
    for (int q = n - 1; q >= 0; --q) {
      t[static_cast<std::size_t>(q)] = rest % d;
      rest /= d;
    }
    out.push_back(t);
  }
  return out;
}

Verdict worked_example() {
  Verdict v;
  const auto start = Clock::now();
  auto cfg = make_config(Scenario::IqftAttack, 10, 3, 1, 0, 200, 2024);
  cfg.secrets = std::vector<protocol::SecretString>{{{4}}, {{5}}, {{6}}};
  cfg.fake_r = 2;
  const auto doc = harness::run_scenario(cfg);
  for (const auto& t : doc.trials) {
    const bool ok = t.announced.size() == 3 && t.announced[1] == std::vector<int>{7} &&
                    t.announced[2] == std::vector<int>{8} && t.recovered.size() == 3 &&
                    t.recovered[1] == std::vector<int>{5} && t.recovered[2] == std::vector<int>{6} &&
                    t.recovery_success;
    if (!ok) v.fail("trial " + std::to_string(t.index) + " deviates from R2=7, R3=8, recovered 5 and 6");
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= 1.0) v.fail("took " + std::to_string(elapsed) + " s");
  if (v.pass)
    v.detail = std::to_string(doc.trials.size()) + " trials: R2=7, R3=8, recovered 5 and 6; " +
               std::to_string(elapsed) + " s";
  return v;
}

Verdict encoded_sum_identity() {
  Verdict v;
  const auto start = Clock::now();
  std::size_t states = 0;
  double worst = 0.0;
  for (int d : {2, 3, 5, 7}) {
    for (int n : {2, 3}) {
      for (const auto& ks : all_tuples(d, n)) {
        auto reg = Register::omega_state(d, n);
        for (int i = 0; i < n; ++i) {
          reg.qft_inplace(i);
          reg.shift_inplace(i, ks[static_cast<std::size_t>(i)]);
        }
        const auto expected = testing::encoded_omega_oracle(d, ks);
        worst = std::max(worst, testing::max_amplitude_error(reg.amplitudes(), expected));
        int ksum = 0;
        for (int k : ks) ksum += k;
        const auto amps = reg.amplitudes();
        for (std::size_t idx = 0; idx < amps.size(); ++idx) {
          if (std::abs(amps[idx]) <= kAmpTol) continue;
          std::size_t rest = idx;
          int lsum = 0;
          for (int q = 0; q < n; ++q) {
            lsum += static_cast<int>(rest % static_cast<std::size_t>(d));
            rest /= static_cast<std::size_t>(d);
          }
          if ((lsum - ksum) % d != 0) v.fail("support violates the sum rule at d=" + std::to_string(d));
        }
        ++states;
      }
    }
  }
  const double elapsed = seconds_since(start);
  if (worst > kAmpTol) v.fail("max amplitude error " + std::to_string(worst));
  if (elapsed >= 30.0) v.fail("took " + std::to_string(elapsed) + " s");
  if (v.pass) {
    std::ostringstream os;
    os << states << " encoded states, max amplitude error " << worst << ", " << elapsed << " s";
    v.detail = os.str();
  }
  return v;
}

Verdict fake_state_identity() {
  Verdict v;
  double worst = 0.0;
  std::size_t cases = 0;
  for (int d = 2; d <= 16; ++d) {
    for (int r = 0; r < d; ++r) {
      for (int k = 0; k < d; ++k) {
        auto reg = adversary::fake_particle(d, r);
        reg.qft_inplace(0);
        reg.shift_inplace(0, k);
        std::vector<testing::Amp> expected(static_cast<std::size_t>(d));
        expected[static_cast<std::size_t>((r + k) % d)] = 1.0;
        worst = std::max(worst, testing::max_amplitude_error(reg.amplitudes(), expected));
        ++cases;
      }
    }
  }
  if (worst > kAmpTol) v.fail("max amplitude error " + std::to_string(worst));
  std::ostringstream os;
  os << cases << " (d, r, k) cases up to d=16, max amplitude error " << worst;
  if (v.pass) v.detail = os.str();
  return v;
}

Verdict honest_sum() {
  Verdict v;
  std::size_t trials = 0;
  std::uint64_t seed = 100;
  for (int d : {2, 3, 5, 10}) {
    for (int n : {2, 3, 4}) {
      for (int m : {1, 4, 8}) {
        const auto doc = harness::run_scenario(make_config(Scenario::Honest, d, n, m, 0, 10, seed++));
        for (const auto& t : doc.trials) {
          if (!t.sum_correct || t.aborted)
            v.fail("wrong Sum at d=" + std::to_string(d) + " n=" + std::to_string(n) + " m=" + std::to_string(m));
          ++trials;
        }
      }
    }
  }
  if (v.pass) v.detail = std::to_string(trials) + " randomized trials over 36 configs, all Sums correct";
  return v;
}

Verdict attack_original() {
  Verdict v;
  std::size_t configs = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 500;
  for (int d : {2, 5, 10}) {
    for (int n : {2, 3, 4}) {
      for (int m : {1, 4}) {
        const auto doc = harness::run_scenario(make_config(Scenario::IqftAttack, d, n, m, 0, 100, seed++));
        const auto& rec = doc.aggregates.at("recovery_success_rate");
        const auto& err = doc.aggregates.at("mean_decoy_error_rate");
        if (rec.successes != rec.total || rec.total != 100)
          v.fail("recovery failed at d=" + std::to_string(d) + " n=" + std::to_string(n));
        if (err.successes != 0) v.fail("decoy errors at d=" + std::to_string(d) + " n=" + std::to_string(n));
        ++configs;
        trials += doc.trials.size();
      }
    }
  }
  if (v.pass)
    v.detail = std::to_string(configs) + " configs x 100 trials (" + std::to_string(trials) +
               "): recovery 1.0, decoy error 0";
  return v;
}

Verdict modified_completeness() {
  Verdict v;
  double worst = 0.0;
  for (int d : {2, 3, 5, 10}) {
    for (int n : {2, 3, 4}) {
      protocol::ProtocolConfig cfg;
      cfg.d = d;
      cfg.n = n;
      auto rounds = protocol::prepare_rounds(cfg, 1);
      for (Basis b : {Basis::V1, Basis::V2}) {
        const double p = verification::check_pass_probability(rounds[0], b, verification::P1Strategy::Honest);
        worst = std::max(worst, std::abs(1.0 - p));
      }
    }
  }
  if (worst > kAmpTol) v.fail("exact pass probability off by " + std::to_string(worst));

  std::size_t checks = 0;
  std::size_t failures = 0;
  std::uint64_t seed = 900;
  for (const auto& [d, n] : std::vector<std::pair<int, int>>{{2, 2}, {5, 3}, {10, 4}}) {
    const auto doc = harness::run_scenario(make_config(Scenario::ModifiedHonest, d, n, 1, 12, 300, seed++));
    const auto& rate = doc.aggregates.at("check_pass_rate");
    checks += rate.total;
    failures += rate.total - rate.successes;
    for (const auto& t : doc.trials)
      if (t.detected || !t.sum_correct) v.fail("honest run flagged or wrong Sum");
  }
  if (checks < 10000) v.fail("only " + std::to_string(checks) + " sampled checks");
  if (failures != 0) v.fail(std::to_string(failures) + " sampled checks failed");
  if (v.pass) {
    std::ostringstream os;
    os << "exact pass probability 1 (max deviation " << worst << "); " << checks << " sampled checks, 0 failures";
    v.detail = os.str();
  }
  return v;
}

Verdict modified_soundness() {
  Verdict v;
  double worst_v1 = 0.0;
  double worst_v2 = 0.0;
  for (int d : {2, 3, 5, 7, 10}) {
    for (int n : {2, 3, 4}) {
      protocol::ProtocolConfig cfg;
      cfg.d = d;
      cfg.n = n;
      const double v2_expected = std::pow(static_cast<double>(d), -(n - 1));
      for (int r = 0; r < d; ++r) {
        const auto fake = adversary::fabricate_round(cfg, 0, r);
        const double p1 = verification::check_pass_probability(fake, Basis::V1, verification::P1Strategy::IqftAdaptive);
        const double p2 = verification::check_pass_probability(fake, Basis::V2, verification::P1Strategy::IqftAdaptive);
        worst_v1 = std::max(worst_v1, std::abs(p1 - 1.0));
        worst_v2 = std::max(worst_v2, std::abs(p2 - v2_expected));
      }
    }
  }
  if (worst_v1 > kAmpTol) v.fail("V1 pass probability off by " + std::to_string(worst_v1));
  if (worst_v2 > kAmpTol) v.fail("V2 pass probability off by " + std::to_string(worst_v2));

  const auto start = Clock::now();
  const int d = 5;
  const int n = 3;
  const int c = 6;
  const auto doc = harness::run_scenario(make_config(Scenario::ModifiedAttack, d, n, 1, c, 10000, 31337));
  const double elapsed = seconds_since(start);
  const double keep = 0.5 + 0.5 * std::pow(static_cast<double>(d), 1 - n);
  const double expected = 1.0 - std::pow(keep, c);
  const auto& rate = doc.aggregates.at("detection_rate");
  const double sigma = std::sqrt(expected * (1.0 - expected) / static_cast<double>(rate.total));
  const double z = (rate.value - expected) / sigma;
  if (std::abs(z) > 4.0) v.fail("detection " + std::to_string(rate.value) + " vs " + std::to_string(expected));
  if (elapsed >= 60.0) v.fail("took " + std::to_string(elapsed) + " s");
  std::ostringstream os;
  os << "V1 exact 1, V2 exact d^-(n-1) (max dev " << std::max(worst_v1, worst_v2) << "); detection "
     << rate.value << " vs " << expected << " (z=" << z << ") over " << rate.total << " trials, " << elapsed << " s";
  if (v.pass) v.detail = os.str();
  return v;
}

Verdict eavesdropper() {
  Verdict v;
  std::ostringstream os;
  if (std::abs(adversary::eve_decoy_error_probability(2) - 0.25) > 1e-12) v.fail("d=2 exact value is not 0.25");
  std::uint64_t seed = 77;
  for (int d : {2, 3, 5, 10}) {
    const auto doc = harness::run_scenario(make_config(Scenario::EveDecoy, d, 2, 1, 0, 800, seed++));
    const auto& rate = doc.aggregates.at("mean_decoy_error_rate");
    const double expected = 0.5 * (1.0 - 1.0 / d);
    const double sigma = std::sqrt(expected * (1.0 - expected) / static_cast<double>(rate.total));
    const double z = (rate.value - expected) / sigma;
    if (rate.total < 10000) v.fail("only " + std::to_string(rate.total) + " decoys at d=" + std::to_string(d));
    if (std::abs(z) > 4.0) v.fail("d=" + std::to_string(d) + " error rate " + std::to_string(rate.value));
    os << (d == 2 ? "" : "; ") << "d=" << d << ": " << rate.value << " vs " << expected << " over " << rate.total << " decoys (z=" << z << ")";
  }
  if (v.pass) v.detail = os.str();
  return v;
}

Verdict numerical_hygiene() {
  Verdict v;
  std::mt19937_64 gen(99);
  smqs::RandomStream rng(123);
  double worst_norm = 0.0;
  double worst_round_trip = 0.0;
  for (int chain = 0; chain < 1000; ++chain) {
    const int d = 2 + static_cast<int>(gen() % 9);
    const int k = 1 + static_cast<int>(gen() % 3);
    auto reg = testing::random_register(d, k, gen);
    const auto before = std::vector<testing::Amp>(reg.amplitudes().begin(), reg.amplitudes().end());
    const int t = static_cast<int>(gen() % static_cast<unsigned>(k));
    auto round = qudit::apply_iqft(qudit::apply_qft(reg, t), t);
    worst_round_trip = std::max(worst_round_trip, testing::max_amplitude_error(round.amplitudes(), before));
    for (int step = 0; step < 30; ++step) {
      const int q = static_cast<int>(gen() % static_cast<unsigned>(k));
      switch (gen() % 4) {
        case 0: reg.qft_inplace(q); break;
        case 1: reg.iqft_inplace(q); break;
        case 2: reg.shift_inplace(q, static_cast<int>(gen() % static_cast<unsigned>(d))); break;
        default:
          reg = qudit::measure(std::move(reg), q, gen() % 2 ? Basis::V1 : Basis::V2, rng).posterior;
      }
      worst_norm = std::max(worst_norm, std::abs(reg.norm_squared() - 1.0));
    }
  }
  if (worst_norm > kAmpTol) v.fail("norm drift " + std::to_string(worst_norm));
  if (worst_round_trip > kAmpTol) v.fail("round trip error " + std::to_string(worst_round_trip));
  std::ostringstream os;
  os << "1000 chains x 30 ops, max norm drift " << worst_norm << ", max QFT/IQFT round trip error " << worst_round_trip;
  if (v.pass) v.detail = os.str();
  return v;
}

Verdict reproducibility() {
  Verdict v;
  const std::vector<ScenarioConfig> configs = {
      make_config(Scenario::Honest, 5, 3, 4, 0, 64, 11),
      make_config(Scenario::IqftAttack, 10, 3, 2, 0, 64, 12),
      make_config(Scenario::ModifiedHonest, 3, 4, 2, 5, 64, 13),
      make_config(Scenario::ModifiedAttack, 5, 3, 1, 6, 64, 14),
      make_config(Scenario::EveDecoy, 7, 3, 2, 0, 64, 15),
  };
  const int saved = omp_get_max_threads();
  for (const auto& cfg : configs) {
    omp_set_num_threads(1);
    const auto a = harness::per_trial_json(harness::run_scenario(cfg)).dump();
    omp_set_num_threads(4);
    const auto b = harness::per_trial_json(harness::run_scenario(cfg)).dump();
    if (a != b) v.fail(harness::to_string(cfg.scenario) + " per_trial differs between runs");
  }
  omp_set_num_threads(saved);
  if (v.pass) v.detail = "5 scenarios, per_trial bytes identical across repeated runs on 1 and 4 threads";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"worked example", worked_example},
      {"encoded sum identity", encoded_sum_identity},
      {"fake state identity", fake_state_identity},
      {"honest Sum correctness", honest_sum},
      {"attack on the original protocol", attack_original},
      {"modified protocol completeness", modified_completeness},
      {"modified protocol soundness", modified_soundness},
      {"eavesdropper detection", eavesdropper},
      {"numerical hygiene", numerical_hygiene},
      {"reproducibility", reproducibility},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict verdict;
    try {
      verdict = criteria[i].second();
    } catch (const std::exception& e) {
      verdict.fail(std::string("exception: ") + e.what());
    }
    if (!verdict.pass) ++failed;
    std::printf("[%s] %2zu %s: %s\n", verdict.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                verdict.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
