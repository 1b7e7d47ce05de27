#include <cmath>
#include <random>

#include "doctest.h"
#include "smqs/adversary.hpp"
#include "test_support.hpp"

using namespace smqs;
using namespace smqs::adversary;
using protocol::Basis;

namespace {

ProtocolConfig config(int d, int n, int m) {
  ProtocolConfig cfg;
  cfg.d = d;
  cfg.n = n;
  cfg.m = m;
  return cfg;
}

}  // namespace

TEST_CASE("fake_particle is QFT^-1|r>") {
  const double h = 1.0 / std::sqrt(2.0);
  const auto zero = fake_particle(2, 0);
  CHECK(std::abs(zero.amplitude(0) - h) < 1e-12);
  CHECK(std::abs(zero.amplitude(1) - h) < 1e-12);

  const auto example = fake_particle(10, 2);
  const auto oracle = smqs::testing::naive_fourier_vector(10, 2, -1);
  CHECK(smqs::testing::max_amplitude_error(example.amplitudes(), oracle) < 1e-12);

  CHECK_THROWS_AS(fake_particle(5, 5), std::out_of_range);
}

TEST_CASE("encoding on a fake particle yields r + k with certainty") {
  for (int d = 2; d <= 16; ++d) {
    for (int r = 0; r < d; ++r) {
      for (int k = 0; k < d; ++k) {
        auto reg = fake_particle(d, r);
        reg.qft_inplace(0);
        reg.shift_inplace(0, k);
        const auto dist = qudit::outcome_distribution(reg, 0, Basis::V1);
        REQUIRE(std::abs(dist[static_cast<std::size_t>((r + k) % d)] - 1.0) < 1e-9);
      }
    }
  }
  RandomStream rng(3);
  auto reg = fake_particle(10, 2);
  CHECK(protocol::encode_particle(reg, 0, 5, rng) == 7);
}

TEST_CASE("recover_secret_digit") {
  CHECK(recover_secret_digit(7, 2, 10) == 5);
  CHECK(recover_secret_digit(8, 2, 10) == 6);
  CHECK(recover_secret_digit(1, 2, 3) == 2);
  CHECK_THROWS_AS(recover_secret_digit(10, 2, 10), std::out_of_range);
}

TEST_CASE("fabricate_round holds QFT^-1|r> for every recipient") {
  const auto round = fabricate_round(config(5, 3, 1), 0, 3);
  CHECK(round.origin == protocol::RoundOrigin::Fabricated);
  CHECK(round.fabrication_value == 3);
  const std::vector<Register> parts{Register::basis_state(5, {0}), fake_particle(5, 3), fake_particle(5, 3)};
  CHECK(qudit::approx_equal(round.reg, Register::product(parts), 1e-12));
}

TEST_CASE("attack plan validation") {
  RandomStream rng(1);
  const auto plan = IqftAttackPlan::uniform(7, 5, rng);
  CHECK_NOTHROW(plan.validate(7, 5));
  CHECK_THROWS_AS(plan.validate(7, 4), protocol::InvalidConfig);
  CHECK_THROWS_AS(IqftAttackPlan::constant(7, 2).validate(7, 2), protocol::InvalidConfig);
}

TEST_CASE("worked example: P1 learns K2 = 5 and K3 = 6") {
  const auto cfg = config(10, 3, 1);
  const std::vector<SecretString> secrets{{{4}}, {{5}}, {{6}}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomStream rng(seed);
    const auto report = run_iqft_attack_original(cfg, secrets, IqftAttackPlan::constant(2, 1), rng);
    REQUIRE(report.log.results[1] == std::vector<int>{7});
    REQUIRE(report.log.results[2] == std::vector<int>{8});
    REQUIRE(report.recovered[1].digits == std::vector<int>{5});
    REQUIRE(report.recovered[2].digits == std::vector<int>{6});
    REQUIRE(report.success);
    REQUIRE(report.log.sum == std::vector<int>{5});
    for (const auto& c : report.decoy_checks) REQUIRE(c.error_rate() == 0.0);
  }
}

TEST_CASE("attack on zero secrets recovers zeros") {
  RandomStream rng(2);
  const auto cfg = config(6, 3, 3);
  const std::vector<SecretString> zeros(3, SecretString{{0, 0, 0}});
  for (int r = 0; r < 6; ++r) {
    const auto report = run_iqft_attack_original(cfg, zeros, IqftAttackPlan::constant(r, 3), rng);
    CHECK(report.success);
    CHECK(report.recovered[1].digits == std::vector<int>{0, 0, 0});
  }
}

TEST_CASE("attack succeeds on every trial and passes the decoy check") {
  RandomStream rng(3);
  std::mt19937_64 gen(3);
  const auto cfg = config(7, 4, 6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<SecretString> secrets(4);
    for (auto& s : secrets)
      for (int j = 0; j < 6; ++j) s.digits.push_back(static_cast<int>(gen() % 7));
    const auto plan = IqftAttackPlan::uniform(7, 6, rng);
    const auto report = run_iqft_attack_original(cfg, secrets, plan, rng);
    REQUIRE(report.success);
    for (int i = 1; i < 4; ++i) REQUIRE(report.recovered[static_cast<std::size_t>(i)] == secrets[static_cast<std::size_t>(i)]);
    for (const auto& c : report.decoy_checks) REQUIRE(c.errors == 0);
    REQUIRE(report.log.sum == protocol::expected_sum(secrets, 7));
  }
}

TEST_CASE("arbitrary Sum policy still recovers the secrets") {
  RandomStream rng(4);
  const std::vector<SecretString> secrets{{{1, 1}}, {{2, 3}}, {{4, 0}}};
  const auto report =
      run_iqft_attack_original(config(5, 3, 2), secrets, IqftAttackPlan::constant(1, 2), rng, SumPolicy::Arbitrary);
  CHECK(report.success);
  CHECK(report.log.entries.back().kind == protocol::Announcement::Kind::Sum);
}

TEST_CASE("intercept in the preparation basis leaves a decoy intact") {
  RandomStream rng(5);
  for (int r = 0; r < 6; ++r) {
    const auto decoy = Register::basis_state(6, {r});
    const auto seen = qudit::measure(decoy, 0, Basis::V1, rng);
    CHECK(seen.value == r);
    CHECK(qudit::approx_equal(seen.posterior, decoy, 1e-12));
  }
}

TEST_CASE("intercept in the wrong basis: checker matches with probability 1/d") {
  for (int d : {2, 3, 5, 10}) {
    for (int r = 0; r < d; ++r) {
      // Eve measures |r> in V2 and resends QFT|x>; checker measures in V1.
      const auto eve = qudit::outcome_distribution(Register::basis_state(d, {r}), 0, Basis::V2);
      double match = 0.0;
      for (int x = 0; x < d; ++x) {
        const auto resent = qudit::apply_qft(Register::basis_state(d, {x}), 0);
        match += eve[static_cast<std::size_t>(x)] *
                 qudit::outcome_distribution(resent, 0, Basis::V1)[static_cast<std::size_t>(r)];
      }
      CHECK(std::abs(match - 1.0 / d) < 1e-12);
    }
  }
}

TEST_CASE("exact per-decoy error probability is (1 - 1/d) / 2") {
  CHECK(std::abs(eve_decoy_error_probability(2) - 0.25) < 1e-12);
  CHECK(std::abs(eve_decoy_error_probability(10) - 0.45) < 1e-12);
  for (int d = 2; d <= 16; ++d) CHECK(std::abs(eve_decoy_error_probability(d) - 0.5 * (1.0 - 1.0 / d)) < 1e-12);
}

TEST_CASE("Eve picks each basis half the time") {
  // A V1 intercept returns |0> untouched; a V2 intercept always leaves some QFT|x>.
  RandomStream rng(6);
  std::vector<Register> batch(20000, Register::basis_state(4, {0}));
  eve_intercept_resend(batch, rng);
  std::size_t untouched = 0;
  for (const auto& p : batch) untouched += std::abs(p.amplitude(0) - 1.0) < 1e-12 ? 1 : 0;
  CHECK(smqs::testing::within_4_sigma(untouched, batch.size(), 0.5));
}
