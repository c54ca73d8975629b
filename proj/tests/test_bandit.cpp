#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "gen.hpp"
#include "sicmab/bandit.hpp"
#include "sicmab/error.hpp"

using namespace sicmab;

namespace {

std::vector<ParameterSet> arms(std::size_t n) {
  std::vector<ParameterSet> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({i, 920.7e6 + 0.2e6 * i, 125e3, -3});
  return out;
}

}  // namespace

TEST_CASE("labels") {
  CHECK(ParameterSet{0, 920.7e6, 250e3, -3}.label() == "920.7MHz/250kHz/-3dBm");
  CHECK(ParameterSet{4, 921.8e6, 125e3, 13}.label() == "921.8MHz/125kHz/13dBm");
}

TEST_CASE("ucb1-tuned score") {
  ArmStats s;
  CHECK(std::isinf(ucb1_tuned_score(s, 1)));

  // five ones and five zeros, t = 100
  s.cumulative_reward = 5.0;
  s.selection_count = 10;
  s.mean = 0.5;
  s.m2 = 2.5;
  CHECK(ucb1_tuned_score(s, 100) == doctest::Approx(0.839307021220756).epsilon(1e-12));

  // variance above 1/4 is capped
  ArmStats wide{1.0, 2, 0.5, 0.6, 0.0};  // V = 0.3
  ArmStats cap{1.0, 2, 0.5, 0.5, 0.0};   // V = 0.25
  CHECK(ucb1_tuned_score(wide, 7) == ucb1_tuned_score(cap, 7));
}

TEST_CASE("welford variance") {
  Bandit b(arms(1));
  b.update(0, 1.0);
  b.update(0, 0.0);
  CHECK(b.stats(0).variance() == doctest::Approx(0.25).epsilon(1e-15));

  Bandit c(arms(1));
  for (double r : {0.2, 0.4, 0.6}) c.update(0, r);
  CHECK(c.stats(0).variance() == doctest::Approx(0.0266666666666667).epsilon(1e-12));
}

TEST_CASE("property: welford matches two-pass") {
  for (int k = 0; k < gen::kCases; ++k) {
    auto rng = gen::rng_for(11, k);
    const int n = gen::uniform_int(rng, 1, 500);
    Bandit b(arms(1));
    std::vector<double> xs;
    for (int i = 0; i < n; ++i) {
      const double r = gen::uniform_int(rng, 0, 3) == 0 ? 0.0 : gen::uniform(rng);
      xs.push_back(r);
      b.update(0, r);
    }
    CHECK(std::abs(b.stats(0).variance() - gen::two_pass_variance(xs)) <= 1e-12);
    CHECK(b.stats(0).selection_count == static_cast<std::uint64_t>(n));
  }
}

TEST_CASE("selection order and ties") {
  Bandit b(arms(4));
  for (std::size_t i = 0; i < 4; ++i) {
    const std::size_t a = b.select();
    CHECK(a == i);  // untried arms first, lowest index
    b.update(a, 1.0);
  }
  CHECK(b.select() == 0);  // all equal: lowest index
  CHECK(b.stats(3).last_score == b.stats(0).last_score);
}

TEST_CASE("contract checks") {
  CHECK_THROWS_AS(Bandit(std::vector<ParameterSet>{}), ConfigError);
  CHECK_THROWS_AS(Bandit({arms(1)[0], arms(1)[0]}), ConfigError);
  Bandit b(arms(2));
  CHECK_THROWS_AS(b.update(2, 0.5), ContractViolation);
  CHECK_THROWS_AS(b.update(0, 1.01), ContractViolation);
  CHECK_THROWS_AS(b.update(0, -0.1), ContractViolation);
  CHECK_THROWS_AS(b.update(0, std::numeric_limits<double>::quiet_NaN()), ContractViolation);
}

TEST_CASE("reset restores the fresh state") {
  for (int k = 0; k < 50; ++k) {
    auto rng = gen::rng_for(12, k);
    Bandit b(arms(5));
    const Bandit fresh = b;
    for (int i = 0; i < gen::uniform_int(rng, 1, 200); ++i) {
      const std::size_t a = b.select();
      b.update(a, gen::uniform(rng));
    }
    b.reset();
    CHECK(b.total_steps() == 0);
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(b.stats(i).selection_count == 0);
      CHECK(b.stats(i).cumulative_reward == 0.0);
      CHECK(b.stats(i).m2 == 0.0);
    }
    CHECK(b == fresh);
  }
}

TEST_CASE("property: cumulative reward equals sum of updates") {
  for (int k = 0; k < 100; ++k) {
    auto rng = gen::rng_for(13, k);
    Bandit b(arms(3));
    std::vector<double> sums(3, 0.0);
    for (int i = 0; i < 300; ++i) {
      const std::size_t a = b.select();
      const double r = gen::uniform(rng);
      sums[a] += r;
      b.update(a, r);
    }
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(b.stats(i).cumulative_reward == doctest::Approx(sums[i]).epsilon(1e-12));
    }
    CHECK(b.total_steps() == 300);
  }
}
