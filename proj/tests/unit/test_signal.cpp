#include "doctest.h"

#include <cmath>

#include "cyclotopo/error.hpp"
#include "cyclotopo/network.hpp"
#include "cyclotopo/signal.hpp"
#include "oracles.hpp"

using namespace cyclotopo;

namespace {

ScalarSeries am_series(std::vector<Complex> modulation, std::size_t n, std::uint64_t seed) {
  return gen_input(InputSpec::am_white(std::move(modulation)), n, seed, 1);
}

// Smallest T in 1..3 whose per-residue variances (mod 6) are T-periodic.
int brute_force_period(const ScalarSeries& x, double rel_tol) {
  std::vector<double> var(6, 0.0);
  std::vector<double> count(6, 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    var[k % 6] += std::norm(x.samples[k]);
    count[k % 6] += 1.0;
  }
  for (int r = 0; r < 6; ++r) var[r] /= count[r];
  for (int T = 1; T <= 3; ++T) {
    bool invariant = true;
    for (int r = 0; r < 6; ++r)
      if (std::abs(var[r] - var[(r + T) % 6]) > rel_tol * var[r]) invariant = false;
    if (invariant) return T;
  }
  return 0;
}

}  // namespace

TEST_CASE("lift and unlift") {
  ScalarSeries x{4, {1.0, 2.0, 3.0, 4.0, 5.0}};
  LiftedSeries X = lift(x, 2);
  CHECK(X.period() == 2);
  CHECK(X.node_id() == 4);
  REQUIRE(X.block_count() == 2);
  CHECK(X.at(0, 0) == Complex(1.0));
  CHECK(X.at(0, 1) == Complex(2.0));
  CHECK(X.at(1, 0) == Complex(3.0));
  CHECK(X.at(1, 1) == Complex(4.0));
  CHECK(X.component(1) == std::vector<Complex>{2.0, 4.0});

  ScalarSeries back = unlift(X);
  CHECK(back.node_id == 4);
  CHECK(back.samples == std::vector<Complex>{1.0, 2.0, 3.0, 4.0});
  CHECK(unlift(lift(x, 1)).samples == x.samples);
  CHECK(unlift(lift(ScalarSeries{1, {}}, 3)).samples.empty());
  CHECK_THROWS_AS(lift(x, 0), InputError);
}

TEST_CASE("lift keeps all but the remainder") {
  ScalarSeries x = gen_input(InputSpec::white(), 1001, 3, 1);
  for (int T = 1; T <= 7; ++T) {
    LiftedSeries X = lift(x, T);
    CHECK(T * X.block_count() <= x.size());
    CHECK(x.size() < T * (X.block_count() + 1));
    ScalarSeries back = unlift(X);
    for (std::size_t k = 0; k < back.size(); ++k) CHECK(back.samples[k] == x.samples[k]);
  }
}

TEST_CASE("lcm_periods") {
  CHECK(lcm_periods({2, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1}) == 2);
  CHECK(lcm_periods({1, 1, 1}) == 1);
  CHECK(lcm_periods({2, 3}) == 6);
  CHECK_THROWS_AS(lcm_periods({}), InputError);
  CHECK_THROWS_AS(lcm_periods({0}), InputError);
}

TEST_CASE("detect_period") {
  const std::size_t n = 200000;
  SUBCASE("white") { CHECK(detect_period(gen_input(InputSpec::white(), n, 1, 1)) == 1); }
  SUBCASE("sign alternation of white noise is stationary") {
    // (-1)^k w(k) has covariance (-1)^{s-t} R(s-t): no cyclic component in |x|^2
    CHECK(detect_period(am_series({1.0, -1.0}, n, 2)) == 1);
  }
  SUBCASE("flat modulation") { CHECK(detect_period(am_series({1.0, 1.0}, n, 3)) == 1); }
  SUBCASE("three-phase modulation") {
    ScalarSeries x = am_series({1.0, 2.0, 4.0}, n, 4);
    CHECK(brute_force_period(x, 0.1) == 3);
    CHECK(detect_period(x) == 3);
  }
  SUBCASE("too short") { CHECK_THROWS_AS(detect_period(gen_input(InputSpec::white(), 100, 1, 1), 8), InputError); }
}

TEST_CASE("detect_period over seeds") {
  int hits = 0, total = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    hits += detect_period(am_series({1.0, 0.5}, 100000, seed)) == 2;
    hits += detect_period(am_series({0.5, 1.0, 1.5}, 100000, seed)) == 3;
    hits += detect_period(am_series({Complex(0.0, 1.0), 1.0, 2.0, 1.0}, 100000, seed)) == 4;
    total += 3;
  }
  CHECK(hits >= 0.99 * total);
}

TEST_CASE("split-half stationarity") {
  ScalarSeries x = am_series({1.0, 2.0}, 40000, 9);
  CHECK(split_half_stationarity({lift(x, 2)}).passed);

  ScalarSeries drift = gen_input(InputSpec::white(), 40000, 9, 1);
  for (std::size_t k = drift.size() / 2; k < drift.size(); ++k) drift.samples[k] *= 2.0;
  StationarityReport r = split_half_stationarity({lift(drift, 2)});
  CHECK_FALSE(r.passed);
  CHECK(r.max_z > 5.0);
  CHECK_FALSE(r.worst.empty());
}

TEST_CASE("series validation") {
  ScalarSeries x{1, {1.0, Complex(std::nan(""), 0.0)}};
  CHECK_THROWS_AS(x.validate(), NumericalError);
}
