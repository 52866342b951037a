#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "edprof/error.hpp"
#include "edprof/metrics.hpp"
#include "edprof/random.hpp"
#include "support/planted.hpp"

using namespace edprof;
using edprof::testing::hot_token_with_ed;
using edprof::testing::naive_entropy;

namespace {

std::vector<double> random_simplex(rng::Engine& e, std::size_t v) {
  std::vector<double> w(v);
  double s = 0.0;
  for (auto& x : w) {
    x = -std::log(e.open_uniform());
    s += x;
  }
  for (auto& x : w) x /= s;
  return w;
}

// Zipf entropy the slow way: materialize p and sum -p ln p left to right.
double zipf_ed_oracle(double alpha, std::size_t v) {
  std::vector<double> p(v);
  long double z = 0.0L;
  for (std::size_t i = 0; i < v; ++i) {
    p[i] = std::pow(static_cast<double>(i + 1), -alpha);
    z += p[i];
  }
  for (auto& x : p) x = static_cast<double>(x / z);
  return 1.0 - naive_entropy(p) / std::log(static_cast<double>(v));
}

}  // namespace

TEST_CASE("entropy of reference distributions") {
  CHECK(entropy(ProbDist::uniform(4)) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK(entropy(ProbDist::one_hot(4, 2)) == 0.0);
  CHECK(entropy(ProbDist({0.5, 0.5, 0.0, 0.0})) == doctest::Approx(0.6931471805599453));
}

TEST_CASE("ED of reference distributions") {
  CHECK(std::abs(ed(ProbDist::uniform(4))) <= 1e-12);
  CHECK(std::abs(ed(ProbDist::one_hot(4, 0)) - 1.0) <= 1e-9);
  CHECK(std::abs(ed(ProbDist({0.5, 0.5, 0.0, 0.0})) - 0.5) <= 1e-12);
}

TEST_CASE("ProbDist validation rejects bad mass instead of renormalizing") {
  CHECK_THROWS_AS(ProbDist({0.5, 0.6}), ValidationError);
  CHECK_THROWS_AS(ProbDist({1.2, -0.2}), ValidationError);
  CHECK_THROWS_AS(ProbDist({1.0}), ValidationError);
  CHECK_THROWS_AS(ProbDist({std::nan(""), 1.0}), ValidationError);
  CHECK_NOTHROW(ProbDist({0.5, 0.5 + 5e-10}));
  CHECK_THROWS_AS(ProbDist({0.5, 0.5 + 5e-9}), ValidationError);
}

TEST_CASE("ED equals KL from uniform over ln V") {
  rng::Engine e(7);
  for (std::size_t v : {2u, 4u, 1000u, 50000u}) {
    for (int rep = 0; rep < 20; ++rep) {
      const ProbDist p(random_simplex(e, v));
      const double via_kl = kl_from_uniform(p) / std::log(static_cast<double>(v));
      CHECK(std::abs(ed(p) - via_kl) <= 1e-10);
      CHECK(ed(p) >= 0.0);
      CHECK(ed(p) <= 1.0);
    }
  }
}

TEST_CASE("ED is permutation invariant") {
  rng::Engine e(11);
  std::mt19937_64 shuffler(3);
  for (int rep = 0; rep < 50; ++rep) {
    auto mass = random_simplex(e, 64);
    const double before = ed(ProbDist(mass));
    std::shuffle(mass.begin(), mass.end(), shuffler);
    CHECK(ed(ProbDist(mass)) == doctest::Approx(before).epsilon(1e-13));
  }
}

TEST_CASE("ed_sequence aggregates") {
  SUBCASE("arithmetic mean") {
    std::vector<ProbDist> seq{ProbDist(hot_token_with_ed(0.2, 16)),
                              ProbDist(hot_token_with_ed(0.4, 16))};
    const auto prof = ed_sequence(seq);
    CHECK(prof.ed_mean == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(prof.per_position_ed.size() == 2);
  }
  SUBCASE("single position has zero std") {
    std::vector<ProbDist> seq{ProbDist::one_hot(8, 1)};
    const auto prof = ed_sequence(seq);
    CHECK(prof.ed_std == 0.0);
    CHECK(prof.ed_mean == 1.0);
  }
  SUBCASE("empty sequence is an error") {
    CHECK_THROWS_AS(ed_sequence({}), ValidationError);
  }
  SUBCASE("planted Beta draws: std recovered") {
    rng::Engine e(2024);
    std::vector<double> planted;
    std::vector<ProbDist> seq;
    for (int i = 0; i < 100; ++i) {
      const double target = e.beta(4.0, 6.0);
      planted.push_back(target);
      seq.emplace_back(hot_token_with_ed(target, 256));
    }
    const double m = std::accumulate(planted.begin(), planted.end(), 0.0) / 100.0;
    double ss = 0.0;
    for (double x : planted) ss += (x - m) * (x - m);
    const double oracle_std = std::sqrt(ss / 99.0);
    const auto prof = ed_sequence(seq);
    CHECK(std::abs(prof.ed_std - oracle_std) <= 0.05 * oracle_std);
    CHECK(prof.ed_mean == doctest::Approx(m).epsilon(1e-9));
  }
  SUBCASE("population convention") {
    std::vector<ProbDist> seq{ProbDist(hot_token_with_ed(0.2, 16)),
                              ProbDist(hot_token_with_ed(0.4, 16))};
    CHECK(ed_sequence(seq, StdConvention::population).ed_std ==
          doctest::Approx(0.1).epsilon(1e-8));
  }
}

TEST_CASE("streaming accumulator agrees with batch ed_sequence") {
  rng::Engine e(5);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t len = 1 + e.index(300);
    std::vector<ProbDist> seq;
    EdAccumulator acc;
    for (std::size_t t = 0; t < len; ++t) {
      seq.emplace_back(random_simplex(e, 32));
      acc.add(ed(seq.back()));
    }
    const auto prof = ed_sequence(seq);
    CHECK(std::abs(acc.mean() - prof.ed_mean) <= 1e-10);
    CHECK(std::abs(acc.stddev() - prof.ed_std) <= 1e-10);
  }
}

TEST_CASE("softmax with temperature") {
  SUBCASE("constant logits give uniform") {
    for (double t : {0.3, 1.0, 7.0}) {
      const auto p = softmax_with_temperature(LogitVector({0.0, 0.0, 0.0}), t);
      CHECK(std::abs(ed(p)) <= 1e-12);
    }
  }
  SUBCASE("sharper at lower temperature") {
    const LogitVector z({2.0, 0.0, 0.0, 0.0});
    CHECK(ed(softmax_with_temperature(z, 1.0)) > ed(softmax_with_temperature(z, 2.0)));
  }
  SUBCASE("shift invariance") {
    rng::Engine e(9);
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<double> z(100), zc(100);
      const double c = (e.uniform() - 0.5) * 2000.0;
      for (std::size_t i = 0; i < z.size(); ++i) {
        z[i] = e.normal() * 3.0;
        zc[i] = z[i] + c;
      }
      const auto a = softmax_with_temperature(LogitVector(z), 0.8);
      const auto b = softmax_with_temperature(LogitVector(zc), 0.8);
      for (std::size_t i = 0; i < z.size(); ++i) CHECK(std::abs(a.mass()[i] - b.mass()[i]) <= 1e-12);
    }
  }
  SUBCASE("extreme logits do not overflow") {
    const auto p = softmax_with_temperature(LogitVector({1e4, -1e4, 0.0}), 0.25);
    CHECK(p.mass()[0] == doctest::Approx(1.0));
  }
  SUBCASE("invalid input") {
    CHECK_THROWS_AS(softmax_with_temperature(LogitVector({1.0, 2.0}), 0.0), ValidationError);
    CHECK_THROWS_AS(softmax_with_temperature(LogitVector({1.0, 2.0}), -1.0), ValidationError);
    CHECK_THROWS_AS(LogitVector({1.0, INFINITY}), ValidationError);
  }
}

TEST_CASE("ED decreases strictly with temperature") {
  rng::Engine e(77);
  const std::vector<double> grid{0.25, 0.5, 1.0, 2.0, 4.0};
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t v = 2 + e.index(500);
    std::vector<double> z(v);
    const double scale = 0.1 + 2.9 * e.uniform();
    for (auto& x : z) x = e.normal() * scale;
    const LogitVector lv(z);
    double prev = 2.0;
    for (double t : grid) {
      const double cur = ed(softmax_with_temperature(lv, t));
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("log-space logit entropy matches softmax then entropy") {
  rng::Engine e(13);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> z(1000);
    std::vector<float> zf(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      zf[i] = static_cast<float>(e.normal() * 4.0);
      z[i] = zf[i];
    }
    const double t = 0.5 + e.uniform();
    const double direct = entropy(softmax_with_temperature(LogitVector(z), t));
    CHECK(logit_entropy(std::span<const double>(z), t) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(logit_entropy(std::span<const float>(zf), t) == doctest::Approx(direct).epsilon(1e-12));
  }
  CHECK_THROWS_AS(logit_entropy(std::span<const double>(std::vector<double>{1.0, NAN}), 1.0),
                  ValidationError);
}

TEST_CASE("Zipf ED baseline") {
  CHECK(zipf_ed({0.0, 10}) == 0.0);
  CHECK(zipf_ed({0.0, 150000}) == 0.0);
  // Frozen from a 30-digit brute-force summation over all 150,000 terms.
  CHECK(std::abs(zipf_ed({1.0, 150000}) - 0.3116964153914112) <= 1e-10);
  CHECK(std::abs(zipf_ed({50.0, 100}) - 1.0) <= 1e-6);
  for (double a : {0.5, 1.0, 1.5}) {
    for (std::size_t v : {1000u, 100000u}) {
      CHECK(std::abs(zipf_ed({a, v}) - zipf_ed_oracle(a, v)) <= 1e-10);
    }
  }
  double prev = -1.0;
  for (int i = 0; i <= 12; ++i) {
    const double cur = zipf_ed({0.25 * i, 5000});
    CHECK(cur >= prev);
    prev = cur;
  }
  CHECK_THROWS_AS(zipf_ed({-1.0, 10}), ValidationError);
  CHECK_THROWS_AS(zipf_ed({1.0, 1}), ValidationError);
}

TEST_CASE("entropy to perplexity") {
  CHECK(entropy_to_perplexity(0.0) == 1.0);
  CHECK(entropy_to_perplexity(std::log(2.0)) == doctest::Approx(2.0));
  CHECK(entropy_to_perplexity(std::log(152064.0)) == doctest::Approx(152064.0));
  CHECK_THROWS_AS(entropy_to_perplexity(-0.1), ValidationError);
}

TEST_CASE("binary32 probabilities use a widened tolerance") {
  std::vector<float> p(1000, 1.0f / 1000.0f);
  CHECK(entropy_of_masses(std::span<const float>(p)) == doctest::Approx(std::log(1000.0)));
  p[0] += 1e-4f;
  CHECK_THROWS_AS(entropy_of_masses(std::span<const float>(p)), ValidationError);
}
