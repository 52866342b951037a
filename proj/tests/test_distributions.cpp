#include <doctest.h>

#include <cmath>
#include <numbers>

#include "edprof/distributions.hpp"
#include "edprof/error.hpp"

using namespace edprof;

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
  const auto [x, w] = dist::gauss_legendre(16);
  double sw = 0.0, s30 = 0.0, s31 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    s30 += w[i] * std::pow(x[i], 30);
    s31 += w[i] * std::pow(x[i], 31);
  }
  CHECK(sw == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(s30 == doctest::Approx(2.0 / 31.0).epsilon(1e-12));
  CHECK(std::abs(s31) < 1e-14);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == doctest::Approx(-x[x.size() - 1 - i]));
}

TEST_CASE("range of two normals has a closed form") {
  // For k = 2 the range is |Z1 - Z2| ~ sqrt(2) |N(0,1)|.
  for (double w : {0.1, 0.5, 1.0, 2.0, 2.7718, 4.0, 6.0}) {
    const double closed = 2.0 * dist::normal_cdf(w / std::numbers::sqrt2) - 1.0;
    CHECK(std::abs(dist::ptukey(w, 2, INFINITY) - closed) < 1e-9);
  }
}

TEST_CASE("k = 2 studentized range reduces to Student t") {
  // q = sqrt(2) |t|, so P(Q <= q) = 1 - two-sided p of t = q / sqrt(2).
  for (double df : {3.0, 10.0, 57.0}) {
    for (double q : {0.5, 1.5, 3.0, 5.0}) {
      const double via_t = 1.0 - dist::t_two_sided_p(q / std::numbers::sqrt2, df);
      CHECK(std::abs(dist::ptukey(q, 2, df) - via_t) < 1e-7);
    }
  }
}

TEST_CASE("studentized range CDF reference values") {
  CHECK(dist::ptukey(3.0, 3, 10) == doctest::Approx(0.8650165848104374).epsilon(1e-7));
  CHECK(dist::ptukey(2.5, 4, 20) == doctest::Approx(0.6827970026274168).epsilon(1e-7));
  CHECK(dist::ptukey(4.0, 2, 3) == doctest::Approx(0.9337243972584759).epsilon(1e-7));
  CHECK(dist::ptukey(0.0, 3, 10) == 0.0);
  CHECK_THROWS_AS(dist::ptukey(1.0, 1, 10), ValidationError);
}

TEST_CASE("studentized range quantiles match published tables") {
  struct Row {
    double alpha;
    std::size_t k;
    double df;
    double q;
  };
  const Row rows[] = {
      {0.05, 3, 10, 3.8768},  {0.05, 2, 10, 3.1511},  {0.05, 4, 20, 3.9583},
      {0.05, 5, 30, 4.1021},  {0.01, 3, 10, 5.2702},  {0.05, 10, 60, 4.6463},
      {0.05, 2, INFINITY, 2.7718}, {0.05, 3, 120, 3.3561}, {0.05, 5, 5, 5.6731},
  };
  for (const auto& r : rows) {
    CAPTURE(r.k);
    CAPTURE(r.df);
    CHECK(std::abs(dist::qtukey_upper(r.alpha, r.k, r.df) - r.q) < 0.01);
    CHECK(std::abs(dist::qtukey_upper(r.alpha, r.k, r.df) - r.q) < 2e-4);
  }
}

TEST_CASE("classical tails") {
  CHECK(dist::normal_sf(1.959963984540054) == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(dist::t_two_sided_p(2.228138851986274, 10) == doctest::Approx(0.05).epsilon(1e-10));
  CHECK(dist::chi2_sf(5.991464547107979, 2) == doctest::Approx(0.05).epsilon(1e-10));
  CHECK(dist::f_sf(3.8852938346523933, 2, 12) == doctest::Approx(0.05).epsilon(1e-10));
  CHECK(dist::t_two_sided_p(0.0, 5) == 1.0);
  CHECK(dist::chi2_sf(0.0, 3) == 1.0);
  CHECK_THROWS_AS(dist::t_two_sided_p(1.0, 0.0), ValidationError);
}
