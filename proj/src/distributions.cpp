#include "edprof/distributions.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>

#include "edprof/error.hpp"

namespace edprof::dist {
namespace {

constexpr std::size_t kNodes = 16;
constexpr std::size_t kRangePanels = 20;
constexpr std::size_t kScalePanels = 32;
constexpr double kRangeHalfWidth = 8.5;  // phi(8.5) ~ 1e-16
constexpr double kInfiniteDf = 25000.0;

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

const Rule& rule16() {
  static const Rule r = [] {
    auto [x, w] = gauss_legendre(kNodes);
    return Rule{std::move(x), std::move(w)};
  }();
  return r;
}

// Integral of f over [a, b] split into `panels` equal Gauss-Legendre panels.
template <class F>
double integrate(double a, double b, std::size_t panels, const F& f) {
  const Rule& r = rule16();
  const double h = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    const double mid = lo + 0.5 * h;
    double s = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(mid + 0.5 * h * r.x[i]);
    total += 0.5 * h * s;
  }
  return total;
}

double phi(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

// P(range of k iid standard normals <= w).
double range_cdf(double w, std::size_t k) {
  if (w <= 0.0) return 0.0;
  const double kd = static_cast<double>(k);
  const double v = integrate(-kRangeHalfWidth, kRangeHalfWidth, kRangePanels, [&](double z) {
    const double inner = normal_cdf(z) - normal_cdf(z - w);
    return kd * phi(z) * std::pow(std::max(inner, 0.0), kd - 1.0);
  });
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t n) {
  std::vector<double> x(n), w(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        const double jd = static_cast<double>(j);
        p0 = ((2.0 * jd - 1.0) * z * p1 - (jd - 1.0) * p2) / jd;
      }
      dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw ValidationError("t distribution needs df > 0");
  if (std::isinf(t)) return 0.0;
  const boost::math::students_t_distribution<double> d(df);
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(d, std::abs(t))), 0.0, 1.0);
}

double t_quantile(double p, double df) {
  const boost::math::students_t_distribution<double> d(df);
  return boost::math::quantile(d, p);
}

double chi2_sf(double x, double df) {
  if (!(df > 0.0)) throw ValidationError("chi-square distribution needs df > 0");
  if (x <= 0.0) return 1.0;
  const boost::math::chi_squared_distribution<double> d(df);
  return std::clamp(boost::math::cdf(boost::math::complement(d, x)), 0.0, 1.0);
}

double f_sf(double x, double df1, double df2) {
  if (!(df1 > 0.0) || !(df2 > 0.0)) throw ValidationError("F distribution needs df > 0");
  if (x <= 0.0) return 1.0;
  const boost::math::fisher_f_distribution<double> d(df1, df2);
  return std::clamp(boost::math::cdf(boost::math::complement(d, x)), 0.0, 1.0);
}

double ptukey(double q, std::size_t k, double df) {
  if (k < 2) throw ValidationError("studentized range needs k >= 2");
  if (!(df > 0.0)) throw ValidationError("studentized range needs df > 0");
  if (q <= 0.0) return 0.0;
  if (!std::isfinite(df) || df > kInfiniteDf) return range_cdf(q, k);

  // s = chi_df / sqrt(df) has density
  //   df^(df/2) / (Gamma(df/2) 2^(df/2 - 1)) s^(df - 1) exp(-df s^2 / 2).
  const double log_norm =
      0.5 * df * std::log(df) - std::lgamma(0.5 * df) - (0.5 * df - 1.0) * std::numbers::ln2;
  const double sigma = 1.0 / std::sqrt(2.0 * df);
  const double mode = df > 1.0 ? std::sqrt((df - 1.0) / df) : 0.0;
  const double lo = std::max(0.0, mode - 12.0 * sigma);
  const double hi = mode + 12.0 * sigma;
  const double v = integrate(lo, hi, kScalePanels, [&](double s) {
    if (s <= 0.0) return 0.0;
    const double log_density = log_norm + (df - 1.0) * std::log(s) - 0.5 * df * s * s;
    return std::exp(log_density) * range_cdf(q * s, k);
  });
  return std::clamp(v, 0.0, 1.0);
}

double qtukey_upper(double alpha, std::size_t k, double df) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  const double target = 1.0 - alpha;
  double hi = 4.0;
  while (ptukey(hi, k, df) < target) {
    hi *= 2.0;
    if (hi > 1e6) throw StatsError("studentized range quantile did not bracket");
  }
  std::uintmax_t max_iter = 100;
  const auto [a, b] = boost::math::tools::toms748_solve(
      [&](double q) { return ptukey(q, k, df) - target; }, 0.0, hi, -target,
      ptukey(hi, k, df) - target, boost::math::tools::eps_tolerance<double>(40), max_iter);
  return 0.5 * (a + b);
}

}  // namespace edprof::dist
