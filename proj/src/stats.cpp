#include "edprof/stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "edprof/distributions.hpp"
#include "edprof/error.hpp"
#include "edprof/numeric.hpp"

namespace edprof {
namespace {

void require_size(std::span<const double> x, std::size_t n, const char* what) {
  if (x.size() < n) {
    throw InsufficientDataError(std::string(what) + " needs at least " + std::to_string(n) +
                                " observations, got " + std::to_string(x.size()));
  }
}

void require_finite(std::span<const double> x, const char* what) {
  for (double v : x) {
    if (!std::isfinite(v)) throw ValidationError(std::string(what) + ": non-finite observation");
  }
}

// 2 * mid-rank, which is always an integer: a tie block occupying 1-based
// positions i..j gets i + j.
std::vector<long> doubled_midranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<long> r(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const long doubled = static_cast<long>(i + 1) + static_cast<long>(j + 1);
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = doubled;
    i = j + 1;
  }
  return r;
}

// Sum over tie blocks of (t^3 - t).
double tie_sum(std::span<const double> x) {
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  double total = 0.0;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t j = i;
    while (j + 1 < s.size() && s[j + 1] == s[i]) ++j;
    const double t = static_cast<double>(j - i + 1);
    total += t * t * t - t;
    i = j + 1;
  }
  return total;
}

double sum_sq_dev(std::span<const double> x, double m) {
  return pairwise_sum(x.size(), [&](std::size_t i) {
    const double d = x[i] - m;
    return d * d;
  });
}

struct Pooled {
  std::vector<double> values;
  std::vector<std::size_t> sizes;
};

Pooled pool(Groups groups, const char* what, std::size_t min_per_group) {
  if (groups.size() < 2) {
    throw InsufficientDataError(std::string(what) + " needs at least 2 groups");
  }
  Pooled p;
  for (const auto& g : groups) {
    if (g.size() < min_per_group) {
      throw InsufficientDataError(std::string(what) + " needs at least " +
                                  std::to_string(min_per_group) + " observation(s) per group");
    }
    require_finite(g, what);
    p.values.insert(p.values.end(), g.begin(), g.end());
    p.sizes.push_back(g.size());
  }
  return p;
}

double correlation(std::span<const double> x, std::span<const double> y, const char* what) {
  const double mx = mean(x), my = mean(y);
  const double sxy = pairwise_sum(x.size(), [&](std::size_t i) { return (x[i] - mx) * (y[i] - my); });
  const double sxx = sum_sq_dev(x, mx);
  const double syy = sum_sq_dev(y, my);
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    throw DegenerateInputError(std::string(what) + ": zero variance in an input");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

TestResult correlation_result(const char* name, double r, std::size_t n) {
  TestResult out;
  out.test_name = name;
  out.statistic = r;
  out.effect_size = r;
  const double df = static_cast<double>(n) - 2.0;
  out.df = {df};
  out.group_sizes = {n};
  if (std::abs(r) >= 1.0) {
    out.p_value = 0.0;
  } else {
    const double t = r * std::sqrt(df / (1.0 - r * r));
    out.p_value = dist::t_two_sided_p(t, df);
  }
  out.method_notes = "two-sided p from t approximation with n-2 df";
  return out;
}

}  // namespace

double mean(std::span<const double> x) {
  if (x.empty()) throw InsufficientDataError("mean of an empty sample");
  return pairwise_sum(x.size(), [&](std::size_t i) { return x[i]; }) /
         static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  require_size(x, 2, "sample variance");
  return sum_sq_dev(x, mean(x)) / static_cast<double>(x.size() - 1);
}

std::vector<double> midranks(std::span<const double> x) {
  const auto d = doubled_midranks(x);
  std::vector<double> r(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) r[i] = 0.5 * static_cast<double>(d[i]);
  return r;
}

TestResult t_one_sample(std::span<const double> x, double mu0) {
  require_size(x, 2, "one-sample t-test");
  require_finite(x, "one-sample t-test");
  const double m = mean(x);
  const double var = sample_variance(x);
  if (!(var > 0.0)) throw DegenerateInputError("one-sample t-test: sample has zero variance");
  const double n = static_cast<double>(x.size());
  TestResult out;
  out.test_name = "t_one_sample";
  out.statistic = (m - mu0) / std::sqrt(var / n);
  out.df = {n - 1.0};
  out.p_value = dist::t_two_sided_p(out.statistic, n - 1.0);
  out.effect_size = (m - mu0) / std::sqrt(var);
  out.group_sizes = {x.size()};
  out.method_notes = "two-sided";
  return out;
}

TestResult t_paired(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("paired t-test: samples differ in length");
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
  TestResult out;
  try {
    out = t_one_sample(d, 0.0);
  } catch (const DegenerateInputError&) {
    throw DegenerateInputError("paired t-test: differences have zero variance");
  }
  out.test_name = "t_paired";
  out.method_notes = "two-sided, on pairwise differences";
  return out;
}

TestResult kruskal_wallis(Groups groups) {
  const Pooled p = pool(groups, "Kruskal-Wallis", 1);
  const double n = static_cast<double>(p.values.size());
  const auto r2 = doubled_midranks(p.values);

  double sum_term = 0.0;
  std::size_t offset = 0;
  for (std::size_t g = 0; g < p.sizes.size(); ++g) {
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < p.sizes[g]; ++i) rank_sum += 0.5 * static_cast<double>(r2[offset + i]);
    sum_term += rank_sum * rank_sum / static_cast<double>(p.sizes[g]);
    offset += p.sizes[g];
  }
  const double h_raw = 12.0 / (n * (n + 1.0)) * sum_term - 3.0 * (n + 1.0);
  const double correction = 1.0 - tie_sum(p.values) / (n * n * n - n);

  TestResult out;
  out.test_name = "kruskal_wallis";
  out.group_sizes = p.sizes;
  const double df = static_cast<double>(groups.size() - 1);
  out.df = {df};
  if (!(correction > 0.0)) {
    out.statistic = 0.0;
    out.p_value = 1.0;
    out.method_notes = "all observations tied; H = 0";
    return out;
  }
  out.statistic = std::max(0.0, h_raw / correction);
  out.p_value = dist::chi2_sf(out.statistic, df);
  // epsilon-squared effect size
  out.effect_size = out.statistic / (n - 1.0);
  out.method_notes = "tie-corrected H; chi-square approximation with k-1 df";
  return out;
}

TestResult anova_oneway(Groups groups) {
  const Pooled p = pool(groups, "one-way ANOVA", 1);
  const double n = static_cast<double>(p.values.size());
  const double k = static_cast<double>(groups.size());
  if (n - k < 1.0) throw InsufficientDataError("one-way ANOVA needs N > k");
  const double grand = mean(p.values);
  double ssb = 0.0, ssw = 0.0;
  for (const auto& g : groups) {
    const double m = mean(g);
    ssb += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    ssw += sum_sq_dev(g, m);
  }
  if (!(ssw > 0.0)) throw DegenerateInputError("one-way ANOVA: zero within-group variance");
  TestResult out;
  out.test_name = "anova_oneway";
  out.df = {k - 1.0, n - k};
  out.statistic = (ssb / (k - 1.0)) / (ssw / (n - k));
  out.p_value = dist::f_sf(out.statistic, k - 1.0, n - k);
  out.effect_size = ssb / (ssb + ssw);  // eta-squared
  out.group_sizes = p.sizes;
  out.method_notes = "F test; effect size is eta-squared";
  return out;
}

std::vector<PairwiseResult> tukey_hsd(Groups groups, double alpha) {
  const Pooled p = pool(groups, "Tukey HSD", 1);
  const std::size_t k = groups.size();
  const double n = static_cast<double>(p.values.size());
  const double df = n - static_cast<double>(k);
  if (df < 1.0) throw InsufficientDataError("Tukey HSD needs N > k");
  std::vector<double> means(k);
  double ssw = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    means[i] = mean(groups[i]);
    ssw += sum_sq_dev(groups[i], means[i]);
  }
  const double mse = ssw / df;
  if (!(mse > 0.0)) throw DegenerateInputError("Tukey HSD: zero within-group variance");

  std::vector<PairwiseResult> out;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double ni = static_cast<double>(groups[i].size());
      const double nj = static_cast<double>(groups[j].size());
      const double se = std::sqrt(0.5 * mse * (1.0 / ni + 1.0 / nj));
      const double diff = means[i] - means[j];
      PairwiseResult pr;
      pr.first = i;
      pr.second = j;
      pr.result.test_name = "tukey_hsd";
      pr.result.statistic = std::abs(diff) / se;
      pr.result.p_value = std::clamp(1.0 - dist::ptukey(pr.result.statistic, k, df), 0.0, 1.0);
      pr.result.effect_size = diff;
      pr.result.df = {static_cast<double>(k), df};
      pr.result.group_sizes = {groups[i].size(), groups[j].size()};
      pr.result.alpha = alpha;
      pr.result.method_notes = "Tukey-Kramer; studentized range p by Gauss-Legendre quadrature";
      out.push_back(std::move(pr));
    }
  }
  return out;
}

TestResult mann_whitney_u(std::span<const double> x, std::span<const double> y,
                          MannWhitneyMethod method) {
  if (x.empty() || y.empty()) {
    throw InsufficientDataError("Mann-Whitney U needs both samples non-empty");
  }
  require_finite(x, "Mann-Whitney U");
  require_finite(y, "Mann-Whitney U");
  const std::size_t n1 = x.size(), n2 = y.size(), nt = n1 + n2;
  std::vector<double> pooled(x.begin(), x.end());
  pooled.insert(pooled.end(), y.begin(), y.end());
  const auto r2 = doubled_midranks(pooled);

  const long n1l = static_cast<long>(n1);
  long rank_sum2 = 0;
  for (std::size_t i = 0; i < n1; ++i) rank_sum2 += r2[i];
  // Doubled U keeps everything integral.
  const long u2 = rank_sum2 - n1l * (n1l + 1);
  const long center2 = n1l * static_cast<long>(n2);

  TestResult out;
  out.test_name = "mann_whitney_u";
  out.statistic = 0.5 * static_cast<double>(u2);
  out.group_sizes = {n1, n2};
  out.effect_size = out.statistic / static_cast<double>(n1 * n2);  // P(X > Y) + P(X = Y)/2

  const bool exact = method == MannWhitneyMethod::exact ||
                     (method == MannWhitneyMethod::automatic && nt <= kMannWhitneyExactLimit);
  if (exact) {
    if (nt > 24) throw ValidationError("exact Mann-Whitney enumeration limited to n1 + n2 <= 24");
    const long observed = std::abs(u2 - center2);
    std::uint64_t hits = 0, total = 0;
    for (std::uint32_t mask = 0; mask < (1u << nt); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != n1) continue;
      long s = 0;
      for (std::size_t i = 0; i < nt; ++i) {
        if (mask & (1u << i)) s += r2[i];
      }
      ++total;
      if (std::abs(s - n1l * (n1l + 1) - center2) >= observed) ++hits;
    }
    out.p_value = static_cast<double>(hits) / static_cast<double>(total);
    out.method_notes = "exact permutation distribution over all rank splits (mid-ranks)";
    return out;
  }

  const double nd = static_cast<double>(nt);
  const double var = static_cast<double>(n1 * n2) / 12.0 *
                     ((nd + 1.0) - tie_sum(pooled) / (nd * (nd - 1.0)));
  if (!(var > 0.0)) {
    out.p_value = 1.0;
    out.method_notes = "all observations tied";
    return out;
  }
  const double dev = std::abs(out.statistic - 0.5 * static_cast<double>(center2));
  const double z = std::max(0.0, dev - 0.5) / std::sqrt(var);
  out.p_value = std::min(1.0, 2.0 * dist::normal_sf(z));
  out.method_notes = "normal approximation with tie and continuity corrections";
  return out;
}

DwBand dw_band(double statistic) noexcept {
  if (statistic < 1.5) return DwBand::positive_autocorrelation;
  if (statistic > 2.5) return DwBand::negative_autocorrelation;
  return DwBand::none;
}

const char* to_string(DwBand band) noexcept {
  switch (band) {
    case DwBand::positive_autocorrelation: return "positive";
    case DwBand::negative_autocorrelation: return "negative";
    case DwBand::none: return "none";
  }
  return "none";
}

TestResult durbin_watson(std::span<const double> residuals) {
  require_size(residuals, 2, "Durbin-Watson");
  require_finite(residuals, "Durbin-Watson");
  const double den = pairwise_sum(residuals.size(), [&](std::size_t i) {
    return residuals[i] * residuals[i];
  });
  if (!(den > 0.0)) throw DegenerateInputError("Durbin-Watson: all residuals are zero");
  const double num = pairwise_sum(residuals.size() - 1, [&](std::size_t i) {
    const double d = residuals[i + 1] - residuals[i];
    return d * d;
  });
  TestResult out;
  out.test_name = "durbin_watson";
  out.statistic = num / den;
  out.group_sizes = {residuals.size()};
  out.method_notes = std::string("band: ") + to_string(dw_band(out.statistic)) +
                     " (<1.5 positive, >2.5 negative); no p-value";
  return out;
}

TestResult spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("Spearman: samples differ in length");
  require_size(x, 3, "Spearman correlation");
  require_finite(x, "Spearman correlation");
  require_finite(y, "Spearman correlation");
  const auto rx = midranks(x), ry = midranks(y);
  auto out = correlation_result("spearman", correlation(rx, ry, "Spearman correlation"), x.size());
  out.method_notes = "mid-rank ties; two-sided p from t approximation with n-2 df";
  return out;
}

TestResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("Pearson: samples differ in length");
  require_size(x, 3, "Pearson correlation");
  require_finite(x, "Pearson correlation");
  require_finite(y, "Pearson correlation");
  return correlation_result("pearson", correlation(x, y, "Pearson correlation"), x.size());
}

double cohens_d(std::span<const double> x, std::span<const double> y) {
  require_size(x, 2, "Cohen's d");
  require_size(y, 2, "Cohen's d");
  const double n1 = static_cast<double>(x.size()), n2 = static_cast<double>(y.size());
  const double pooled =
      ((n1 - 1.0) * sample_variance(x) + (n2 - 1.0) * sample_variance(y)) / (n1 + n2 - 2.0);
  if (!(pooled > 0.0)) throw DegenerateInputError("Cohen's d: pooled variance is zero");
  return (mean(x) - mean(y)) / std::sqrt(pooled);
}

RegressionFit ols(std::span<const double> y, std::span<const std::vector<double>> predictors,
                  bool include_intercept) {
  const std::size_t n = y.size();
  const std::size_t p = predictors.size() + (include_intercept ? 1 : 0);
  if (p == 0) throw ValidationError("ols needs at least one column");
  for (const auto& col : predictors) {
    if (col.size() != n) throw ValidationError("ols: predictor length differs from response");
    require_finite(col, "ols");
  }
  require_finite(y, "ols");
  if (n < p) {
    throw InsufficientDataError("ols needs at least as many observations as coefficients");
  }

  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd Y(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t c = 0;
    if (include_intercept) X(i, c++) = 1.0;
    for (const auto& col : predictors) X(i, c++) = col[i];
    Y(i) = y[i];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (static_cast<std::size_t>(qr.rank()) < p) {
    throw RankDeficientError("ols: design matrix has rank " + std::to_string(qr.rank()) +
                             " < " + std::to_string(p) + " columns");
  }
  const Eigen::VectorXd beta = qr.solve(Y);
  const Eigen::VectorXd resid = Y - X * beta;

  RegressionFit fit;
  fit.n = n;
  fit.has_intercept = include_intercept;
  fit.residual_df = n - p;
  fit.coefficients.assign(beta.data(), beta.data() + p);
  fit.residuals.assign(resid.data(), resid.data() + n);

  const double rss = resid.squaredNorm();
  double tss;
  if (include_intercept) {
    tss = sum_sq_dev(y, mean(y));
  } else {
    tss = Y.squaredNorm();
  }
  fit.r_squared = tss > 0.0 ? std::clamp(1.0 - rss / tss, 0.0, 1.0) : 0.0;
  if (!(tss > 0.0)) fit.notes = "response has zero variance; R^2 reported as 0";

  if (fit.residual_df == 0) {
    fit.notes += (fit.notes.empty() ? "" : "; ");
    fit.notes += "zero residual degrees of freedom: standard errors and p-values unavailable";
    return fit;
  }
  const double sigma2 = rss / static_cast<double>(fit.residual_df);
  // (X'X)^-1 = P R^-1 R^-T P'
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd rinv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd perm = qr.colsPermutation();
  const Eigen::MatrixXd cov = perm * (rinv * rinv.transpose()) * perm.transpose() * sigma2;
  const double tdf = static_cast<double>(fit.residual_df);
  for (std::size_t j = 0; j < p; ++j) {
    const double se = std::sqrt(std::max(0.0, cov(j, j)));
    fit.standard_errors.push_back(se);
    fit.p_values.push_back(se > 0.0 ? dist::t_two_sided_p(fit.coefficients[j] / se, tdf)
                                    : (fit.coefficients[j] == 0.0 ? 1.0 : 0.0));
  }
  const std::size_t model_df = include_intercept ? p - 1 : p;
  if (model_df > 0) {
    const double ess = tss - rss;
    if (rss > 0.0) {
      fit.f_statistic = (ess / static_cast<double>(model_df)) / sigma2;
      fit.model_p_value = dist::f_sf(*fit.f_statistic, static_cast<double>(model_df), tdf);
    } else {
      fit.model_p_value = 0.0;
    }
  }
  return fit;
}

std::vector<double> residualize(std::span<const double> y, std::span<const double> x) {
  if (x.size() != y.size()) throw ValidationError("residualize: lengths differ");
  require_size(y, 2, "residualize");
  const double mx = mean(x);
  if (!(sum_sq_dev(x, mx) > 0.0)) {
    const double my = mean(y);
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] - my;
    return out;
  }
  const std::vector<std::vector<double>> cols{std::vector<double>(x.begin(), x.end())};
  return ols(y, cols, true).residuals;
}

}  // namespace edprof
