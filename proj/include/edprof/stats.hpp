#pragma once

// Statistical procedures used by the falsification battery and the
// multilingual analysis. Inputs are plain real-valued samples; outputs are
// TestResult or RegressionFit. Degenerate input (too few observations, zero
// variance, rank-deficient design) raises a typed StatsError and never
// produces NaN.
//
// Conventions: mid-ranks for ties; tie corrections in Kruskal-Wallis and
// Mann-Whitney; two-sided p-values throughout.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace edprof {

struct TestResult {
  std::string test_name;
  double statistic = 0.0;
  // Absent for statistics reported without a p-value (Durbin-Watson).
  std::optional<double> p_value;
  std::optional<double> effect_size;
  std::vector<double> df;
  std::vector<std::size_t> group_sizes;
  std::string method_notes;
  double alpha = 0.05;

  bool significant() const noexcept { return p_value && *p_value < alpha; }
};

struct PairwiseResult {
  std::size_t first = 0;
  std::size_t second = 0;
  TestResult result;
};

struct RegressionFit {
  // Intercept first when present, then one slope per predictor column.
  std::vector<double> coefficients;
  // Empty when the residual degrees of freedom are zero.
  std::vector<double> standard_errors;
  std::vector<double> p_values;
  double r_squared = 0.0;
  std::vector<double> residuals;
  std::size_t n = 0;
  std::size_t residual_df = 0;
  bool has_intercept = true;
  std::optional<double> f_statistic;
  std::optional<double> model_p_value;
  std::string notes;

  // Coefficient index of predictor column j.
  std::size_t slope_index(std::size_t j) const noexcept { return has_intercept ? j + 1 : j; }
};

using Groups = std::span<const std::vector<double>>;

// Descriptives.
double mean(std::span<const double> x);
// Sample variance (n - 1 denominator); requires n >= 2.
double sample_variance(std::span<const double> x);
// Mid-ranks (1-based), ties share the average of their positions.
std::vector<double> midranks(std::span<const double> x);

TestResult t_one_sample(std::span<const double> x, double mu0);
TestResult t_paired(std::span<const double> x, std::span<const double> y);

TestResult kruskal_wallis(Groups groups);
TestResult anova_oneway(Groups groups);
// Tukey-Kramer pairwise comparisons (unequal group sizes allowed). Each
// result's statistic is the studentized range q, effect_size the mean
// difference (first - second).
std::vector<PairwiseResult> tukey_hsd(Groups groups, double alpha = 0.05);

enum class MannWhitneyMethod { automatic, exact, normal };
// statistic = U for x (number of (x, y) pairs with x > y, ties counted 1/2).
// automatic: exact enumeration when n1 + n2 <= 12, otherwise the normal
// approximation with tie and continuity corrections.
TestResult mann_whitney_u(std::span<const double> x, std::span<const double> y,
                          MannWhitneyMethod method = MannWhitneyMethod::automatic);
inline constexpr std::size_t kMannWhitneyExactLimit = 12;

enum class DwBand { positive_autocorrelation, none, negative_autocorrelation };
DwBand dw_band(double statistic) noexcept;
const char* to_string(DwBand band) noexcept;
// DW = sum (e_t - e_{t-1})^2 / sum e_t^2 on the series as given. No p-value.
TestResult durbin_watson(std::span<const double> residuals);

TestResult spearman(std::span<const double> x, std::span<const double> y);
TestResult pearson(std::span<const double> x, std::span<const double> y);

// (mean x - mean y) / pooled sample standard deviation.
double cohens_d(std::span<const double> x, std::span<const double> y);

// Least squares through a column-pivoted Householder QR.
RegressionFit ols(std::span<const double> y, std::span<const std::vector<double>> predictors,
                  bool include_intercept = true);

// Residuals of y regressed on x with intercept. A constant x reduces to
// centering y.
std::vector<double> residualize(std::span<const double> y, std::span<const double> x);

}  // namespace edprof
