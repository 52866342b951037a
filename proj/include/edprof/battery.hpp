#pragma once

// The falsification battery (F1-F8) and the descriptive analyses reported
// next to it, computed from per-generation summaries. Every function is a
// pure function of its inputs. A test whose design requirements are not met
// is returned as skipped with the reason instead of throwing.

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edprof/manifest.hpp"
#include "edprof/multilingual.hpp"
#include "edprof/stats.hpp"
#include "edprof/summary.hpp"

namespace edprof {

// How F1 splits the summaries. Prompt class is semantic vs neutral.
enum class PartitionScheme { per_model_class, per_model, per_model_category, pooled };
std::string_view to_string(PartitionScheme s) noexcept;
PartitionScheme parse_partition(std::string_view s);

// Cell granularity of a model's domain profile for the convergence matrix.
enum class ProfileGranularity { domain, domain_temperature, prompt };
std::string_view to_string(ProfileGranularity g) noexcept;
ProfileGranularity parse_granularity(std::string_view s);

struct TestOutcome {
  std::string id;         // "F1" ... "F8", "neutral_gradient"
  std::string partition;  // e.g. "model=a/class=neutral"; empty for a global test
  std::size_t n = 0;      // summaries consumed
  std::optional<TestResult> result;
  std::optional<RegressionFit> fit;
  // Post-hoc comparisons; indices refer to `labels`.
  std::vector<PairwiseResult> posthoc;
  std::vector<std::string> labels;
  // Group labels in ascending order of mean ED, when the test orders groups.
  std::vector<std::string> ordering;
  std::vector<std::string> notes;
  std::string skip_reason;

  bool skipped() const noexcept { return !result && !fit; }
};

struct PartitionCount {
  std::string partition;
  std::size_t n = 0;
};

struct IntrinsicFraction {
  std::string model;
  std::optional<double> neutral_mean;   // unweighted mean of category means
  std::optional<double> semantic_mean;  // unweighted mean of category means
  std::optional<double> fraction;
};

struct CellMean {
  std::string group;  // model name or architecture label
  std::string cell;   // category name, temperature, language ...
  double mean = 0.0;
  double sd = 0.0;  // sample sd; 0 for a single value
  std::size_t n = 0;
};

struct TemperatureSensitivity {
  std::string model;
  std::vector<CellMean> levels;
  std::optional<double> r_raw;     // Pearson (T, ed_mean) over generations
  std::optional<double> p_raw;
  std::optional<double> r_levels;  // Pearson over level means (>= 3 levels)
};

struct ConvergenceMatrix {
  ProfileGranularity granularity = ProfileGranularity::domain;
  std::vector<std::string> models;
  // rho[i][j]: Spearman over the cells both profiles share; empty when fewer
  // than three shared cells or a profile is constant.
  std::vector<std::vector<std::optional<double>>> rho;
  std::vector<std::vector<std::size_t>> shared_cells;
};

struct BatteryOptions {
  PartitionScheme partition = PartitionScheme::per_model_class;
  ProfileGranularity granularity = ProfileGranularity::domain;
  double alpha = 0.05;
  Language baseline_language = Language::EN;
  // Empty selects everything. Names: F1..F8, neutral_gradient, convergence,
  // tables.
  std::set<std::string> analyses;
};

inline constexpr std::array<std::string_view, 11> kAnalysisNames = {
    "F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8", "neutral_gradient", "convergence", "tables"};

// Throws ValidationError naming the first unknown analysis.
void validate_analyses(const std::set<std::string>& names);

struct BatteryReport {
  std::size_t input_count = 0;
  BatteryOptions options;
  std::vector<TestOutcome> tests;
  std::vector<PartitionCount> f1_partitions;  // counts sum to input_count
  std::vector<IntrinsicFraction> intrinsic;
  std::vector<CellMean> neutral_means;        // per model and per architecture
  std::vector<CellMean> domain_means;         // per model, semantic categories
  std::vector<CellMean> category_means;       // per model, all categories
  std::vector<CellMean> language_means;       // per model
  std::vector<TemperatureSensitivity> temperature;
  std::optional<ConvergenceMatrix> convergence;
  std::optional<MultilingualAnalysis> multilingual;
  std::vector<std::string> warnings;
};

// neutral / semantic.
double intrinsic_fraction(double neutral_mean, double semantic_mean);

std::vector<TestOutcome> f1_nonzero(std::span<const GenerationSummary> s, PartitionScheme scheme,
                                    std::vector<PartitionCount>* counts = nullptr);
std::vector<TestOutcome> f2_domains(std::span<const GenerationSummary> s, double alpha = 0.05);
// Transformer models only. Two fits: ED on ln(param_count) over per-model
// means, and over individual generations.
std::vector<TestOutcome> f3_size_effect(std::span<const GenerationSummary> s);
std::vector<TestOutcome> f4_temperature(std::span<const GenerationSummary> s, double alpha = 0.05,
                                        std::vector<TemperatureSensitivity>* sensitivity = nullptr);
// From the per-generation Durbin-Watson values carried by the summaries.
std::vector<TestOutcome> f5_autocorrelation(std::span<const GenerationSummary> s);
// From raw per-position ED series; each series is mean-centred first.
TestOutcome f5_autocorrelation_series(std::span<const std::vector<double>> series);
std::vector<TestOutcome> f6_intrinsic(std::span<const GenerationSummary> s,
                                      std::vector<IntrinsicFraction>* fractions = nullptr);
std::vector<TestOutcome> f7_multilingual(std::span<const GenerationSummary> s,
                                         Language baseline = Language::EN);
std::vector<TestOutcome> f8_drift(std::span<const GenerationSummary> s);

std::vector<TestOutcome> neutral_gradient(std::span<const GenerationSummary> s,
                                          std::vector<CellMean>* means = nullptr);

ConvergenceMatrix domain_profile_convergence(std::span<const GenerationSummary> s,
                                             ProfileGranularity granularity);

// The tokenizer profile, when given, supplies vocabulary allocation to the
// multilingual table.
BatteryReport run_battery(std::span<const GenerationSummary> s, const BatteryOptions& options,
                          const TokenizerProfile* profile = nullptr);

}  // namespace edprof
