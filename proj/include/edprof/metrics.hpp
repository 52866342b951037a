#pragma once

// Entropic Deviation and related measures over next-token distributions.
//
// ED(p) = 1 - H(p) / ln V, where H is the Shannon entropy in nats and V the
// vocabulary size. ED is 0 for the uniform distribution and 1 for a point mass.
// All logarithms are natural; all accumulation is in double with pairwise
// summation regardless of the input width.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace edprof {

// Absolute tolerance on |sum(p) - 1| for double-precision input.
inline constexpr double kNormTolerance = 1e-9;
// binary32 probabilities cannot meet 1e-9: each entry carries up to 2^-24
// relative rounding, so the sum may drift by up to 2^-24.
inline constexpr double kNormToleranceF32 = 1e-9 + 5.9604644775390625e-08;

enum class StdConvention { sample, population };

// A validated probability vector: entries >= 0, sum within kNormTolerance of 1,
// at least two entries. Never renormalized.
class ProbDist {
 public:
  explicit ProbDist(std::vector<double> mass);

  static ProbDist uniform(std::size_t vocab_size);
  static ProbDist one_hot(std::size_t vocab_size, std::size_t index);

  std::span<const double> mass() const noexcept { return mass_; }
  std::size_t vocab_size() const noexcept { return mass_.size(); }

 private:
  std::vector<double> mass_;
};

// Unnormalized scores; all entries finite, at least two entries.
class LogitVector {
 public:
  explicit LogitVector(std::vector<double> logits);

  std::span<const double> logits() const noexcept { return logits_; }
  std::size_t vocab_size() const noexcept { return logits_.size(); }

 private:
  std::vector<double> logits_;
};

struct SequenceEDProfile {
  std::vector<double> per_position_ed;
  double ed_mean = 0.0;
  double ed_std = 0.0;
};

struct ZipfParams {
  double alpha = 1.0;
  std::size_t vocab_size = 2;
};

double entropy(const ProbDist& p);
double ed(const ProbDist& p);
// D_KL(p || uniform), computed term by term as sum p_i ln(p_i V). Independent
// of entropy(); ED(p) == kl_from_uniform(p) / ln V.
double kl_from_uniform(const ProbDist& p);

// ED from an entropy value over a vocabulary of the given size, clamped to [0,1].
double ed_from_entropy(double entropy_nats, std::size_t vocab_size);

SequenceEDProfile ed_sequence(std::span<const ProbDist> per_position,
                              StdConvention convention = StdConvention::sample);

ProbDist softmax_with_temperature(const LogitVector& z, double temperature);

double zipf_ed(const ZipfParams& params);

double entropy_to_perplexity(double entropy_nats);

// Span kernels used by the streaming path. They validate like ProbDist but do
// not copy. binary32 input uses kNormToleranceF32.
double entropy_of_masses(std::span<const double> mass);
double entropy_of_masses(std::span<const float> mass);

// Entropy of softmax(z / T) computed in log space:
//   H = ln S + sum_i w_i (m - s_i) / S,  s_i = z_i / T, m = max s, w_i = exp(s_i - m)
// so tiny probabilities are never materialized.
double logit_entropy(std::span<const double> logits, double temperature);
double logit_entropy(std::span<const float> logits, double temperature);

// Single-pass accumulator over per-position ED values (Welford). Also tracks
// the Durbin-Watson ratio of the mean-centered series.
class EdAccumulator {
 public:
  void add(double ed_value);

  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  // 0 for a single observation regardless of convention.
  double stddev(StdConvention convention = StdConvention::sample) const;
  // sum (x_t - x_{t-1})^2 / sum (x_t - mean)^2; empty when undefined
  // (fewer than two values or zero variance).
  std::optional<double> durbin_watson() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double prev_ = 0.0;
  double sum_sq_diff_ = 0.0;
};

}  // namespace edprof
