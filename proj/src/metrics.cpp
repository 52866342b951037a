#include "edprof/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "edprof/error.hpp"
#include "edprof/numeric.hpp"

namespace edprof {
namespace {

template <class T>
void validate_mass(std::span<const T> mass, double tolerance) {
  if (mass.size() < 2) {
    throw ValidationError("probability vector needs at least 2 entries, got " +
                          std::to_string(mass.size()));
  }
  for (std::size_t i = 0; i < mass.size(); ++i) {
    const double v = static_cast<double>(mass[i]);
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError("probability entry " + std::to_string(i) +
                            " is negative or non-finite");
    }
  }
  const double total =
      pairwise_sum(mass.size(), [&](std::size_t i) { return static_cast<double>(mass[i]); });
  if (std::abs(total - 1.0) > tolerance) {
    throw ValidationError("probability vector sums to " + std::to_string(total) +
                          ", outside tolerance of 1");
  }
}

template <class T>
double entropy_kernel(std::span<const T> mass) {
  return pairwise_sum(mass.size(), [&](std::size_t i) {
    const double p = static_cast<double>(mass[i]);
    // 0 log 0 := 0
    if (p == 0.0) return 0.0;
    return -p * std::log(p);
  });
}

template <class T>
double logit_entropy_kernel(std::span<const T> logits, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ValidationError("temperature must be finite and > 0");
  }
  if (logits.size() < 2) {
    throw ValidationError("logit vector needs at least 2 entries");
  }
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double z = static_cast<double>(logits[i]);
    if (!std::isfinite(z)) {
      throw ValidationError("non-finite logit at index " + std::to_string(i));
    }
    m = std::max(m, z);
  }
  const double inv_t = 1.0 / temperature;
  // Shifted scaled scores d_i = (m - z_i) / T >= 0.
  const double s = pairwise_sum(logits.size(), [&](std::size_t i) {
    return std::exp(-(m - static_cast<double>(logits[i])) * inv_t);
  });
  const double weighted = pairwise_sum(logits.size(), [&](std::size_t i) {
    const double d = (m - static_cast<double>(logits[i])) * inv_t;
    return d == 0.0 ? 0.0 : std::exp(-d) * d;
  });
  return std::log(s) + weighted / s;
}

}  // namespace

ProbDist::ProbDist(std::vector<double> mass) : mass_(std::move(mass)) {
  validate_mass(std::span<const double>(mass_), kNormTolerance);
}

ProbDist ProbDist::uniform(std::size_t vocab_size) {
  if (vocab_size < 2) throw ValidationError("vocab_size must be >= 2");
  return ProbDist(std::vector<double>(vocab_size, 1.0 / static_cast<double>(vocab_size)));
}

ProbDist ProbDist::one_hot(std::size_t vocab_size, std::size_t index) {
  if (vocab_size < 2) throw ValidationError("vocab_size must be >= 2");
  if (index >= vocab_size) throw ValidationError("one-hot index out of range");
  std::vector<double> m(vocab_size, 0.0);
  m[index] = 1.0;
  return ProbDist(std::move(m));
}

LogitVector::LogitVector(std::vector<double> logits) : logits_(std::move(logits)) {
  if (logits_.size() < 2) throw ValidationError("logit vector needs at least 2 entries");
  for (std::size_t i = 0; i < logits_.size(); ++i) {
    if (!std::isfinite(logits_[i])) {
      throw ValidationError("non-finite logit at index " + std::to_string(i));
    }
  }
}

double entropy(const ProbDist& p) { return entropy_kernel(p.mass()); }

double ed_from_entropy(double entropy_nats, std::size_t vocab_size) {
  if (vocab_size < 2) throw ValidationError("vocab_size must be >= 2");
  const double v = 1.0 - entropy_nats / std::log(static_cast<double>(vocab_size));
  return std::clamp(v, 0.0, 1.0);
}

double ed(const ProbDist& p) { return ed_from_entropy(entropy(p), p.vocab_size()); }

double kl_from_uniform(const ProbDist& p) {
  const auto mass = p.mass();
  const double v = static_cast<double>(mass.size());
  return pairwise_sum(mass.size(), [&](std::size_t i) {
    const double pi = mass[i];
    if (pi == 0.0) return 0.0;
    return pi * std::log(pi * v);
  });
}

SequenceEDProfile ed_sequence(std::span<const ProbDist> per_position, StdConvention convention) {
  if (per_position.empty()) throw ValidationError("ed_sequence needs at least one position");
  SequenceEDProfile out;
  out.per_position_ed.reserve(per_position.size());
  for (const auto& p : per_position) out.per_position_ed.push_back(ed(p));

  const auto& xs = out.per_position_ed;
  const std::size_t n = xs.size();
  out.ed_mean = pairwise_sum(n, [&](std::size_t i) { return xs[i]; }) / static_cast<double>(n);
  if (n > 1) {
    const double ss = pairwise_sum(n, [&](std::size_t i) {
      const double d = xs[i] - out.ed_mean;
      return d * d;
    });
    const double denom =
        convention == StdConvention::sample ? static_cast<double>(n - 1) : static_cast<double>(n);
    out.ed_std = std::sqrt(ss / denom);
  }
  return out;
}

ProbDist softmax_with_temperature(const LogitVector& z, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ValidationError("temperature must be finite and > 0");
  }
  const auto logits = z.logits();
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> w(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) w[i] = std::exp((logits[i] - m) / temperature);
  const double s = pairwise_sum(w.size(), [&](std::size_t i) { return w[i]; });
  for (auto& x : w) x /= s;
  return ProbDist(std::move(w));
}

double zipf_ed(const ZipfParams& params) {
  if (!std::isfinite(params.alpha) || params.alpha < 0.0) {
    throw ValidationError("zipf alpha must be finite and >= 0");
  }
  if (params.vocab_size < 2) throw ValidationError("vocab_size must be >= 2");
  const double alpha = params.alpha;
  const std::size_t v = params.vocab_size;
  // Z = sum i^-a,  A = sum i^-a ln i,  H = ln Z + a A / Z
  const double z = pairwise_sum(v, [&](std::size_t k) {
    return std::exp(-alpha * std::log(static_cast<double>(k + 1)));
  });
  const double a = pairwise_sum(v, [&](std::size_t k) {
    const double li = std::log(static_cast<double>(k + 1));
    return std::exp(-alpha * li) * li;
  });
  const double h = std::log(z) + alpha * a / z;
  return ed_from_entropy(h, v);
}

double entropy_to_perplexity(double entropy_nats) {
  if (!(entropy_nats >= 0.0)) throw ValidationError("entropy must be >= 0");
  return std::exp(entropy_nats);
}

double entropy_of_masses(std::span<const double> mass) {
  validate_mass(mass, kNormTolerance);
  return entropy_kernel(mass);
}

double entropy_of_masses(std::span<const float> mass) {
  validate_mass(mass, kNormToleranceF32);
  return entropy_kernel(mass);
}

double logit_entropy(std::span<const double> logits, double temperature) {
  return logit_entropy_kernel(logits, temperature);
}

double logit_entropy(std::span<const float> logits, double temperature) {
  return logit_entropy_kernel(logits, temperature);
}

void EdAccumulator::add(double ed_value) {
  if (n_ > 0) {
    const double step = ed_value - prev_;
    sum_sq_diff_ += step * step;
  }
  ++n_;
  const double delta = ed_value - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (ed_value - mean_);
  prev_ = ed_value;
}

double EdAccumulator::stddev(StdConvention convention) const {
  if (n_ < 2) return 0.0;
  const double denom =
      convention == StdConvention::sample ? static_cast<double>(n_ - 1) : static_cast<double>(n_);
  return std::sqrt(std::max(0.0, m2_) / denom);
}

std::optional<double> EdAccumulator::durbin_watson() const {
  if (n_ < 2 || !(m2_ > 0.0)) return std::nullopt;
  return sum_sq_diff_ / m2_;
}

}  // namespace edprof
