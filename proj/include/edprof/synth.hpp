#pragma once

// Synthetic generations with planted ED trajectories, for validating the
// pipeline end to end without a model. Each position's distribution is a
// "hot token" distribution (one token with logit s, the rest 0) whose ED hits
// a drawn target exactly; targets are Beta distributed around a per-generation
// mean. Streams store raw logits scaled by the row temperature, so
// summarizing at that temperature recovers the planted values.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edprof/manifest.hpp"
#include "edprof/stream.hpp"

namespace edprof {

enum class Regime { transformer_like, ssm_like };
std::string_view to_string(Regime r) noexcept;
Regime parse_regime(std::string_view s);

struct SynthCell {
  PromptCategory category = PromptCategory::news;
  Language language = Language::EN;
  double temperature = 1.0;
  double ed_mean = 0.3;    // planted mean of per-position ED
  double within_sd = 0.1;  // planted sd of per-position ED within a generation
  std::uint32_t generations = 1;
  std::optional<std::uint64_t> prompt_char_count;
  std::optional<std::uint64_t> prompt_token_count;
};

struct SynthConfig {
  std::string model_name = "synth";
  Architecture architecture = Architecture::transformer;
  std::uint64_t param_count = 1000000000;
  std::uint32_t vocab_size = 256;
  std::uint32_t length = 96;
  ValueWidth width = ValueWidth::binary32;
  double between_sd = 0.01;            // sd of generation means around the cell mean
  double drift_per_generation = 0.0;   // added ED per unit of generation_index
  std::uint64_t seed = 0;
  std::uint32_t first_generation_index = 0;
  std::vector<SynthCell> cells;
};

inline constexpr double kSynthLowT = 0.7;
inline constexpr double kSynthHighT = 1.3;

// Planted ED level of a regime at temperature T. transformer_like is flat at
// 0.31; ssm_like runs linearly from 0.796 at T = 0.7 to 0.440 at T = 1.3.
double regime_level(Regime regime, double temperature);

// One cell per (temperature, category) with `generations_per_cell` each.
SynthConfig regime_config(Regime regime, std::uint32_t generations_per_cell, std::uint64_t seed,
                          std::span<const double> temperatures = {},
                          std::span<const PromptCategory> categories = {});

// Logit s of the hot token that gives the requested ED over `vocab_size`
// tokens. ED must lie in [0, 1).
double hot_token_logit(double target_ed, std::uint32_t vocab_size);

// Writes <out_dir>/streams/<model>-<index>.edls for every generation and
// returns the manifest rows (stream_path relative to out_dir), in generation
// order. Deterministic in the config.
std::vector<ManifestRow> synthesize(const SynthConfig& config, const std::filesystem::path& out_dir);

}  // namespace edprof
