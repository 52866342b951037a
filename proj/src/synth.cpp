#include "edprof/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "edprof/error.hpp"
#include "edprof/random.hpp"

namespace edprof {
namespace {

constexpr double kTargetFloor = 1e-6;
constexpr double kMeanFloor = 0.02;
constexpr double kMaxVarianceShare = 0.95;
constexpr double kTransformerLevel = 0.31;
constexpr double kSsmLow = 0.796;
constexpr double kSsmHigh = 0.440;

// ED of the hot-token distribution with logit s against V - 1 zeros.
double hot_ed(double s, double vocab) {
  const double rest = (vocab - 1.0) * std::exp(-s);
  const double lse = s + std::log1p(rest);
  const double q = 1.0 / (1.0 + rest);
  return 1.0 - (lse - s * q) / std::log(vocab);
}

double draw_target(rng::Engine& e, double m, double sd) {
  double var = sd * sd;
  const double cap = kMaxVarianceShare * m * (1.0 - m);
  var = std::min(var, cap);
  double x = m;
  if (var > 0.0) {
    const double k = m * (1.0 - m) / var - 1.0;
    x = e.beta(m * k, (1.0 - m) * k);
  }
  return std::clamp(x, kTargetFloor, 1.0 - kTargetFloor);
}

}  // namespace

std::string_view to_string(Regime r) noexcept {
  return r == Regime::ssm_like ? "ssm_like" : "transformer_like";
}

Regime parse_regime(std::string_view s) {
  if (s == "transformer_like") return Regime::transformer_like;
  if (s == "ssm_like") return Regime::ssm_like;
  throw ValidationError("unknown regime '" + std::string(s) + "'");
}

double regime_level(Regime regime, double temperature) {
  if (regime == Regime::transformer_like) return kTransformerLevel;
  const double f = (temperature - kSynthLowT) / (kSynthHighT - kSynthLowT);
  return std::clamp(kSsmLow + f * (kSsmHigh - kSsmLow), kMeanFloor, 1.0 - kMeanFloor);
}

SynthConfig regime_config(Regime regime, std::uint32_t generations_per_cell, std::uint64_t seed,
                          std::span<const double> temperatures,
                          std::span<const PromptCategory> categories) {
  static constexpr double kDefaultTemps[] = {0.7, 1.0, 1.3};
  if (temperatures.empty()) temperatures = kDefaultTemps;
  if (categories.empty()) categories = kAllCategories;

  SynthConfig c;
  c.seed = seed;
  if (regime == Regime::transformer_like) {
    c.model_name = "synth-transformer";
    c.architecture = Architecture::transformer;
    c.between_sd = 0.01;
  } else {
    c.model_name = "synth-ssm";
    c.architecture = Architecture::ssm;
    c.param_count = 2700000000ull;
    c.between_sd = 0.02;
  }
  // Within-sequence sd: 0.44 for transformers, 0.15 for the SSM.
  const double within = regime == Regime::transformer_like ? 0.44 : 0.15;
  for (double t : temperatures) {
    for (auto cat : categories) {
      SynthCell cell;
      cell.category = cat;
      cell.temperature = t;
      cell.ed_mean = regime_level(regime, t);
      cell.within_sd = within;
      cell.generations = generations_per_cell;
      c.cells.push_back(cell);
    }
  }
  return c;
}

double hot_token_logit(double target_ed, std::uint32_t vocab_size) {
  if (vocab_size < 2) throw ValidationError("vocab_size must be >= 2");
  if (!(target_ed >= 0.0 && target_ed < 1.0)) throw ValidationError("target ED must lie in [0, 1)");
  const double v = static_cast<double>(vocab_size);
  double lo = 0.0, hi = 1.0;
  while (hot_ed(hi, v) < target_ed) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (hot_ed(mid, v) < target_ed ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<ManifestRow> synthesize(const SynthConfig& config, const std::filesystem::path& out_dir) {
  if (config.vocab_size < 2) throw ValidationError("synth: vocab_size must be >= 2");
  if (config.length == 0) throw ValidationError("synth: length must be > 0");
  if (config.cells.empty()) throw ValidationError("synth: no cells configured");
  for (const auto& c : config.cells) {
    if (!(c.temperature > 0.0)) throw ValidationError("synth: temperature must be > 0");
    if (!(c.ed_mean > 0.0 && c.ed_mean < 1.0)) throw ValidationError("synth: ed_mean must lie in (0, 1)");
    if (c.within_sd < 0.0) throw ValidationError("synth: within_sd must be >= 0");
  }

  const auto stream_dir = out_dir / "streams";
  std::error_code ec;
  std::filesystem::create_directories(stream_dir, ec);
  if (ec) throw IoError("cannot create " + stream_dir.string() + ": " + ec.message());

  const double v = static_cast<double>(config.vocab_size);
  std::vector<ManifestRow> rows;
  std::uint32_t index = config.first_generation_index;
  for (const auto& cell : config.cells) {
    for (std::uint32_t g = 0; g < cell.generations; ++g, ++index) {
      rng::Engine e(rng::derive(config.seed, index));

      ManifestRow row;
      row.model_name = config.model_name;
      row.architecture = config.architecture;
      row.param_count = config.param_count;
      row.vocab_size = config.vocab_size;
      row.prompt_category = cell.category;
      row.prompt_text_ref = "synth/" + std::string(to_string(cell.category)) + "/" +
                            std::string(to_string(cell.language));
      row.language = cell.language;
      row.temperature = cell.temperature;
      row.seed = g;
      row.generation_index = index;
      row.prompt_char_count = cell.prompt_char_count;
      row.prompt_token_count = cell.prompt_token_count;
      row.stream_path = "streams/" + config.model_name + "-" + std::to_string(index) + ".edls";

      StreamHeader h;
      h.value_kind = ValueKind::raw_logits;
      h.value_width = config.width;
      h.vocab_size = config.vocab_size;
      h.position_count_hint = config.length;
      h.metadata_digest = metadata_digest(row);
      h.generation_id = config.model_name + "-" + std::to_string(index);

      const double gen_mean =
          std::clamp(cell.ed_mean + config.between_sd * e.normal() +
                         config.drift_per_generation * static_cast<double>(index),
                     kMeanFloor, 1.0 - kMeanFloor);

      const auto path = out_dir / row.stream_path;
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot write " + path.string());
      StreamWriter w(out, h);
      PositionRecord rec;
      std::vector<float> f32;
      std::vector<double> f64;
      for (std::uint32_t t = 0; t < config.length; ++t) {
        const double s = hot_token_logit(draw_target(e, gen_mean, cell.within_sd), config.vocab_size);
        const auto hot = static_cast<std::uint32_t>(e.index(config.vocab_size));
        const double q = 1.0 / (1.0 + (v - 1.0) * std::exp(-s));
        std::uint32_t sampled = hot;
        if (e.uniform() >= q) {
          sampled = static_cast<std::uint32_t>(e.index(config.vocab_size - 1));
          if (sampled >= hot) ++sampled;
        }
        rec.position_index = t;
        rec.sampled_token_id = sampled;
        const double z = cell.temperature * s;
        if (config.width == ValueWidth::binary32) {
          f32.assign(config.vocab_size, 0.0f);
          f32[hot] = static_cast<float>(z);
          rec.values = f32;
        } else {
          f64.assign(config.vocab_size, 0.0);
          f64[hot] = z;
          rec.values = f64;
        }
        w.write(rec);
      }
      w.finish();
      if (!out) throw IoError("failed writing " + path.string());
      rows.push_back(std::move(row));
    }
  }
  validate_manifest(rows);
  return rows;
}

}  // namespace edprof
