#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edprof/manifest.hpp"
#include "edprof/metrics.hpp"
#include "edprof/stream.hpp"

namespace edprof {

struct GenerationSummary {
  ManifestRow row;
  double ed_mean = 0.0;
  double ed_std = 0.0;
  std::uint32_t length = 0;
  std::uint32_t unique_token_count = 0;
  double mean_entropy = 0.0;  // nats
  // Durbin-Watson ratio of the mean-centered per-position ED series.
  std::optional<double> durbin_watson;
};

struct SummarizeOptions {
  // Applied to raw logits via softmax(z / T).
  double temperature = 1.0;
  // For probability streams: the temperature at which the probabilities were
  // recorded. If given it must equal `temperature`; values are used as-is.
  std::optional<double> recorded_temperature;
  StdConvention std_convention = StdConvention::sample;
};

// Single pass over the stream. Working memory is the reader's record buffer
// plus a vocab_size bitmap for unique-token counting, independent of length.
// Position indices must be contiguous from 0. The returned summary has a
// default-constructed row; callers attach the manifest row.
GenerationSummary summarize_stream(StreamReader& reader, const SummarizeOptions& options);

// One line of a summaries.jsonl file: the manifest row plus either the
// summary statistics or the error that prevented them.
struct SummaryEntry {
  ManifestRow row;
  std::optional<GenerationSummary> summary;
  std::string error;
};

void write_summaries(const std::filesystem::path& path, std::span<const SummaryEntry> entries);
std::vector<SummaryEntry> read_summaries(const std::filesystem::path& path);
std::vector<GenerationSummary> successful(std::span<const SummaryEntry> entries);

}  // namespace edprof
