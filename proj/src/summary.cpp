#include "edprof/summary.hpp"

#include <fstream>

#include "edprof/error.hpp"
#include "json_io.hpp"

namespace edprof {

using nlohmann::json;

GenerationSummary summarize_stream(StreamReader& reader, const SummarizeOptions& options) {
  const StreamHeader& header = reader.header();
  const bool logits = header.value_kind == ValueKind::raw_logits;
  if (!logits && options.recorded_temperature &&
      *options.recorded_temperature != options.temperature) {
    throw ValidationError("probability stream recorded at T=" +
                          std::to_string(*options.recorded_temperature) +
                          " cannot be summarized at T=" + std::to_string(options.temperature));
  }
  if (logits && !(options.temperature > 0.0)) {
    throw ValidationError("temperature must be > 0");
  }

  EdAccumulator acc;
  double entropy_sum = 0.0;
  std::vector<bool> seen(header.vocab_size, false);
  std::uint32_t unique = 0;
  std::uint32_t expected_index = 0;

  try {
    while (const PositionRecord* rec = reader.next()) {
      if (rec->position_index != expected_index) {
        throw ValidationError("non-contiguous position_index " +
                              std::to_string(rec->position_index) + " (expected " +
                              std::to_string(expected_index) + ")");
      }
      ++expected_index;
      const double h = std::visit(
          [&](const auto& vals) {
            using T = typename std::decay_t<decltype(vals)>::value_type;
            const std::span<const T> view(vals);
            return logits ? logit_entropy(view, options.temperature) : entropy_of_masses(view);
          },
          rec->values);
      entropy_sum += h;
      acc.add(ed_from_entropy(h, header.vocab_size));
      if (!seen[rec->sampled_token_id]) {
        seen[rec->sampled_token_id] = true;
        ++unique;
      }
    }
  } catch (const ValidationError&) {
    // A corrupted payload byte can surface as an invalid value before the
    // trailer is reached; prefer the checksum verdict when it disagrees.
    if (!reader.finished()) reader.drain();
    throw;
  }

  if (acc.count() == 0) throw ValidationError("stream has no position records");
  GenerationSummary s;
  s.ed_mean = acc.mean();
  s.ed_std = acc.stddev(options.std_convention);
  s.length = static_cast<std::uint32_t>(acc.count());
  s.unique_token_count = unique;
  s.mean_entropy = entropy_sum / static_cast<double>(acc.count());
  s.durbin_watson = acc.durbin_watson();
  return s;
}

void write_summaries(const std::filesystem::path& path, std::span<const SummaryEntry> entries) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write summaries " + path.string());
  for (const auto& e : entries) {
    json j;
    j["row"] = detail::row_to_json(e.row);
    if (e.summary) {
      const auto& s = *e.summary;
      j["status"] = "ok";
      j["ed_mean"] = s.ed_mean;
      j["ed_std"] = s.ed_std;
      j["length"] = s.length;
      j["unique_token_count"] = s.unique_token_count;
      j["mean_entropy"] = s.mean_entropy;
      if (s.durbin_watson) j["durbin_watson"] = *s.durbin_watson;
    } else {
      j["status"] = "failed";
      j["error"] = e.error;
    }
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("failed writing summaries " + path.string());
}

std::vector<SummaryEntry> read_summaries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open summaries " + path.string());
  std::vector<SummaryEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      SummaryEntry e;
      e.row = detail::row_from_json(j.at("row"));
      if (j.at("status").get<std::string>() == "ok") {
        GenerationSummary s;
        s.row = e.row;
        s.ed_mean = j.at("ed_mean").get<double>();
        s.ed_std = j.at("ed_std").get<double>();
        s.length = j.at("length").get<std::uint32_t>();
        s.unique_token_count = j.at("unique_token_count").get<std::uint32_t>();
        s.mean_entropy = j.at("mean_entropy").get<double>();
        if (j.contains("durbin_watson")) s.durbin_watson = j["durbin_watson"].get<double>();
        e.summary = std::move(s);
      } else {
        e.error = j.value("error", std::string("unknown error"));
      }
      out.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": malformed summary line: " + ex.what());
    }
  }
  return out;
}

std::vector<GenerationSummary> successful(std::span<const SummaryEntry> entries) {
  std::vector<GenerationSummary> out;
  for (const auto& e : entries) {
    if (e.summary) out.push_back(*e.summary);
  }
  return out;
}

}  // namespace edprof
