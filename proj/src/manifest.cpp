#include "edprof/manifest.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <tuple>

#include "edprof/checksum.hpp"
#include "edprof/error.hpp"
#include "json_io.hpp"

namespace edprof {

using nlohmann::json;

bool is_neutral(PromptCategory c) noexcept {
  switch (c) {
    case PromptCategory::empty:
    case PromptCategory::random_ascii:
    case PromptCategory::explicit_randomness:
    case PromptCategory::neutral_stub:
    case PromptCategory::nonsense_syllables:
      return true;
    default:
      return false;
  }
}

std::string_view to_string(Architecture a) noexcept {
  return a == Architecture::ssm ? "ssm" : "transformer";
}

std::string_view to_string(PromptCategory c) noexcept {
  switch (c) {
    case PromptCategory::wikipedia: return "wikipedia";
    case PromptCategory::news: return "news";
    case PromptCategory::fiction: return "fiction";
    case PromptCategory::code: return "code";
    case PromptCategory::empty: return "empty";
    case PromptCategory::random_ascii: return "random_ascii";
    case PromptCategory::explicit_randomness: return "explicit_randomness";
    case PromptCategory::neutral_stub: return "neutral_stub";
    case PromptCategory::nonsense_syllables: return "nonsense_syllables";
  }
  return "empty";
}

std::string_view to_string(Language l) noexcept {
  switch (l) {
    case Language::EN: return "EN";
    case Language::JA: return "JA";
    case Language::ZH: return "ZH";
    case Language::PL: return "PL";
    case Language::AR: return "AR";
    case Language::other: return "other";
  }
  return "other";
}

Architecture parse_architecture(std::string_view s) {
  if (s == "transformer") return Architecture::transformer;
  if (s == "ssm") return Architecture::ssm;
  throw ValidationError("unknown architecture '" + std::string(s) + "'");
}

PromptCategory parse_category(std::string_view s) {
  for (auto c : kAllCategories) {
    if (to_string(c) == s) return c;
  }
  throw ValidationError("unknown prompt category '" + std::string(s) + "'");
}

Language parse_language(std::string_view s) {
  for (auto l : kAllLanguages) {
    if (to_string(l) == s) return l;
  }
  throw ValidationError("unknown language '" + std::string(s) + "'");
}

void validate_row(const ManifestRow& row) {
  if (row.model_name.empty()) throw ValidationError("manifest row: empty model_name");
  if (row.param_count == 0) throw ValidationError("manifest row: param_count must be positive");
  if (row.vocab_size < 2) throw ValidationError("manifest row: vocab_size must be >= 2");
  if (!(row.temperature > 0.0) || !std::isfinite(row.temperature)) {
    throw ValidationError("manifest row: temperature must be > 0");
  }
}

void validate_manifest(std::span<const ManifestRow> rows) {
  std::set<std::tuple<std::string, std::string, double, std::uint64_t>> keys;
  std::set<std::uint32_t> indices;
  for (const auto& r : rows) {
    validate_row(r);
    if (!keys.emplace(r.model_name, r.prompt_text_ref, r.temperature, r.seed).second) {
      throw ValidationError("duplicate manifest row for model '" + r.model_name + "', prompt '" +
                            r.prompt_text_ref + "', temperature " +
                            std::to_string(r.temperature) + ", seed " + std::to_string(r.seed));
    }
    if (!indices.insert(r.generation_index).second) {
      throw ValidationError("duplicate generation_index " + std::to_string(r.generation_index));
    }
  }
}

namespace detail {

json row_to_json(const ManifestRow& row) {
  json j;
  j["model_name"] = row.model_name;
  j["architecture"] = std::string(to_string(row.architecture));
  j["param_count"] = row.param_count;
  j["vocab_size"] = row.vocab_size;
  j["prompt_category"] = std::string(to_string(row.prompt_category));
  j["prompt_text_ref"] = row.prompt_text_ref;
  j["language"] = std::string(to_string(row.language));
  j["temperature"] = row.temperature;
  j["seed"] = row.seed;
  j["generation_index"] = row.generation_index;
  j["stream_path"] = row.stream_path;
  if (row.prompt_char_count) j["prompt_char_count"] = *row.prompt_char_count;
  if (row.prompt_token_count) {
    j["prompt_token_count"] = *row.prompt_token_count;
    j["prompt_token_count_estimated"] = row.prompt_token_count_estimated;
  }
  if (row.quantization) j["quantization"] = *row.quantization;
  if (row.chat_template) j["chat_template"] = *row.chat_template;
  return j;
}

ManifestRow row_from_json(const json& j) {
  try {
    ManifestRow r;
    r.model_name = j.at("model_name").get<std::string>();
    r.architecture = parse_architecture(j.at("architecture").get<std::string>());
    r.param_count = j.at("param_count").get<std::uint64_t>();
    r.vocab_size = j.at("vocab_size").get<std::uint32_t>();
    r.prompt_category = parse_category(j.at("prompt_category").get<std::string>());
    r.prompt_text_ref = j.at("prompt_text_ref").get<std::string>();
    r.language = parse_language(j.at("language").get<std::string>());
    r.temperature = j.at("temperature").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.generation_index = j.at("generation_index").get<std::uint32_t>();
    r.stream_path = j.at("stream_path").get<std::string>();
    if (j.contains("prompt_char_count")) {
      r.prompt_char_count = j["prompt_char_count"].get<std::uint64_t>();
    }
    if (j.contains("prompt_token_count")) {
      r.prompt_token_count = j["prompt_token_count"].get<std::uint64_t>();
      r.prompt_token_count_estimated = j.value("prompt_token_count_estimated", false);
    }
    if (j.contains("quantization")) r.quantization = j["quantization"].get<std::string>();
    if (j.contains("chat_template")) r.chat_template = j["chat_template"].get<bool>();
    validate_row(r);
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed manifest row: ") + e.what());
  }
}

}  // namespace detail

std::string to_json_line(const ManifestRow& row) { return detail::row_to_json(row).dump(); }

ManifestRow parse_manifest_line(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("manifest line is not valid JSON: ") + e.what());
  }
  return detail::row_from_json(j);
}

std::vector<ManifestRow> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  std::vector<ManifestRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(parse_manifest_line(line));
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  validate_manifest(rows);
  return rows;
}

void write_manifest(const std::filesystem::path& path, std::span<const ManifestRow> rows) {
  validate_manifest(rows);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write manifest " + path.string());
  for (const auto& r : rows) out << to_json_line(r) << '\n';
  if (!out) throw IoError("failed writing manifest " + path.string());
}

std::uint64_t metadata_digest(const ManifestRow& row) {
  auto j = detail::row_to_json(row);
  j.erase("stream_path");
  return fnv1a64(j.dump());
}

}  // namespace edprof
