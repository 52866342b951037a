#pragma once

// Experiment manifest: one JSON object per line (manifest.jsonl). Each row
// describes one generation: which model, which prompt, which temperature and
// seed, and where its .edls stream lives.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace edprof {

enum class Architecture { transformer, ssm };

enum class PromptCategory {
  wikipedia,
  news,
  fiction,
  code,
  empty,
  random_ascii,
  explicit_randomness,
  neutral_stub,
  nonsense_syllables,
};

enum class Language { EN, JA, ZH, PL, AR, other };

inline constexpr std::array<PromptCategory, 9> kAllCategories = {
    PromptCategory::wikipedia,    PromptCategory::news,
    PromptCategory::fiction,      PromptCategory::code,
    PromptCategory::empty,        PromptCategory::random_ascii,
    PromptCategory::explicit_randomness, PromptCategory::neutral_stub,
    PromptCategory::nonsense_syllables,
};

inline constexpr std::array<PromptCategory, 4> kSemanticCategories = {
    PromptCategory::wikipedia, PromptCategory::news, PromptCategory::fiction,
    PromptCategory::code};

inline constexpr std::array<PromptCategory, 5> kNeutralCategories = {
    PromptCategory::empty, PromptCategory::random_ascii, PromptCategory::explicit_randomness,
    PromptCategory::neutral_stub, PromptCategory::nonsense_syllables};

inline constexpr std::array<Language, 6> kAllLanguages = {
    Language::EN, Language::JA, Language::ZH, Language::PL, Language::AR, Language::other};

bool is_neutral(PromptCategory c) noexcept;
inline bool is_semantic(PromptCategory c) noexcept { return !is_neutral(c); }

std::string_view to_string(Architecture a) noexcept;
std::string_view to_string(PromptCategory c) noexcept;
std::string_view to_string(Language l) noexcept;

// Throw ValidationError on unknown names.
Architecture parse_architecture(std::string_view s);
PromptCategory parse_category(std::string_view s);
Language parse_language(std::string_view s);

struct ManifestRow {
  std::string model_name;
  Architecture architecture = Architecture::transformer;
  std::uint64_t param_count = 1;
  std::uint32_t vocab_size = 2;
  PromptCategory prompt_category = PromptCategory::empty;
  std::string prompt_text_ref;
  Language language = Language::EN;
  double temperature = 1.0;
  std::uint64_t seed = 0;
  std::uint32_t generation_index = 0;
  std::string stream_path;

  // Optional covariates and provenance.
  std::optional<std::uint64_t> prompt_char_count;
  std::optional<std::uint64_t> prompt_token_count;
  bool prompt_token_count_estimated = false;
  std::optional<std::string> quantization;
  std::optional<bool> chat_template;

  friend bool operator==(const ManifestRow&, const ManifestRow&) = default;
};

// Checks per-row invariants (temperature > 0, vocab_size >= 2, ...).
void validate_row(const ManifestRow& row);
// Checks cross-row invariants: (model, prompt, temperature, seed) unique and
// generation_index unique.
void validate_manifest(std::span<const ManifestRow> rows);

std::string to_json_line(const ManifestRow& row);
ManifestRow parse_manifest_line(std::string_view line);

std::vector<ManifestRow> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, std::span<const ManifestRow> rows);

// FNV-1a 64 of the row's canonical JSON (sorted keys, compact separators,
// stream_path omitted). Stored in the stream header to bind a stream to its row.
std::uint64_t metadata_digest(const ManifestRow& row);

}  // namespace edprof
