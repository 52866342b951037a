#pragma once

// Prompt generation for the nine prompt categories: five neutral generators
// (deterministic in category, seed and budget) and four semantic corpus
// loaders reading user-supplied text from corpus/<category>/<language>/*.txt.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "edprof/manifest.hpp"

namespace edprof {

struct PromptSpec {
  PromptCategory category = PromptCategory::empty;
  Language language = Language::EN;
  std::uint64_t seed = 0;
  std::string text;
  std::optional<std::uint64_t> estimated_token_count;
  // Corpus file the excerpt was taken from (semantic categories only), relative
  // to the corpus root.
  std::optional<std::string> corpus_ref;
};

inline constexpr char kAsciiFirst = 0x21;
inline constexpr char kAsciiLast = 0x7E;
inline constexpr std::size_t kDefaultExcerptChars = 1000;

// Fixed pools for the list-based neutral categories. Empty span for the
// others.
std::span<const std::string_view> neutral_pool(PromptCategory category);

PromptSpec gen_neutral(PromptCategory category, std::uint64_t seed, std::size_t length_budget,
                       Language language = Language::EN);

// Picks file (seed mod file count) from the sorted *.txt listing of
// corpus_dir/<category>/<language>/ and returns its leading window of
// window_chars Unicode scalars.
PromptSpec load_semantic(PromptCategory category, const std::filesystem::path& corpus_dir,
                         Language language, std::uint64_t seed,
                         std::size_t window_chars = kDefaultExcerptChars);

}  // namespace edprof
