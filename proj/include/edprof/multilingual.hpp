#pragma once

// Tokenizer-level analysis for cross-language comparisons: fertility, script
// based vocabulary allocation, unique-token usage and residualized effect
// sizes.
//
// Script classification uses fixed code point ranges:
//   Latin         U+0041-005A, U+0061-007A, U+00C0-024F (minus U+00D7, U+00F7),
//                 U+1E00-1EFF
//   Han           U+2E80-2FDF, U+3400-4DBF, U+4E00-9FFF, U+F900-FAFF,
//                 U+20000-3134F
//   Kana          U+3040-30FF, U+31F0-31FF, U+FF66-FF9F
//   Arabic        U+0600-06FF, U+0750-077F, U+08A0-08FF, U+FB50-FDFF, U+FE70-FEFF
//   Cyrillic      U+0400-052F
//   Digit         U+0030-0039
//   PunctSymbol   remaining ASCII printables, U+00A1-00BF, U+00D7, U+00F7,
//                 U+2000-206F, U+3000-303F, U+FF01-FF65 (ASCII-range fullwidth)
//   Other         everything else
//
// Whitespace (space, tab, CR, LF) and the byte-level tokenizer markers U+0120
// and U+2581 are neutral: they never decide which script an entry belongs to.

#include <bitset>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "edprof/manifest.hpp"
#include "edprof/summary.hpp"

namespace edprof {

enum class Script : std::uint8_t {
  latin,
  han,
  kana,
  arabic,
  cyrillic,
  digit,
  punct_symbol,
  other,
};
inline constexpr std::size_t kScriptCount = 8;

Script classify_script(char32_t cp) noexcept;
std::string_view to_string(Script s) noexcept;

class ScriptSet {
 public:
  ScriptSet() = default;
  ScriptSet(std::initializer_list<Script> scripts) {
    for (auto s : scripts) insert(s);
  }
  void insert(Script s) { bits_.set(static_cast<std::size_t>(s)); }
  bool contains(Script s) const { return bits_.test(static_cast<std::size_t>(s)); }
  bool empty() const { return bits_.none(); }

 private:
  std::bitset<kScriptCount> bits_;
};

// EN, PL -> Latin; JA -> Han + Kana; ZH -> Han; AR -> Arabic; other -> empty.
ScriptSet scripts_for(Language language);

// token_count / source_char_count. Characters are Unicode scalar values of the
// source text, whitespace included.
double fertility(std::uint64_t token_count, std::uint64_t source_char_count);
double fertility(std::uint64_t token_count, std::string_view source_text);

struct VocabEntry {
  std::uint32_t token_id = 0;
  std::string text;  // raw bytes; not necessarily valid UTF-8
};

struct TokenizerProfile {
  std::vector<VocabEntry> entries;  // ascending token_id
  // max token_id + 1; equals entries.size() when ids are dense.
  std::uint32_t vocab_size = 0;

  bool dense() const noexcept { return entries.size() == vocab_size; }
};

// Vocabulary file: UTF-8 text, one entry per line, "<token_id>\t<text>".
// Text escapes: \\ \t \n \r and \xHH for an arbitrary byte. Blank lines and
// lines starting with '#' are ignored. An entry with no tab has empty text.
TokenizerProfile parse_vocab(std::istream& in);
TokenizerProfile load_vocab(const std::filesystem::path& path);
void write_vocab(std::ostream& out, const TokenizerProfile& profile);
std::string escape_vocab_text(std::string_view raw);

// Script of a vocabulary entry: the single script of its non-neutral
// characters; Other when they mix scripts or the bytes are not valid UTF-8;
// nullopt for entries made only of neutral characters (or empty).
std::optional<Script> entry_script(std::string_view text);

// Entries whose non-neutral characters all lie in `scripts` (at least one
// such character required). Ill-formed UTF-8 counts as Other.
std::size_t vocab_allocation(const TokenizerProfile& profile, const ScriptSet& scripts);

std::size_t unique_tokens(std::span<const std::uint32_t> sampled_token_ids);

// Greedy longest-match token count over the profile's entries (markers U+0120
// and U+2581 read as a space). Bytes no entry covers count one token each.
// A rough stand-in when no real tokenizer is available; results are flagged
// as estimates wherever they are stored.
class GreedyTokenEstimator {
 public:
  explicit GreedyTokenEstimator(const TokenizerProfile& profile);
  std::uint64_t count(std::string_view text) const;

 private:
  std::unordered_map<std::string, std::uint32_t> pieces_;
  std::size_t max_len_ = 1;
};

struct LanguageContrast {
  Language language = Language::EN;
  std::size_t n = 0;
  std::optional<double> raw_d;
  std::optional<double> residualized_d;
  std::string error;  // set when a d could not be computed
};

// Residualizes ed on token_counts (pooled over all observations, with
// intercept), then Cohen's d of each language against the baseline for both
// the raw and residualized values. d is positive when the language is above
// the baseline.
std::vector<LanguageContrast> residualized_contrast(std::span<const double> ed,
                                                    std::span<const double> token_counts,
                                                    std::span<const Language> labels,
                                                    Language baseline);

struct LanguageReport {
  Language language = Language::EN;
  std::size_t n = 0;
  double mean_ed = 0.0;
  std::optional<double> fertility;  // total prompt tokens / total prompt chars
  bool fertility_estimated = false;
  std::optional<std::size_t> vocab_allocation;
  double unique_tokens_per_generation = 0.0;
  std::optional<double> cohens_d_vs_baseline;
  std::optional<double> residualized_cohens_d;
};

struct MultilingualAnalysis {
  Language baseline = Language::EN;
  std::vector<LanguageReport> languages;  // ascending mean ED
  // Spearman rho between fertility and ED on language means, and on the
  // per-generation values. Empty when not computable.
  std::optional<double> fertility_rho_means;
  std::optional<double> fertility_rho_generations;
  std::optional<double> fertility_p_generations;
  std::vector<std::string> notes;
};

// Summaries with language == other are ignored. The tokenizer profile, when
// given, supplies vocab_allocation.
MultilingualAnalysis analyze_languages(std::span<const GenerationSummary> summaries,
                                       const TokenizerProfile* profile = nullptr,
                                       Language baseline = Language::EN);

}  // namespace edprof
