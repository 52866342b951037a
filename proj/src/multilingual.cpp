#include "edprof/multilingual.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "edprof/error.hpp"
#include "edprof/stats.hpp"
#include "edprof/utf8.hpp"

namespace edprof {
namespace {

struct Range {
  char32_t lo, hi;
};

template <std::size_t N>
bool in_any(char32_t cp, const Range (&ranges)[N]) {
  for (const auto& r : ranges) {
    if (cp >= r.lo && cp <= r.hi) return true;
  }
  return false;
}

constexpr Range kHan[] = {{0x2E80, 0x2FDF}, {0x3400, 0x4DBF}, {0x4E00, 0x9FFF},
                          {0xF900, 0xFAFF}, {0x20000, 0x3134F}};
constexpr Range kKana[] = {{0x3040, 0x30FF}, {0x31F0, 0x31FF}, {0xFF66, 0xFF9F}};
constexpr Range kArabic[] = {{0x0600, 0x06FF}, {0x0750, 0x077F}, {0x08A0, 0x08FF},
                             {0xFB50, 0xFDFF}, {0xFE70, 0xFEFF}};
constexpr Range kPunct[] = {{0x0021, 0x002F}, {0x003A, 0x0040}, {0x005B, 0x0060},
                            {0x007B, 0x007E}, {0x00A1, 0x00BF}, {0x2000, 0x206F},
                            {0x3000, 0x303F}, {0xFF01, 0xFF65}};

bool is_neutral(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == 0x0120 || cp == 0x2581;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string unescape(std::string_view s, std::size_t line_no) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out.push_back(s[i]);
      continue;
    }
    if (i + 1 >= s.size()) {
      throw ValidationError("vocab line " + std::to_string(line_no) + ": dangling backslash");
    }
    const char e = s[++i];
    switch (e) {
      case '\\': out.push_back('\\'); break;
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case 'x': {
        const int hi = i + 1 < s.size() ? hex_value(s[i + 1]) : -1;
        const int lo = i + 2 < s.size() ? hex_value(s[i + 2]) : -1;
        if (hi < 0 || lo < 0) {
          throw ValidationError("vocab line " + std::to_string(line_no) + ": bad \\x escape");
        }
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
        break;
      }
      default:
        throw ValidationError("vocab line " + std::to_string(line_no) + ": unknown escape \\" +
                              std::string(1, e));
    }
  }
  return out;
}

// Replace the byte-level space markers with a plain space.
std::string normalize_markers(std::string_view text) {
  std::string out;
  const auto cps = utf8::decode(text);
  if (!cps) return std::string(text);
  for (char32_t cp : *cps) out += utf8::encode(cp == 0x0120 || cp == 0x2581 ? U' ' : cp);
  return out;
}

}  // namespace

Script classify_script(char32_t cp) noexcept {
  if (cp >= U'0' && cp <= U'9') return Script::digit;
  if ((cp >= U'A' && cp <= U'Z') || (cp >= U'a' && cp <= U'z')) return Script::latin;
  if (cp == 0x00D7 || cp == 0x00F7) return Script::punct_symbol;
  if ((cp >= 0x00C0 && cp <= 0x024F) || (cp >= 0x1E00 && cp <= 0x1EFF)) return Script::latin;
  if (in_any(cp, kPunct)) return Script::punct_symbol;
  if (in_any(cp, kHan)) return Script::han;
  if (in_any(cp, kKana)) return Script::kana;
  if (in_any(cp, kArabic)) return Script::arabic;
  if (cp >= 0x0400 && cp <= 0x052F) return Script::cyrillic;
  return Script::other;
}

std::string_view to_string(Script s) noexcept {
  switch (s) {
    case Script::latin: return "Latin";
    case Script::han: return "Han";
    case Script::kana: return "Kana";
    case Script::arabic: return "Arabic";
    case Script::cyrillic: return "Cyrillic";
    case Script::digit: return "Digit";
    case Script::punct_symbol: return "PunctSymbol";
    case Script::other: return "Other";
  }
  return "Other";
}

ScriptSet scripts_for(Language language) {
  switch (language) {
    case Language::EN:
    case Language::PL: return {Script::latin};
    case Language::JA: return {Script::han, Script::kana};
    case Language::ZH: return {Script::han};
    case Language::AR: return {Script::arabic};
    case Language::other: return {};
  }
  return {};
}

double fertility(std::uint64_t token_count, std::uint64_t source_char_count) {
  if (source_char_count == 0) throw ValidationError("fertility: source has no characters");
  if (token_count == 0) throw ValidationError("fertility: token count must be positive");
  return static_cast<double>(token_count) / static_cast<double>(source_char_count);
}

double fertility(std::uint64_t token_count, std::string_view source_text) {
  return fertility(token_count, utf8::scalar_count(source_text));
}

TokenizerProfile parse_vocab(std::istream& in) {
  TokenizerProfile p;
  std::unordered_set<std::uint32_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    const std::string_view id_part = std::string_view(line).substr(0, tab);
    std::uint32_t id = 0;
    const auto [ptr, ec] = std::from_chars(id_part.data(), id_part.data() + id_part.size(), id);
    if (ec != std::errc() || ptr != id_part.data() + id_part.size() || id_part.empty()) {
      throw ValidationError("vocab line " + std::to_string(line_no) + ": bad token id '" +
                            std::string(id_part) + "'");
    }
    if (!seen.insert(id).second) {
      throw ValidationError("vocab line " + std::to_string(line_no) + ": duplicate token id " +
                            std::to_string(id));
    }
    VocabEntry e;
    e.token_id = id;
    if (tab != std::string::npos) e.text = unescape(std::string_view(line).substr(tab + 1), line_no);
    p.entries.push_back(std::move(e));
  }
  std::sort(p.entries.begin(), p.entries.end(),
            [](const VocabEntry& a, const VocabEntry& b) { return a.token_id < b.token_id; });
  p.vocab_size = p.entries.empty() ? 0 : p.entries.back().token_id + 1;
  return p;
}

TokenizerProfile load_vocab(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open vocabulary file " + path.string());
  try {
    return parse_vocab(in);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string escape_vocab_text(std::string_view raw) {
  std::string out;
  static constexpr char kHex[] = "0123456789ABCDEF";
  for (char c : raw) {
    const auto u = static_cast<unsigned char>(c);
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default:
        if (u < 0x20 || u == 0x7F) {
          out += "\\x";
          out.push_back(kHex[u >> 4]);
          out.push_back(kHex[u & 0xF]);
        } else {
          out.push_back(c);
        }
    }
  }
  // Bytes >= 0x80 that do not form valid UTF-8 are escaped too so the file
  // stays valid UTF-8.
  if (!utf8::decode(out)) {
    std::string safe;
    for (char c : out) {
      const auto u = static_cast<unsigned char>(c);
      if (u >= 0x80) {
        safe += "\\x";
        safe.push_back(kHex[u >> 4]);
        safe.push_back(kHex[u & 0xF]);
      } else {
        safe.push_back(c);
      }
    }
    return safe;
  }
  return out;
}

void write_vocab(std::ostream& out, const TokenizerProfile& profile) {
  for (const auto& e : profile.entries) out << e.token_id << '\t' << escape_vocab_text(e.text) << '\n';
}

std::optional<Script> entry_script(std::string_view text) {
  const auto cps = utf8::decode(text);
  if (!cps) return Script::other;
  std::optional<Script> found;
  for (char32_t cp : *cps) {
    if (is_neutral(cp)) continue;
    const Script s = classify_script(cp);
    if (found && *found != s) return Script::other;
    found = s;
  }
  return found;
}

std::size_t vocab_allocation(const TokenizerProfile& profile, const ScriptSet& scripts) {
  if (scripts.empty()) return 0;
  std::size_t count = 0;
  for (const auto& e : profile.entries) {
    const auto cps = utf8::decode(e.text);
    if (!cps) {
      if (scripts.contains(Script::other)) ++count;
      continue;
    }
    bool any = false, all = true;
    for (char32_t cp : *cps) {
      if (is_neutral(cp)) continue;
      if (scripts.contains(classify_script(cp))) {
        any = true;
      } else {
        all = false;
        break;
      }
    }
    if (any && all) ++count;
  }
  return count;
}

std::size_t unique_tokens(std::span<const std::uint32_t> ids) {
  std::unordered_set<std::uint32_t> s(ids.begin(), ids.end());
  return s.size();
}

GreedyTokenEstimator::GreedyTokenEstimator(const TokenizerProfile& profile) {
  for (const auto& e : profile.entries) {
    if (e.text.empty()) continue;
    std::string key = normalize_markers(e.text);
    max_len_ = std::max(max_len_, key.size());
    pieces_.emplace(std::move(key), e.token_id);
  }
}

std::uint64_t GreedyTokenEstimator::count(std::string_view text) const {
  std::uint64_t tokens = 0;
  std::size_t i = 0;
  std::string probe;
  while (i < text.size()) {
    std::size_t best = 1;
    for (std::size_t len = std::min(max_len_, text.size() - i); len > 1; --len) {
      probe.assign(text.substr(i, len));
      if (pieces_.count(probe)) {
        best = len;
        break;
      }
    }
    i += best;
    ++tokens;
  }
  return tokens;
}

std::vector<LanguageContrast> residualized_contrast(std::span<const double> ed,
                                                    std::span<const double> token_counts,
                                                    std::span<const Language> labels,
                                                    Language baseline) {
  if (ed.size() != token_counts.size() || ed.size() != labels.size()) {
    throw ValidationError("residualized_contrast: input lengths differ");
  }
  const std::vector<double> resid = residualize(ed, token_counts);

  std::map<Language, std::pair<std::vector<double>, std::vector<double>>> by_lang;
  for (std::size_t i = 0; i < ed.size(); ++i) {
    auto& slot = by_lang[labels[i]];
    slot.first.push_back(ed[i]);
    slot.second.push_back(resid[i]);
  }
  if (by_lang.size() < 2) throw InsufficientDataError("residualized_contrast needs >= 2 languages");
  const auto base = by_lang.find(baseline);
  if (base == by_lang.end()) {
    throw InsufficientDataError("residualized_contrast: baseline language " +
                                std::string(to_string(baseline)) + " has no observations");
  }

  std::vector<LanguageContrast> out;
  for (const auto& [lang, values] : by_lang) {
    if (lang == baseline) continue;
    LanguageContrast c;
    c.language = lang;
    c.n = values.first.size();
    try {
      c.raw_d = cohens_d(values.first, base->second.first);
      c.residualized_d = cohens_d(values.second, base->second.second);
    } catch (const StatsError& e) {
      c.error = e.what();
    }
    out.push_back(std::move(c));
  }
  return out;
}

MultilingualAnalysis analyze_languages(std::span<const GenerationSummary> summaries,
                                       const TokenizerProfile* profile, Language baseline) {
  struct Acc {
    std::vector<double> ed;
    double unique = 0.0;
    std::uint64_t tokens = 0, chars = 0;
    bool estimated = false;
  };
  std::map<Language, Acc> acc;
  std::vector<double> ed_all, tok_all, fert_gen, ed_gen;
  std::vector<Language> lang_all;
  bool all_have_tokens = true;

  for (const auto& s : summaries) {
    if (s.row.language == Language::other) continue;
    auto& a = acc[s.row.language];
    a.ed.push_back(s.ed_mean);
    a.unique += s.unique_token_count;
    const auto& r = s.row;
    if (r.prompt_token_count && r.prompt_char_count && *r.prompt_char_count > 0) {
      a.tokens += *r.prompt_token_count;
      a.chars += *r.prompt_char_count;
      a.estimated = a.estimated || r.prompt_token_count_estimated;
      if (*r.prompt_token_count > 0) {
        fert_gen.push_back(fertility(*r.prompt_token_count, *r.prompt_char_count));
        ed_gen.push_back(s.ed_mean);
      }
    }
    if (r.prompt_token_count) {
      tok_all.push_back(static_cast<double>(*r.prompt_token_count));
    } else {
      all_have_tokens = false;
    }
    ed_all.push_back(s.ed_mean);
    lang_all.push_back(r.language);
  }

  MultilingualAnalysis out;
  out.baseline = baseline;
  const auto base = acc.find(baseline);
  std::map<Language, LanguageContrast> resid;
  if (all_have_tokens && acc.size() >= 2 && base != acc.end()) {
    try {
      for (auto& c : residualized_contrast(ed_all, tok_all, lang_all, baseline)) {
        resid[c.language] = c;
      }
    } catch (const Error& e) {
      out.notes.push_back(std::string("residualized contrast unavailable: ") + e.what());
    }
  } else if (!all_have_tokens) {
    out.notes.push_back("residualized contrast needs prompt_token_count on every row");
  }

  for (const auto& [lang, a] : acc) {
    LanguageReport rep;
    rep.language = lang;
    rep.n = a.ed.size();
    rep.mean_ed = mean(a.ed);
    rep.unique_tokens_per_generation = a.unique / static_cast<double>(a.ed.size());
    if (a.chars > 0 && a.tokens > 0) {
      rep.fertility = fertility(a.tokens, a.chars);
      rep.fertility_estimated = a.estimated;
    }
    if (profile) rep.vocab_allocation = vocab_allocation(*profile, scripts_for(lang));
    if (base != acc.end() && lang != baseline) {
      try {
        rep.cohens_d_vs_baseline = cohens_d(a.ed, base->second.ed);
      } catch (const StatsError& e) {
        out.notes.push_back(std::string(to_string(lang)) + ": " + e.what());
      }
      const auto it = resid.find(lang);
      if (it != resid.end()) rep.residualized_cohens_d = it->second.residualized_d;
    }
    out.languages.push_back(rep);
  }
  std::stable_sort(out.languages.begin(), out.languages.end(),
                   [](const LanguageReport& a, const LanguageReport& b) { return a.mean_ed < b.mean_ed; });

  std::vector<double> fm, em;
  for (const auto& r : out.languages) {
    if (r.fertility) {
      fm.push_back(*r.fertility);
      em.push_back(r.mean_ed);
    }
  }
  if (fm.size() >= 3) {
    try {
      out.fertility_rho_means = spearman(fm, em).statistic;
    } catch (const StatsError&) {
    }
  }
  if (fert_gen.size() >= 3) {
    try {
      const auto r = spearman(fert_gen, ed_gen);
      out.fertility_rho_generations = r.statistic;
      out.fertility_p_generations = r.p_value;
    } catch (const StatsError&) {
    }
  }
  return out;
}

}  // namespace edprof
