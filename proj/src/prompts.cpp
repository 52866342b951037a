#include "edprof/prompts.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>
#include <vector>

#include "edprof/error.hpp"
#include "edprof/random.hpp"
#include "edprof/utf8.hpp"

namespace edprof {
namespace {

constexpr std::array<std::string_view, 24> kStubs = {
    "The",   "A",    "It",    "In",   "This", "There", "When", "One",
    "So",    "And",  "But",   "Then", "We",   "They",  "He",   "She",
    "I",     "Once", "Here",  "Now",  "What", "If",    "As",   "Some",
};

constexpr std::array<std::string_view, 22> kRandomnessTemplates = {
    "Generate a completely random sequence of tokens",
    "Generate random text",
    "Write a random sequence of words",
    "Output a random string of characters",
    "Produce completely random output",
    "Say something random",
    "Write random words with no meaning",
    "Generate a random sequence with no pattern",
    "Produce a sequence of random tokens",
    "Type random characters",
    "Generate noise",
    "Write anything at random",
    "Output random symbols",
    "Continue with a random sequence",
    "Generate a random list of words",
    "Produce random gibberish",
    "Write a completely unpredictable sequence",
    "Generate text that is as random as possible",
    "Emit random tokens",
    "Create a random string",
    "Be as random as you can",
    "Generate an arbitrary random sequence",
};

// Space-separated consonant-vowel-consonant style syllable groups.
constexpr std::array<std::string_view, 24> kNonsensePhrases = {
    "bla mup ziq fon", "dak pif rul mev", "tog ben sil kav", "vum rek pah zol",
    "gix lor tum bap", "nef dox kil wum", "ruk tav mip sel", "zan gop fud lek",
    "hib nos vek tar", "pum dil gaz rof", "kel wib tox mun", "fap ruz nid gol",
    "sov kum lep daz", "jit bom rax fen", "wuk tep gan sib", "mod fip zur kal",
    "lun vas dop rik", "bex kod sum nav", "tiz mal rop guf", "dun sek baz wol",
    "pel giv nuk fas", "rom tid kez bul", "vip lod gus ham", "zek nof tam ril",
};

std::size_t category_stream(PromptCategory c) { return static_cast<std::size_t>(c); }

std::string join_syllables(rng::Engine& engine, std::size_t budget) {
  std::string out;
  for (;;) {
    const auto phrase = kNonsensePhrases[engine.index(kNonsensePhrases.size())];
    std::istringstream words{std::string(phrase)};
    std::string syl;
    while (words >> syl) {
      const std::size_t need = out.empty() ? syl.size() : syl.size() + 1;
      if (out.size() + need > budget) return out;
      if (!out.empty()) out.push_back(' ');
      out += syl;
    }
  }
}

std::string pick_fitting(rng::Engine& engine, std::span<const std::string_view> pool,
                         std::size_t budget, PromptCategory category) {
  std::vector<std::string_view> fitting;
  for (auto s : pool) {
    if (s.size() <= budget) fitting.push_back(s);
  }
  if (fitting.empty()) {
    throw ValidationError("length_budget " + std::to_string(budget) + " is too small for any " +
                          std::string(to_string(category)) + " prompt");
  }
  return std::string(fitting[engine.index(fitting.size())]);
}

}  // namespace

std::span<const std::string_view> neutral_pool(PromptCategory category) {
  switch (category) {
    case PromptCategory::neutral_stub: return kStubs;
    case PromptCategory::explicit_randomness: return kRandomnessTemplates;
    case PromptCategory::nonsense_syllables: return kNonsensePhrases;
    default: return {};
  }
}

PromptSpec gen_neutral(PromptCategory category, std::uint64_t seed, std::size_t length_budget,
                       Language language) {
  if (!is_neutral(category)) {
    throw ValidationError("gen_neutral: '" + std::string(to_string(category)) +
                          "' is not a neutral category");
  }
  PromptSpec spec;
  spec.category = category;
  spec.language = language;
  spec.seed = seed;
  if (category == PromptCategory::empty) return spec;
  if (length_budget == 0) {
    throw ValidationError("gen_neutral: length_budget must be > 0 for " +
                          std::string(to_string(category)));
  }

  rng::Engine engine(rng::derive(seed, category_stream(category)));
  switch (category) {
    case PromptCategory::random_ascii: {
      constexpr std::uint64_t span = kAsciiLast - kAsciiFirst + 1;
      spec.text.resize(length_budget);
      for (auto& ch : spec.text) ch = static_cast<char>(kAsciiFirst + engine.index(span));
      break;
    }
    case PromptCategory::nonsense_syllables:
      spec.text = join_syllables(engine, length_budget);
      if (spec.text.empty()) {
        throw ValidationError("length_budget " + std::to_string(length_budget) +
                              " is too small for one nonsense syllable");
      }
      break;
    default:
      spec.text = pick_fitting(engine, neutral_pool(category), length_budget, category);
      break;
  }
  return spec;
}

PromptSpec load_semantic(PromptCategory category, const std::filesystem::path& corpus_dir,
                         Language language, std::uint64_t seed, std::size_t window_chars) {
  namespace fs = std::filesystem;
  if (!is_semantic(category)) {
    throw ValidationError("load_semantic: '" + std::string(to_string(category)) +
                          "' is not a semantic category");
  }
  if (!fs::is_directory(corpus_dir)) {
    throw IoError("corpus directory not found: " + corpus_dir.string());
  }
  const fs::path dir = corpus_dir / std::string(to_string(category)) / std::string(to_string(language));
  if (!fs::is_directory(dir)) throw IoError("corpus directory not found: " + dir.string());

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  if (files.empty()) throw IoError("no .txt files in corpus directory: " + dir.string());
  std::sort(files.begin(), files.end());

  const fs::path& chosen = files[seed % files.size()];
  std::ifstream in(chosen, std::ios::binary);
  if (!in) throw IoError("cannot read corpus file " + chosen.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string content = buf.str();

  PromptSpec spec;
  spec.category = category;
  spec.language = language;
  spec.seed = seed;
  spec.text = std::string(utf8::prefix(content, window_chars));
  spec.corpus_ref = fs::relative(chosen, corpus_dir).generic_string();
  return spec;
}

}  // namespace edprof
