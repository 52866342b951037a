#include "edprof/commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cctype>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <thread>

#include <json.hpp>

#include "edprof/battery.hpp"
#include "edprof/manifest.hpp"
#include "edprof/metrics.hpp"
#include "edprof/multilingual.hpp"
#include "edprof/prompts.hpp"
#include "edprof/report.hpp"
#include "edprof/stream.hpp"
#include "edprof/summary.hpp"
#include "edprof/synth.hpp"
#include "edprof/utf8.hpp"

namespace edprof {
namespace fs = std::filesystem;

namespace {

// Flag parsing: library ValidationErrors on flag values become usage errors.
template <class F>
auto flag(const char* name, F&& parse) {
  try {
    return parse();
  } catch (const ValidationError& e) {
    throw UsageError(std::string("--") + name + ": " + e.what());
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
  }
}

std::string path_safe(std::string_view s) {
  std::string out;
  for (char ch : s) {
    const auto u = static_cast<unsigned char>(ch);
    out += (std::isalnum(u) || ch == '.' || ch == '-' || ch == '_') ? ch : '_';
  }
  return out.empty() ? "_" : out;
}

std::vector<PromptCategory> selected_categories(const RunConfig& c) {
  if (c.categories.empty()) return {kAllCategories.begin(), kAllCategories.end()};
  std::vector<PromptCategory> out;
  for (const auto& s : c.categories) out.push_back(flag("categories", [&] { return parse_category(s); }));
  return out;
}

std::string classify(const std::exception& e) {
  if (dynamic_cast<const TruncationError*>(&e)) return "truncated";
  if (dynamic_cast<const ChecksumError*>(&e)) return "checksum";
  if (dynamic_cast<const RecordMismatchError*>(&e)) return "mismatch";
  if (dynamic_cast<const BadMagicError*>(&e)) return "bad_magic";
  if (dynamic_cast<const UnsupportedVersionError*>(&e)) return "version";
  if (dynamic_cast<const StreamError*>(&e)) return "stream";
  if (dynamic_cast<const IoError*>(&e)) return "io";
  if (dynamic_cast<const ValidationError*>(&e)) return "validation";
  return "error";
}

SummaryEntry summarize_row(const ManifestRow& row, const fs::path& base, StdConvention conv) {
  SummaryEntry entry;
  entry.row = row;
  try {
    const auto path = base / row.stream_path;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open stream " + path.string());
    StreamReader reader(in);
    const auto& h = reader.header();
    if (h.vocab_size != row.vocab_size) {
      throw RecordMismatchError("stream vocab_size " + std::to_string(h.vocab_size) +
                                " != manifest vocab_size " + std::to_string(row.vocab_size));
    }
    if (h.metadata_digest != 0 && h.metadata_digest != metadata_digest(row)) {
      throw RecordMismatchError("stream metadata_digest does not match its manifest row");
    }
    SummarizeOptions o;
    o.temperature = row.temperature;
    if (h.value_kind == ValueKind::probabilities) o.recorded_temperature = row.temperature;
    o.std_convention = conv;
    auto s = summarize_stream(reader, o);
    s.row = row;
    entry.summary = std::move(s);
  } catch (const std::exception& e) {
    entry.summary.reset();
    entry.error = classify(e) + ": " + e.what();
  }
  return entry;
}

}  // namespace

fs::path manifest_path(const RunConfig& c) {
  return c.manifest.empty() ? c.out / "manifest.jsonl" : c.manifest;
}
fs::path summaries_path(const RunConfig& c) {
  return c.summaries.empty() ? c.out / "summaries.jsonl" : c.summaries;
}
fs::path battery_path(const RunConfig& c) {
  return c.battery.empty() ? c.out / "battery.json" : c.battery;
}

int cmd_prompts(const RunConfig& c, std::ostream& log) {
  if (c.vocab_size < 2) throw UsageError("--vocab-size is required (>= 2)");
  if (c.seeds == 0) throw UsageError("--seeds must be >= 1");
  if (c.temperatures.empty()) throw UsageError("--temperatures must not be empty");
  if (c.length_budget == 0) throw UsageError("--length-budget must be >= 1");
  const auto arch = flag("architecture", [&] { return parse_architecture(c.architecture); });
  const auto cats = selected_categories(c);
  std::vector<Language> langs;
  for (const auto& s : c.languages) langs.push_back(flag("languages", [&] { return parse_language(s); }));
  if (langs.empty()) throw UsageError("--languages must not be empty");

  const bool semantic = std::any_of(cats.begin(), cats.end(), is_semantic);
  if (semantic && !fs::is_directory(c.corpus)) {
    throw IoError("corpus directory not found: " + c.corpus.string());
  }
  std::optional<GreedyTokenEstimator> estimator;
  if (!c.vocab.empty()) estimator.emplace(load_vocab(c.vocab));

  std::vector<ManifestRow> rows;
  std::map<std::string, nlohmann::json> prompts;
  std::uint32_t index = 0;
  const auto model_dir = path_safe(c.model);
  for (auto lang : langs) {
    for (auto cat : cats) {
      for (std::uint32_t k = 0; k < c.seeds; ++k) {
        const std::uint64_t seed = c.seed + k;
        const PromptSpec p = is_neutral(cat) ? gen_neutral(cat, seed, c.length_budget, lang)
                                             : load_semantic(cat, c.corpus, lang, seed, c.window_chars);
        const std::string ref = p.corpus_ref
                                    ? *p.corpus_ref
                                    : "neutral/" + std::string(to_string(cat)) + "/" +
                                          std::string(to_string(lang)) + "/" + std::to_string(seed);
        const std::uint64_t chars = utf8::scalar_count(p.text);
        std::optional<std::uint64_t> tokens;
        if (estimator) tokens = estimator->count(p.text);

        if (!prompts.count(ref)) {
          nlohmann::json j;
          j["ref"] = ref;
          j["category"] = std::string(to_string(cat));
          j["language"] = std::string(to_string(lang));
          j["text"] = p.text;
          j["char_count"] = chars;
          if (tokens) j["estimated_token_count"] = *tokens;
          prompts[ref] = std::move(j);
        }
        for (double t : c.temperatures) {
          ManifestRow r;
          r.model_name = c.model;
          r.architecture = arch;
          r.param_count = c.param_count;
          r.vocab_size = c.vocab_size;
          r.prompt_category = cat;
          r.prompt_text_ref = ref;
          r.language = lang;
          r.temperature = t;
          r.seed = seed;
          r.generation_index = index++;
          r.stream_path = "streams/" + model_dir + "/" + std::to_string(r.generation_index) + ".edls";
          r.prompt_char_count = chars;
          r.prompt_token_count = tokens;
          r.prompt_token_count_estimated = tokens.has_value();
          r.quantization = c.quantization;
          r.chat_template = c.chat_template;
          rows.push_back(std::move(r));
        }
      }
    }
  }
  flag("temperatures", [&] {
    validate_manifest(rows);
    return 0;
  });

  ensure_dir(c.out);
  const auto mpath = manifest_path(c);
  write_manifest(mpath, rows);
  const auto ppath = c.out / "prompts.jsonl";
  std::ofstream out(ppath, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + ppath.string());
  for (const auto& [ref, j] : prompts) out << j.dump() << '\n';
  if (!out) throw IoError("failed writing " + ppath.string());
  log << "wrote " << rows.size() << " manifest rows to " << mpath.string() << " and " << prompts.size()
      << " prompts to " << ppath.string() << '\n';
  return kExitOk;
}

int cmd_summarize(const RunConfig& c, std::ostream& log) {
  if (c.jobs == 0) throw UsageError("--jobs must be >= 1");
  const StdConvention conv = c.std_convention == "population" ? StdConvention::population
                             : c.std_convention == "sample"
                                 ? StdConvention::sample
                                 : throw UsageError("--std must be 'sample' or 'population'");
  const auto mpath = manifest_path(c);
  const auto rows = read_manifest(mpath);
  const auto base = mpath.parent_path();

  std::vector<SummaryEntry> entries(rows.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) entries[i] = summarize_row(rows[i], base, conv);
  };
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(c.jobs, std::max<std::size_t>(rows.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  ensure_dir(c.out);
  const auto spath = summaries_path(c);
  write_summaries(spath, entries);
  std::size_t failed = 0;
  for (const auto& e : entries) {
    if (!e.summary) {
      ++failed;
      log << "failed: " << e.row.stream_path << ": " << e.error << '\n';
    }
  }
  log << "summarized " << rows.size() - failed << "/" << rows.size() << " streams into " << spath.string()
      << '\n';
  return failed ? kExitPartial : kExitOk;
}

int cmd_battery(const RunConfig& c, std::ostream& log) {
  BatteryOptions o;
  o.partition = flag("partition", [&] { return parse_partition(c.partition); });
  o.granularity = flag("granularity", [&] { return parse_granularity(c.granularity); });
  o.baseline_language = flag("baseline", [&] { return parse_language(c.baseline); });
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
  o.alpha = c.alpha;
  o.analyses.insert(c.analyses.begin(), c.analyses.end());
  flag("analyses", [&] {
    validate_analyses(o.analyses);
    return 0;
  });

  const auto entries = read_summaries(summaries_path(c));
  const auto s = successful(entries);
  if (s.size() != entries.size()) {
    log << "warning: ignoring " << entries.size() - s.size() << " failed summary rows\n";
  }
  std::optional<TokenizerProfile> profile;
  if (!c.vocab.empty()) profile = load_vocab(c.vocab);

  const auto rep = run_battery(s, o, profile ? &*profile : nullptr);
  for (const auto& w : rep.warnings) log << "warning: " << w << '\n';
  ensure_dir(c.out);
  const auto out = c.out / "battery.json";
  write_battery(out, rep);

  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;
  for (const auto& t : rep.tests) (t.skipped() ? tally[t.id].second : tally[t.id].first)++;
  for (const auto& [id, n] : tally) log << id << ": " << n.first << " run, " << n.second << " skipped\n";
  log << "wrote " << out.string() << '\n';
  return kExitOk;
}

int cmd_synth(const RunConfig& c, std::ostream& log) {
  const auto regime = flag("regime", [&] { return parse_regime(c.regime); });
  if (c.generations == 0) throw UsageError("--generations must be >= 1");
  if (c.length == 0) throw UsageError("--length must be >= 1");
  if (c.synth_vocab < 2) throw UsageError("--synth-vocab must be >= 2");
  if (c.width != "f32" && c.width != "f64") throw UsageError("--width must be 'f32' or 'f64'");
  if (c.temperatures.empty()) throw UsageError("--temperatures must not be empty");
  for (double t : c.temperatures) {
    if (!(t > 0.0)) throw UsageError("--temperatures must be > 0");
  }

  auto cfg = regime_config(regime, c.generations, c.seed, c.temperatures);
  cfg.vocab_size = c.synth_vocab;
  cfg.length = c.length;
  cfg.drift_per_generation = c.drift;
  cfg.width = c.width == "f64" ? ValueWidth::binary64 : ValueWidth::binary32;

  ensure_dir(c.out);
  const auto rows = synthesize(cfg, c.out);
  const auto mpath = c.out / "manifest.jsonl";
  write_manifest(mpath, rows);
  log << "wrote " << rows.size() << " " << to_string(regime) << " streams and " << mpath.string() << '\n';
  return kExitOk;
}

int cmd_zipf(const RunConfig& c, std::ostream& log) {
  if (c.alphas.empty() || c.zipf_vocab.empty()) throw UsageError("--alphas and --zipf-vocab must not be empty");
  std::string csv = "alpha,vocab_size,ed\n";
  for (auto v : c.zipf_vocab) {
    for (double a : c.alphas) {
      const double e = flag("alphas", [&] { return zipf_ed({a, static_cast<std::size_t>(v)}); });
      char buf[40];
      const auto r = std::to_chars(buf, buf + sizeof buf, a);
      char ebuf[40];
      const auto re = std::to_chars(ebuf, ebuf + sizeof ebuf, e);
      csv += std::string(buf, r.ptr) + "," + std::to_string(v) + "," + std::string(ebuf, re.ptr) + "\n";
    }
  }
  ensure_dir(c.out);
  const auto path = c.out / "zipf.csv";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << csv;
  if (!out) throw IoError("failed writing " + path.string());
  log << csv;
  return kExitOk;
}

int cmd_report(const RunConfig& c, std::ostream& log) {
  const auto rep = read_battery(battery_path(c));
  ensure_dir(c.out);
  const auto written = write_report(c.out, rep);
  log << "wrote " << written.size() << " files under " << c.out.string() << '\n';
  return kExitOk;
}

int run_command(const std::function<int()>& fn, std::ostream& log) {
  try {
    return fn();
  } catch (const UsageError& e) {
    log << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    log << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace edprof
