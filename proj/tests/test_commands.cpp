#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "edprof/commands.hpp"
#include "edprof/manifest.hpp"
#include "edprof/summary.hpp"

using namespace edprof;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const char* name) {
  auto p = fs::temp_directory_path() / (std::string("edprof_cmd_") + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

int run(int (*cmd)(const RunConfig&, std::ostream&), const RunConfig& c, std::string* log = nullptr) {
  std::ostringstream os;
  const int rc = run_command([&] { return cmd(c, os); }, os);
  if (log) *log = os.str();
  return rc;
}

fs::path make_corpus(const fs::path& root) {
  for (auto cat : kSemanticCategories) {
    const auto dir = root / std::string(to_string(cat)) / "EN";
    fs::create_directories(dir);
    std::ofstream(dir / "one.txt") << "Some " << to_string(cat) << " text, long enough for an excerpt.";
    std::ofstream(dir / "two.txt") << "Another " << to_string(cat) << " passage.";
  }
  return root;
}

RunConfig small_synth(const fs::path& out) {
  RunConfig c;
  c.out = out;
  c.regime = "ssm_like";
  c.generations = 1;
  c.length = 16;
  c.synth_vocab = 32;
  c.seed = 4;
  return c;
}

}  // namespace

TEST_CASE("prompts: row count, determinism and missing corpus") {
  const auto root = scratch("prompts");
  RunConfig c;
  c.corpus = make_corpus(root / "corpus");
  c.out = root / "a";
  c.seeds = 3;
  c.vocab_size = 1000;
  c.model = "org/model";
  REQUIRE(run(cmd_prompts, c) == kExitOk);
  const auto rows = read_manifest(c.out / "manifest.jsonl");
  CHECK(rows.size() == 27u * 3u);
  CHECK(rows[0].stream_path.find("org_model") != std::string::npos);

  auto c2 = c;
  c2.out = root / "b";
  REQUIRE(run(cmd_prompts, c2) == kExitOk);
  CHECK(slurp(c.out / "manifest.jsonl") == slurp(c2.out / "manifest.jsonl"));
  CHECK(slurp(c.out / "prompts.jsonl") == slurp(c2.out / "prompts.jsonl"));

  auto bad = c;
  bad.corpus = root / "no_such_corpus";
  std::string log;
  CHECK(run(cmd_prompts, bad, &log) == kExitIo);
  CHECK(log.find(bad.corpus.string()) != std::string::npos);

  auto neutral_only = bad;
  neutral_only.categories = {"empty", "random_ascii"};
  CHECK(run(cmd_prompts, neutral_only) == kExitOk);

  auto no_vocab = c;
  no_vocab.vocab_size = 0;
  CHECK(run(cmd_prompts, no_vocab) == kExitUsage);
  auto bad_cat = neutral_only;
  bad_cat.categories = {"poetry"};
  CHECK(run(cmd_prompts, bad_cat) == kExitUsage);
  fs::remove_all(root);
}

TEST_CASE("synth and summarize are deterministic; threads do not change output") {
  const auto root = scratch("summ");
  auto c = small_synth(root / "a");
  REQUIRE(run(cmd_synth, c) == kExitOk);
  auto c2 = small_synth(root / "b");
  REQUIRE(run(cmd_synth, c2) == kExitOk);
  CHECK(slurp(c.out / "manifest.jsonl") == slurp(c2.out / "manifest.jsonl"));
  const auto rows = read_manifest(c.out / "manifest.jsonl");
  REQUIRE(rows.size() == 27);
  for (const auto& r : rows) CHECK(slurp(c.out / r.stream_path) == slurp(c2.out / r.stream_path));

  c.jobs = 1;
  REQUIRE(run(cmd_summarize, c) == kExitOk);
  const auto serial = slurp(c.out / "summaries.jsonl");
  CHECK(read_summaries(c.out / "summaries.jsonl").size() == rows.size());
  c.jobs = 4;
  REQUIRE(run(cmd_summarize, c) == kExitOk);
  CHECK(slurp(c.out / "summaries.jsonl") == serial);
  fs::remove_all(root);
}

TEST_CASE("summarize marks a corrupted stream failed") {
  const auto root = scratch("corrupt");
  auto c = small_synth(root);
  REQUIRE(run(cmd_synth, c) == kExitOk);
  const auto rows = read_manifest(c.out / "manifest.jsonl");
  {
    std::fstream f(c.out / rows[5].stream_path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(100);
    f.put('\x7f');
  }
  fs::resize_file(c.out / rows[9].stream_path, 60);
  fs::remove(c.out / rows[12].stream_path);
  c.jobs = 3;
  std::string log;
  CHECK(run(cmd_summarize, c, &log) == kExitPartial);
  const auto entries = read_summaries(c.out / "summaries.jsonl");
  REQUIRE(entries.size() == rows.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    CHECK(entries[i].row == rows[i]);
    CHECK(entries[i].summary.has_value() == (i != 5 && i != 9 && i != 12));
  }
  CHECK(entries[5].error.rfind("checksum", 0) == 0);
  CHECK(entries[9].error.rfind("truncated", 0) == 0);
  CHECK(entries[12].error.rfind("io", 0) == 0);
  const auto first = slurp(c.out / "summaries.jsonl");
  CHECK(run(cmd_summarize, c) == kExitPartial);
  CHECK(slurp(c.out / "summaries.jsonl") == first);
  fs::remove_all(root);
}

TEST_CASE("summarize rejects a stream bound to another row") {
  const auto root = scratch("digest");
  auto c = small_synth(root);
  REQUIRE(run(cmd_synth, c) == kExitOk);
  auto rows = read_manifest(c.out / "manifest.jsonl");
  rows[0].temperature = 1.7;
  write_manifest(c.out / "manifest.jsonl", rows);
  CHECK(run(cmd_summarize, c) == kExitPartial);
  const auto entries = read_summaries(c.out / "summaries.jsonl");
  CHECK(entries[0].error.rfind("mismatch", 0) == 0);
  fs::remove_all(root);
}

TEST_CASE("battery: empty input, unknown analysis, output") {
  const auto root = scratch("battery");
  fs::create_directories(root);
  std::ofstream(root / "summaries.jsonl").close();
  RunConfig c;
  c.out = root;
  std::string log;
  CHECK(run(cmd_battery, c, &log) == kExitOk);
  CHECK(log.find("warning") != std::string::npos);
  CHECK(fs::exists(root / "battery.json"));

  c.analyses = {"F1", "F42"};
  CHECK(run(cmd_battery, c, &log) == kExitUsage);
  CHECK(log.find("F42") != std::string::npos);
  c.analyses.clear();
  c.partition = "per_planet";
  CHECK(run(cmd_battery, c) == kExitUsage);
  c.partition = "pooled";
  c.summaries = root / "absent.jsonl";
  CHECK(run(cmd_battery, c) == kExitIo);
  fs::remove_all(root);
}

TEST_CASE("report: idempotent, missing input is an error") {
  const auto root = scratch("report");
  auto c = small_synth(root);
  REQUIRE(run(cmd_synth, c) == kExitOk);
  REQUIRE(run(cmd_summarize, c) == kExitOk);
  REQUIRE(run(cmd_battery, c) == kExitOk);
  auto r = c;
  r.out = root / "report";
  r.battery = root / "battery.json";
  REQUIRE(run(cmd_report, r) == kExitOk);
  const auto a = slurp(r.out / "tables" / "falsification.csv");
  const auto idx = slurp(r.out / "index.json");
  REQUIRE(run(cmd_report, r) == kExitOk);
  CHECK(slurp(r.out / "tables" / "falsification.csv") == a);
  CHECK(slurp(r.out / "index.json") == idx);

  r.battery = root / "missing.json";
  std::string log;
  CHECK(run(cmd_report, r, &log) == kExitIo);
  CHECK(log.find("missing.json") != std::string::npos);
  fs::remove_all(root);
}

TEST_CASE("zipf table") {
  const auto root = scratch("zipf");
  RunConfig c;
  c.out = root;
  c.alphas = {0.0, 1.0};
  c.zipf_vocab = {150000};
  REQUIRE(run(cmd_zipf, c) == kExitOk);
  const auto csv = slurp(root / "zipf.csv");
  CHECK(csv.find("0,150000,0\n") != std::string::npos);
  CHECK(csv.find("1,150000,0.31169641539141") != std::string::npos);
  c.alphas = {-1.0};
  CHECK(run(cmd_zipf, c) == kExitUsage);
  fs::remove_all(root);
}

TEST_CASE("synth usage errors") {
  RunConfig c = small_synth(scratch("synth_usage"));
  c.regime = "lstm_like";
  CHECK(run(cmd_synth, c) == kExitUsage);
  c.regime = "ssm_like";
  c.width = "f16";
  CHECK(run(cmd_synth, c) == kExitUsage);
}
