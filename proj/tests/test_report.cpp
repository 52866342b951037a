#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "edprof/error.hpp"
#include "edprof/random.hpp"
#include "edprof/report.hpp"

using namespace edprof;
namespace fs = std::filesystem;

namespace {

GenerationSummary make(const std::string& model, Architecture arch, PromptCategory cat, Language lang,
                       double t, std::uint64_t seed, std::uint32_t index, double ed) {
  GenerationSummary g;
  g.row.model_name = model;
  g.row.architecture = arch;
  g.row.param_count = arch == Architecture::ssm ? 2700000000ull : 27000000000ull;
  g.row.vocab_size = 1000;
  g.row.prompt_category = cat;
  g.row.prompt_text_ref = std::string(to_string(cat)) + "/" + std::string(to_string(lang));
  g.row.language = lang;
  g.row.temperature = t;
  g.row.seed = seed;
  g.row.generation_index = index;
  g.row.prompt_char_count = 100;
  g.row.prompt_token_count = 30;
  g.ed_mean = ed;
  g.ed_std = 0.1;
  g.length = 100;
  g.unique_token_count = 40;
  g.mean_entropy = 4.0;
  g.durbin_watson = 2.0 + 0.01 * static_cast<double>(index % 7);
  return g;
}

std::vector<GenerationSummary> fixture() {
  rng::Engine e(11);
  std::vector<GenerationSummary> s;
  std::uint32_t idx = 0;
  for (const char* m : {"alpha, \"quoted\"", "beta"}) {
    for (auto cat : kAllCategories) {
      for (double t : {0.7, 1.0, 1.3}) {
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
          s.push_back(make(m, Architecture::transformer, cat, Language::EN, t, seed, idx++,
                           0.3 + 0.02 * e.normal()));
        }
      }
    }
  }
  for (auto lang : {Language::EN, Language::JA, Language::AR}) {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
      s.push_back(make("beta", Architecture::transformer, PromptCategory::wikipedia, lang, 2.0, seed, idx++,
                       0.33 + 0.03 * static_cast<int>(lang) + 0.01 * e.normal()));
    }
  }
  return s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("battery json round trips") {
  const auto s = fixture();
  const auto rep = run_battery(s, {});
  const auto text = battery_to_json(rep);
  const auto back = battery_from_json(text);
  CHECK(battery_to_json(back) == text);
  CHECK(back.tests.size() == rep.tests.size());
  CHECK(back.input_count == s.size());
  REQUIRE(back.multilingual);
  CHECK(back.multilingual->languages.size() == 3);
  REQUIRE(back.convergence);
  CHECK(back.convergence->models.size() == 2);
}

TEST_CASE("non-finite numbers survive as NaN") {
  BatteryReport r;
  TestOutcome t;
  t.id = "F1";
  t.result = TestResult{};
  t.result->statistic = std::numeric_limits<double>::infinity();
  r.tests.push_back(t);
  const auto back = battery_from_json(battery_to_json(r));
  CHECK(std::isnan(back.tests[0].result->statistic));
}

TEST_CASE("malformed and missing battery input") {
  CHECK_THROWS_AS(battery_from_json("{"), ValidationError);
  CHECK_THROWS_AS(battery_from_json("{\"input_count\": 1}"), ValidationError);
  const auto missing = fs::temp_directory_path() / "edprof_report_missing" / "battery.json";
  try {
    read_battery(missing);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find(missing.string()) != std::string::npos);
  }
}

TEST_CASE("report tables have the documented layout") {
  const auto rep = run_battery(fixture(), {});
  const auto files = render_report(rep);
  auto find = [&](const std::string& p) -> const ReportFile& {
    for (const auto& f : files) {
      if (f.path == p) return f;
    }
    FAIL("missing " << p);
    return files.front();
  };

  for (const auto& f : files) {
    std::istringstream in(f.content);
    std::string header;
    std::getline(in, header);
    std::string expect;
    for (std::size_t i = 0; i < f.columns.size(); ++i) {
      std::string c = f.columns[i];
      if (c.find(',') != std::string::npos) {
        std::string q = "\"";
        for (char ch : c) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        c = q + "\"";
      }
      expect += (i ? "," : "") + c;
    }
    CHECK(header == expect);
    CHECK(!f.description.empty());
  }

  const auto& neutral = find("tables/neutral_categories.csv");
  CHECK(neutral.columns.front() == "category");
  CHECK(neutral.content.find("\nrandom_ascii,") < neutral.content.find("\nempty,"));

  const auto& domains = find("tables/domains.csv");
  CHECK(domains.content.find("\ncode,") < domains.content.find("\nwikipedia,"));
  // The quoted model name is escaped in the header.
  CHECK(domains.content.find("\"alpha, \"\"quoted\"\"\"") != std::string::npos);

  const auto& langs = find("tables/languages.csv");
  const auto en = langs.content.find("\nEN,"), ja = langs.content.find("\nJA,"), ar = langs.content.find("\nAR,");
  CHECK(en < ja);
  CHECK(ja < ar);
  CHECK(ar != std::string::npos);

  const auto& f = find("tables/falsification.csv");
  for (const char* id : {"\nF1,", "\nF2,", "\nF3,", "\nF4,", "\nF5,", "\nF6,", "\nF7,", "\nF8,"}) {
    CHECK(f.content.find(id) != std::string::npos);
  }
  CHECK(find("plots/temperature.csv").content.find("0.7") != std::string::npos);
}

TEST_CASE("report emission is idempotent") {
  const auto rep = run_battery(fixture(), {});
  const auto dir = fs::temp_directory_path() / "edprof_report_out";
  fs::remove_all(dir);
  const auto written = write_report(dir, rep);
  CHECK(written.back() == "index.json");
  std::vector<std::string> first;
  for (const auto& p : written) first.push_back(slurp(dir / p));
  write_report(dir, rep);
  for (std::size_t i = 0; i < written.size(); ++i) CHECK(slurp(dir / written[i]) == first[i]);

  write_battery(dir / "battery.json", rep);
  const auto again = read_battery(dir / "battery.json");
  const auto d2 = fs::temp_directory_path() / "edprof_report_out2";
  fs::remove_all(d2);
  write_report(d2, again);
  for (std::size_t i = 0; i < written.size(); ++i) CHECK(slurp(d2 / written[i]) == first[i]);
  fs::remove_all(dir);
  fs::remove_all(d2);
}

TEST_CASE("empty battery still renders every file") {
  const auto rep = run_battery({}, {});
  const auto files = render_report(rep);
  CHECK(files.size() >= 14);
  for (const auto& f : files) CHECK(!f.content.empty());
}
