#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "edprof/error.hpp"
#include "edprof/manifest.hpp"
#include "edprof/summary.hpp"

using namespace edprof;
namespace fs = std::filesystem;

namespace {

ManifestRow sample_row() {
  ManifestRow r;
  r.model_name = "qwen-tiny";
  r.architecture = Architecture::transformer;
  r.param_count = 500000000;
  r.vocab_size = 151936;
  r.prompt_category = PromptCategory::wikipedia;
  r.prompt_text_ref = "wikipedia/EN/a.txt";
  r.language = Language::EN;
  r.temperature = 0.7;
  r.seed = 42;
  r.generation_index = 3;
  r.stream_path = "streams/000003.edls";
  return r;
}

fs::path temp_file(const char* name) {
  return fs::temp_directory_path() / (std::string("edprof_test_") + name);
}

}  // namespace

TEST_CASE("enum names round trip") {
  for (auto c : kAllCategories) CHECK(parse_category(to_string(c)) == c);
  for (auto l : kAllLanguages) CHECK(parse_language(to_string(l)) == l);
  CHECK(parse_architecture("ssm") == Architecture::ssm);
  CHECK_THROWS_AS(parse_category("poetry"), ValidationError);
  CHECK_THROWS_AS(parse_language("xx"), ValidationError);
  CHECK(is_neutral(PromptCategory::empty));
  CHECK(is_semantic(PromptCategory::code));
  CHECK(kSemanticCategories.size() + kNeutralCategories.size() == kAllCategories.size());
}

TEST_CASE("row JSON round trip") {
  auto r = sample_row();
  CHECK(parse_manifest_line(to_json_line(r)) == r);
  r.prompt_char_count = 120;
  r.prompt_token_count = 31;
  r.prompt_token_count_estimated = true;
  r.quantization = "q4_k_m";
  r.chat_template = false;
  CHECK(parse_manifest_line(to_json_line(r)) == r);
}

TEST_CASE("row validation") {
  CHECK_THROWS_AS(parse_manifest_line("{not json"), ValidationError);
  CHECK_THROWS_AS(parse_manifest_line(R"({"model_name":"x"})"), ValidationError);
  auto r = sample_row();
  r.temperature = 0.0;
  CHECK_THROWS_AS(validate_row(r), ValidationError);
  r = sample_row();
  r.vocab_size = 1;
  CHECK_THROWS_AS(validate_row(r), ValidationError);
  r = sample_row();
  r.model_name.clear();
  CHECK_THROWS_AS(validate_row(r), ValidationError);
}

TEST_CASE("manifest uniqueness") {
  std::vector<ManifestRow> rows{sample_row(), sample_row()};
  rows[1].generation_index = 4;
  CHECK_THROWS_AS(validate_manifest(rows), ValidationError);
  rows[1].seed = 43;
  CHECK_NOTHROW(validate_manifest(rows));
  rows[1].generation_index = 3;
  CHECK_THROWS_AS(validate_manifest(rows), ValidationError);
}

TEST_CASE("metadata digest matches the canonical JSON reference") {
  // Reference: python json.dumps(sort_keys=True, separators=(',', ':'),
  // ensure_ascii=False) without stream_path, then FNV-1a 64 of the UTF-8 bytes.
  auto r = sample_row();
  CHECK(metadata_digest(r) == 0x4ebd94a2ce1216ccull);
  r.stream_path = "elsewhere.edls";
  CHECK(metadata_digest(r) == 0x4ebd94a2ce1216ccull);
  r.language = Language::JA;
  r.prompt_text_ref = "\xE6\x97\xA5\xE6\x9C\xAC";
  CHECK(metadata_digest(r) == 0xa63e222d8cc0e947ull);
  r.seed = 1;
  CHECK(metadata_digest(r) != 0xa63e222d8cc0e947ull);
}

TEST_CASE("manifest file round trip and line-numbered errors") {
  std::vector<ManifestRow> rows;
  for (std::uint32_t i = 0; i < 5; ++i) {
    auto r = sample_row();
    r.seed = i;
    r.generation_index = i;
    rows.push_back(r);
  }
  const auto path = temp_file("manifest.jsonl");
  write_manifest(path, rows);
  CHECK(read_manifest(path) == rows);

  {
    std::ofstream out(path, std::ios::app);
    out << "\n{\"bad\":1}\n";
  }
  try {
    read_manifest(path);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find(":7:") != std::string::npos);
  }
  fs::remove(path);
  CHECK_THROWS_AS(read_manifest(path), IoError);
}

TEST_CASE("summaries file round trip") {
  std::vector<SummaryEntry> entries(2);
  entries[0].row = sample_row();
  GenerationSummary s;
  s.row = entries[0].row;
  s.ed_mean = 0.31;
  s.ed_std = 0.44;
  s.length = 128;
  s.unique_token_count = 90;
  s.mean_entropy = 8.2;
  s.durbin_watson = 1.97;
  entries[0].summary = s;
  entries[1].row = sample_row();
  entries[1].row.generation_index = 9;
  entries[1].error = "checksum mismatch";

  const auto path = temp_file("summaries.jsonl");
  write_summaries(path, entries);
  const auto back = read_summaries(path);
  fs::remove(path);
  REQUIRE(back.size() == 2);
  REQUIRE(back[0].summary);
  CHECK(back[0].summary->ed_mean == 0.31);
  CHECK(back[0].summary->durbin_watson == 1.97);
  CHECK(back[0].row == entries[0].row);
  CHECK_FALSE(back[1].summary);
  CHECK(back[1].error == "checksum mismatch");
  CHECK(successful(back).size() == 1);
}
