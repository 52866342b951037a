#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "edprof/checksum.hpp"
#include "edprof/error.hpp"
#include "edprof/random.hpp"
#include "edprof/stream.hpp"
#include "edprof/summary.hpp"
#include "support/planted.hpp"

using namespace edprof;

namespace {

// Byte-level reference encoder, independent of StreamWriter.
struct Bytes {
  std::string s;
  template <class T>
  void put(T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    s.append(buf, sizeof(T));
  }
};

std::uint64_t ref_fnv(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

StreamHeader make_header(std::uint32_t vocab, ValueKind kind, ValueWidth width,
                         std::string id = "gen-0") {
  StreamHeader h;
  h.value_kind = kind;
  h.value_width = width;
  h.vocab_size = vocab;
  h.metadata_digest = 0x0123456789abcdefull;
  h.generation_id = std::move(id);
  return h;
}

std::vector<PositionRecord> random_records(std::uint32_t vocab, std::size_t n, bool f32,
                                           std::uint64_t seed) {
  rng::Engine e(seed);
  std::vector<PositionRecord> out;
  for (std::size_t t = 0; t < n; ++t) {
    PositionRecord r;
    r.position_index = static_cast<std::uint32_t>(t);
    r.sampled_token_id = static_cast<std::uint32_t>(e.index(vocab));
    if (f32) {
      std::vector<float> v(vocab);
      for (auto& x : v) x = static_cast<float>(e.normal() * 3.0);
      r.values = std::move(v);
    } else {
      std::vector<double> v(vocab);
      for (auto& x : v) x = e.normal() * 3.0;
      r.values = std::move(v);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string encode(const StreamHeader& h, const std::vector<PositionRecord>& recs) {
  std::ostringstream os(std::ios::binary);
  write_stream(h, recs, os);
  return os.str();
}

GenerationSummary summarize_bytes(const std::string& bytes, const SummarizeOptions& o = {}) {
  std::istringstream is(bytes, std::ios::binary);
  StreamReader r(is);
  return summarize_stream(r, o);
}

PositionRecord prob_record(std::uint32_t idx, std::vector<double> p, std::uint32_t token = 0) {
  PositionRecord r;
  r.position_index = idx;
  r.sampled_token_id = token;
  r.values = std::move(p);
  return r;
}

}  // namespace

TEST_CASE("FNV-1a 64 reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("writer output matches a hand-built byte layout") {
  const auto h = make_header(3, ValueKind::probabilities, ValueWidth::binary32, "ab");
  std::vector<PositionRecord> recs;
  PositionRecord r;
  r.position_index = 0;
  r.sampled_token_id = 2;
  r.values = std::vector<float>{0.25f, 0.25f, 0.5f};
  recs.push_back(r);

  Bytes b;
  b.s = "EDLS";
  b.put<std::uint16_t>(1);
  b.put<std::uint8_t>(1);
  b.put<std::uint8_t>(4);
  b.put<std::uint32_t>(3);
  b.put<std::uint32_t>(0);
  b.put<std::uint64_t>(0x0123456789abcdefull);
  b.put<std::uint32_t>(2);
  b.s += "ab";
  b.put<std::uint32_t>(8 + 3 * 4);
  b.put<std::uint32_t>(0);
  b.put<std::uint32_t>(2);
  b.put(0.25f);
  b.put(0.25f);
  b.put(0.5f);
  b.put<std::uint32_t>(0xFFFFFFFFu);
  b.put<std::uint32_t>(1);
  b.put<std::uint64_t>(ref_fnv(b.s));

  CHECK(encode(h, recs) == b.s);
}

TEST_CASE("round trip is bit-exact") {
  for (bool f32 : {true, false}) {
    const auto h = make_header(97, ValueKind::raw_logits,
                               f32 ? ValueWidth::binary32 : ValueWidth::binary64);
    const auto recs = random_records(97, 40, f32, 3);
    const std::string bytes = encode(h, recs);

    std::istringstream is(bytes, std::ios::binary);
    auto [h2, recs2] = read_all(is);
    CHECK(h2 == h);
    REQUIRE(recs2.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
      CHECK(recs2[i].position_index == recs[i].position_index);
      CHECK(recs2[i].sampled_token_id == recs[i].sampled_token_id);
      std::visit(
          [&](const auto& a) {
            using V = std::decay_t<decltype(a)>;
            const auto& b = std::get<V>(recs2[i].values);
            REQUIRE(a.size() == b.size());
            CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(a[0])) == 0);
          },
          recs[i].values);
    }
    CHECK(encode(h2, recs2) == bytes);
  }
}

TEST_CASE("serialization is deterministic") {
  const auto h = make_header(50, ValueKind::raw_logits, ValueWidth::binary32);
  CHECK(encode(h, random_records(50, 10, true, 1)) == encode(h, random_records(50, 10, true, 1)));
}

TEST_CASE("empty stream round trips") {
  const auto h = make_header(5, ValueKind::raw_logits, ValueWidth::binary32);
  const std::string bytes = encode(h, {});
  std::istringstream is(bytes, std::ios::binary);
  auto [h2, recs] = read_all(is);
  CHECK(recs.empty());
  CHECK_THROWS_AS(summarize_bytes(bytes), ValidationError);
}

TEST_CASE("writer rejects malformed records") {
  std::ostringstream os;
  StreamWriter w(os, make_header(4, ValueKind::raw_logits, ValueWidth::binary32));
  PositionRecord r;
  r.values = std::vector<float>(3, 0.0f);
  CHECK_THROWS_AS(w.write(r), RecordMismatchError);
  r.values = std::vector<double>(4, 0.0);
  CHECK_THROWS_AS(w.write(r), RecordMismatchError);
  r.values = std::vector<float>{0.0f, NAN, 0.0f, 0.0f};
  CHECK_THROWS_AS(w.write(r), RecordMismatchError);
  r.values = std::vector<float>(4, 0.0f);
  r.sampled_token_id = 4;
  CHECK_THROWS_AS(w.write(r), RecordMismatchError);
  r.sampled_token_id = 0;
  r.position_index = 5;
  w.write(r);
  CHECK_THROWS_AS(w.write(r), RecordMismatchError);
}

TEST_CASE("reader rejects a record with V-1 values") {
  const auto h = make_header(4, ValueKind::raw_logits, ValueWidth::binary32, "");
  Bytes b;
  b.s = "EDLS";
  b.put<std::uint16_t>(1);
  b.put<std::uint8_t>(0);
  b.put<std::uint8_t>(4);
  b.put<std::uint32_t>(4);
  b.put<std::uint32_t>(0);
  b.put<std::uint64_t>(h.metadata_digest);
  b.put<std::uint32_t>(0);
  b.put<std::uint32_t>(8 + 3 * 4);
  b.put<std::uint32_t>(0);
  b.put<std::uint32_t>(0);
  for (int i = 0; i < 3; ++i) b.put(0.0f);
  b.put<std::uint32_t>(0xFFFFFFFFu);
  b.put<std::uint32_t>(1);
  b.put<std::uint64_t>(ref_fnv(b.s));
  std::istringstream is(b.s, std::ios::binary);
  CHECK_THROWS_AS(read_all(is), RecordMismatchError);
}

TEST_CASE("truncation reports the offset") {
  const auto h = make_header(16, ValueKind::raw_logits, ValueWidth::binary32);
  const std::string bytes = encode(h, random_records(16, 5, true, 2));
  for (std::size_t cut : {std::size_t{2}, std::size_t{20}, bytes.size() / 2, bytes.size() - 1}) {
    std::istringstream is(bytes.substr(0, cut), std::ios::binary);
    try {
      read_all(is);
      FAIL("expected TruncationError at cut " << cut);
    } catch (const TruncationError& e) {
      CHECK(e.offset() <= cut);
      CHECK(e.offset() + 8 >= cut);
    }
  }
}

TEST_CASE("a flipped value byte is a checksum failure") {
  const auto h = make_header(16, ValueKind::raw_logits, ValueWidth::binary32, "g");
  const std::string bytes = encode(h, random_records(16, 5, true, 4));
  const std::size_t header_len = 28 + 1;
  const std::size_t first_value = header_len + 12;
  std::string bad = bytes;
  bad[first_value + 5] = static_cast<char>(bad[first_value + 5] ^ 0x01);
  std::istringstream is(bad, std::ios::binary);
  CHECK_THROWS_AS(read_all(is), ChecksumError);

  // Also through summarize, even when the flip produces a NaN/Inf exponent.
  std::string bad2 = bytes;
  bad2[first_value + 3] = static_cast<char>(0x7F);
  bad2[first_value + 2] = static_cast<char>(0x80);
  CHECK_THROWS_AS(summarize_bytes(bad2), ChecksumError);
}

TEST_CASE("bad magic and unsupported version") {
  const auto h = make_header(4, ValueKind::raw_logits, ValueWidth::binary32);
  std::string bytes = encode(h, random_records(4, 1, true, 5));
  std::string a = bytes;
  a[0] = 'X';
  std::istringstream ia(a, std::ios::binary);
  CHECK_THROWS_AS(read_all(ia), BadMagicError);

  std::string v = bytes;
  v[4] = 2;
  std::istringstream iv(v, std::ios::binary);
  try {
    read_all(iv);
    FAIL("expected UnsupportedVersionError");
  } catch (const UnsupportedVersionError& e) {
    CHECK(e.version() == 2);
  }
}

TEST_CASE("trailing garbage and record-count mismatch") {
  const auto h = make_header(4, ValueKind::raw_logits, ValueWidth::binary32);
  const std::string bytes = encode(h, random_records(4, 2, true, 6));
  std::istringstream extra(bytes + "x", std::ios::binary);
  CHECK_THROWS_AS(read_all(extra), StreamError);
}

TEST_CASE("summaries of planted streams") {
  SUBCASE("uniform probabilities") {
    const auto h = make_header(1000, ValueKind::probabilities, ValueWidth::binary64);
    std::vector<PositionRecord> recs;
    for (std::uint32_t t = 0; t < 10; ++t)
      recs.push_back(prob_record(t, std::vector<double>(1000, 1.0 / 1000.0), t));
    const auto s = summarize_bytes(encode(h, recs));
    CHECK(std::abs(s.ed_mean) <= 1e-9);
    CHECK(s.ed_std <= 1e-9);
    CHECK(s.length == 10);
    CHECK(s.unique_token_count == 10);
    CHECK(s.mean_entropy == doctest::Approx(std::log(1000.0)));
  }
  SUBCASE("one-hot probabilities") {
    const auto h = make_header(64, ValueKind::probabilities, ValueWidth::binary64);
    std::vector<PositionRecord> recs;
    for (std::uint32_t t = 0; t < 7; ++t) {
      std::vector<double> p(64, 0.0);
      p[3] = 1.0;
      recs.push_back(prob_record(t, p, 3));
    }
    const auto s = summarize_bytes(encode(h, recs));
    CHECK(std::abs(s.ed_mean - 1.0) <= 1e-9);
    CHECK(s.unique_token_count == 1);
  }
  SUBCASE("planted two-point targets") {
    const std::uint32_t vocab = 4096;
    const auto h = make_header(vocab, ValueKind::probabilities, ValueWidth::binary64);
    const double floor = 1.0 - std::log(2.0) / std::log(static_cast<double>(vocab));
    std::vector<double> targets;
    std::vector<PositionRecord> recs;
    rng::Engine e(8);
    for (std::uint32_t t = 0; t < 50; ++t) {
      const double target = floor + (1.0 - floor) * e.uniform() * 0.999;
      const auto p = testing::two_point_with_ed(target, vocab);
      targets.push_back(testing::naive_ed(p));
      recs.push_back(prob_record(t, p));
    }
    double m = 0.0;
    for (double x : targets) m += x;
    m /= static_cast<double>(targets.size());
    const auto s = summarize_bytes(encode(h, recs));
    CHECK(std::abs(s.ed_mean - m) <= 1e-9);
  }
  SUBCASE("raw logits at T equal log-probabilities scaled by T") {
    const std::uint32_t vocab = 300;
    const double temp = 0.7;
    const auto h = make_header(vocab, ValueKind::raw_logits, ValueWidth::binary64);
    std::vector<double> targets;
    std::vector<PositionRecord> recs;
    for (std::uint32_t t = 0; t < 20; ++t) {
      const auto p = testing::hot_token_with_ed(0.05 * (t + 1) - 0.01, vocab);
      targets.push_back(testing::naive_ed(p));
      std::vector<double> z(vocab);
      for (std::size_t i = 0; i < vocab; ++i) z[i] = temp * std::log(p[i]) + 11.0;
      recs.push_back(prob_record(t, z));
    }
    double m = 0.0;
    for (double x : targets) m += x;
    m /= static_cast<double>(targets.size());
    SummarizeOptions o;
    o.temperature = temp;
    CHECK(std::abs(summarize_bytes(encode(h, recs), o).ed_mean - m) <= 1e-9);
  }
}

TEST_CASE("summary rejects gaps and temperature mismatch") {
  const auto h = make_header(4, ValueKind::probabilities, ValueWidth::binary64);
  std::vector<PositionRecord> recs{prob_record(0, {0.25, 0.25, 0.25, 0.25}),
                                   prob_record(2, {0.25, 0.25, 0.25, 0.25})};
  CHECK_THROWS_AS(summarize_bytes(encode(h, recs)), ValidationError);

  recs.pop_back();
  SummarizeOptions o;
  o.temperature = 1.0;
  o.recorded_temperature = 0.7;
  CHECK_THROWS_AS(summarize_bytes(encode(h, recs), o), ValidationError);

  std::vector<PositionRecord> unnorm{prob_record(0, {0.3, 0.3, 0.3, 0.3})};
  CHECK_THROWS_AS(summarize_bytes(encode(h, unnorm)), ValidationError);
}
