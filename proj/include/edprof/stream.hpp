#pragma once

// Binary logit-stream format (.edls), version 1.
//
// All integers and values are little-endian.
//
//   offset  size  field
//   0       4     magic "EDLS"
//   4       2     format_version (u16, = 1)
//   6       1     value_kind (0 = raw_logits, 1 = probabilities)
//   7       1     value_width in bytes (4 = binary32, 8 = binary64)
//   8       4     vocab_size (u32, >= 2)
//   12      4     position_count_hint (u32, 0 = unknown)
//   16      8     metadata_digest (u64)
//   24      4     generation_id byte length n (u32)
//   28      n     generation_id (UTF-8)
//
// then zero or more records:
//
//   4     record_length (u32) = 8 + vocab_size * value_width
//   4     position_index (u32, strictly increasing)
//   4     sampled_token_id (u32, < vocab_size)
//   V*w   values
//
// then the trailer:
//
//   4     end marker 0xFFFFFFFF
//   4     record_count (u32)
//   8     checksum: FNV-1a 64 over every preceding byte of the file
//
// Nothing may follow the checksum.

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "edprof/checksum.hpp"

namespace edprof {

inline constexpr std::array<char, 4> kStreamMagic = {'E', 'D', 'L', 'S'};
inline constexpr std::uint16_t kStreamFormatVersion = 1;
inline constexpr std::uint32_t kEndMarker = 0xFFFFFFFFu;
inline constexpr std::uint32_t kMaxGenerationIdBytes = 1u << 16;

enum class ValueKind : std::uint8_t { raw_logits = 0, probabilities = 1 };
enum class ValueWidth : std::uint8_t { binary32 = 4, binary64 = 8 };

struct StreamHeader {
  std::uint16_t format_version = kStreamFormatVersion;
  ValueKind value_kind = ValueKind::raw_logits;
  ValueWidth value_width = ValueWidth::binary32;
  std::uint32_t vocab_size = 0;
  std::uint32_t position_count_hint = 0;
  std::uint64_t metadata_digest = 0;
  std::string generation_id;

  friend bool operator==(const StreamHeader&, const StreamHeader&) = default;
};

using RecordValues = std::variant<std::vector<float>, std::vector<double>>;

struct PositionRecord {
  std::uint32_t position_index = 0;
  std::uint32_t sampled_token_id = 0;
  RecordValues values;

  std::size_t size() const noexcept;
  double value(std::size_t i) const;
  ValueWidth width() const noexcept;
};

class StreamWriter {
 public:
  // Writes the header immediately.
  StreamWriter(std::ostream& sink, StreamHeader header);

  void write(const PositionRecord& record);
  // Writes the trailer. Returns the total number of bytes written.
  std::uint64_t finish();

  const StreamHeader& header() const noexcept { return header_; }

 private:
  void put(std::span<const std::byte> bytes);

  std::ostream& sink_;
  StreamHeader header_;
  Fnv1a64 hash_;
  std::uint64_t bytes_ = 0;
  std::uint32_t records_ = 0;
  bool have_last_index_ = false;
  std::uint32_t last_index_ = 0;
  bool finished_ = false;
};

std::uint64_t write_stream(const StreamHeader& header, std::span<const PositionRecord> records,
                           std::ostream& sink);

// Lazy reader. One record buffer is allocated (vocab_size values) and reused
// for every record, so memory is independent of stream length. The checksum is
// verified when next() reaches the trailer.
class StreamReader {
 public:
  explicit StreamReader(std::istream& source);

  const StreamHeader& header() const noexcept { return header_; }

  // Next record, or nullptr once the trailer has been read and verified.
  // The pointer stays valid until the following call.
  const PositionRecord* next();

  // Reads and discards the remaining records, verifying the trailer.
  void drain();

  bool finished() const noexcept { return finished_; }
  std::uint32_t records_read() const noexcept { return records_; }
  std::uint64_t bytes_read() const noexcept { return offset_; }

 private:
  void read_exact(std::span<std::byte> out, const char* what);
  template <class T>
  T read_scalar(const char* what);

  std::istream& source_;
  StreamHeader header_;
  PositionRecord record_;
  Fnv1a64 hash_;
  std::uint64_t offset_ = 0;
  std::uint32_t records_ = 0;
  bool have_last_index_ = false;
  bool finished_ = false;
};

// Eager convenience for small streams (tests, tooling).
std::pair<StreamHeader, std::vector<PositionRecord>> read_all(std::istream& source);

}  // namespace edprof
