#include "edprof/stream.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <sstream>

#include "edprof/error.hpp"

namespace edprof {
namespace {

template <class T>
T byteswap_value(T v) {
  auto bytes = std::bit_cast<std::array<std::byte, sizeof(T)>>(v);
  std::reverse(bytes.begin(), bytes.end());
  return std::bit_cast<T>(bytes);
}

template <class T>
std::array<std::byte, sizeof(T)> to_le(T v) {
  if constexpr (std::endian::native == std::endian::big) v = byteswap_value(v);
  return std::bit_cast<std::array<std::byte, sizeof(T)>>(v);
}

template <class T>
T from_le(const std::array<std::byte, sizeof(T)>& bytes) {
  T v = std::bit_cast<T>(bytes);
  if constexpr (std::endian::native == std::endian::big) v = byteswap_value(v);
  return v;
}

std::size_t width_bytes(ValueWidth w) { return static_cast<std::size_t>(w); }

std::uint32_t record_length(const StreamHeader& h) {
  const std::uint64_t len = 8ull + std::uint64_t{h.vocab_size} * width_bytes(h.value_width);
  if (len >= kEndMarker) throw StreamError("record too large for a u32 length prefix");
  return static_cast<std::uint32_t>(len);
}

void check_header(const StreamHeader& h) {
  if (h.format_version != kStreamFormatVersion) {
    throw UnsupportedVersionError(
        "unsupported .edls format version " + std::to_string(h.format_version), h.format_version);
  }
  if (h.vocab_size < 2) throw StreamError("vocab_size must be >= 2");
  if (h.value_kind != ValueKind::raw_logits && h.value_kind != ValueKind::probabilities) {
    throw StreamError("unknown value_kind");
  }
  if (h.value_width != ValueWidth::binary32 && h.value_width != ValueWidth::binary64) {
    throw StreamError("unknown value_width");
  }
  if (h.generation_id.size() > kMaxGenerationIdBytes) throw StreamError("generation_id too long");
}

}  // namespace

std::size_t PositionRecord::size() const noexcept {
  return std::visit([](const auto& v) { return v.size(); }, values);
}

double PositionRecord::value(std::size_t i) const {
  return std::visit([i](const auto& v) { return static_cast<double>(v.at(i)); }, values);
}

ValueWidth PositionRecord::width() const noexcept {
  return std::holds_alternative<std::vector<float>>(values) ? ValueWidth::binary32
                                                            : ValueWidth::binary64;
}

// ---------------------------------------------------------------------------
// Writer
// ---------------------------------------------------------------------------

StreamWriter::StreamWriter(std::ostream& sink, StreamHeader header)
    : sink_(sink), header_(std::move(header)) {
  check_header(header_);
  record_length(header_);
  put(std::as_bytes(std::span(kStreamMagic)));
  put(to_le(header_.format_version));
  put(to_le(static_cast<std::uint8_t>(header_.value_kind)));
  put(to_le(static_cast<std::uint8_t>(header_.value_width)));
  put(to_le(header_.vocab_size));
  put(to_le(header_.position_count_hint));
  put(to_le(header_.metadata_digest));
  put(to_le(static_cast<std::uint32_t>(header_.generation_id.size())));
  put(std::as_bytes(std::span(header_.generation_id.data(), header_.generation_id.size())));
}

void StreamWriter::put(std::span<const std::byte> bytes) {
  sink_.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  if (!sink_) throw IoError("failed writing .edls stream");
  hash_.update(bytes);
  bytes_ += bytes.size();
}

void StreamWriter::write(const PositionRecord& record) {
  if (finished_) throw StreamError("stream already finalized");
  if (record.width() != header_.value_width) {
    throw RecordMismatchError("record value width does not match header");
  }
  if (record.size() != header_.vocab_size) {
    throw RecordMismatchError("record has " + std::to_string(record.size()) +
                              " values, header declares vocab_size " +
                              std::to_string(header_.vocab_size));
  }
  if (have_last_index_ && record.position_index <= last_index_) {
    throw RecordMismatchError("position_index must be strictly increasing (got " +
                              std::to_string(record.position_index) + " after " +
                              std::to_string(last_index_) + ")");
  }
  if (record.sampled_token_id >= header_.vocab_size) {
    throw RecordMismatchError("sampled_token_id out of vocabulary range");
  }
  std::visit(
      [&](const auto& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i) {
          if (!std::isfinite(vals[i])) {
            throw RecordMismatchError("non-finite value at index " + std::to_string(i));
          }
        }
      },
      record.values);

  put(to_le(record_length(header_)));
  put(to_le(record.position_index));
  put(to_le(record.sampled_token_id));
  std::visit(
      [&](const auto& vals) {
        using T = typename std::decay_t<decltype(vals)>::value_type;
        if constexpr (std::endian::native == std::endian::little) {
          put(std::as_bytes(std::span<const T>(vals)));
        } else {
          for (const T v : vals) put(to_le(v));
        }
      },
      record.values);
  have_last_index_ = true;
  last_index_ = record.position_index;
  ++records_;
}

std::uint64_t StreamWriter::finish() {
  if (finished_) throw StreamError("stream already finalized");
  put(to_le(kEndMarker));
  put(to_le(records_));
  const auto sum = to_le(hash_.digest());
  sink_.write(reinterpret_cast<const char*>(sum.data()), static_cast<std::streamsize>(sum.size()));
  sink_.flush();
  if (!sink_) throw IoError("failed writing .edls trailer");
  bytes_ += sum.size();
  finished_ = true;
  return bytes_;
}

std::uint64_t write_stream(const StreamHeader& header, std::span<const PositionRecord> records,
                           std::ostream& sink) {
  StreamWriter w(sink, header);
  for (const auto& r : records) w.write(r);
  return w.finish();
}

// ---------------------------------------------------------------------------
// Reader
// ---------------------------------------------------------------------------

void StreamReader::read_exact(std::span<std::byte> out, const char* what) {
  source_.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(out.size()));
  const auto got = static_cast<std::uint64_t>(source_.gcount());
  if (got != out.size()) {
    throw TruncationError("truncated .edls stream: expected " + std::to_string(out.size()) +
                              " bytes of " + what + " at byte offset " + std::to_string(offset_) +
                              ", got " + std::to_string(got),
                          offset_ + got);
  }
  offset_ += got;
}

template <class T>
T StreamReader::read_scalar(const char* what) {
  std::array<std::byte, sizeof(T)> buf{};
  read_exact(buf, what);
  hash_.update(buf);
  return from_le<T>(buf);
}

StreamReader::StreamReader(std::istream& source) : source_(source) {
  std::array<std::byte, 4> magic{};
  read_exact(magic, "magic");
  if (std::memcmp(magic.data(), kStreamMagic.data(), 4) != 0) {
    throw BadMagicError("not an .edls stream (bad magic)");
  }
  hash_.update(magic);
  header_.format_version = read_scalar<std::uint16_t>("format_version");
  if (header_.format_version != kStreamFormatVersion) {
    throw UnsupportedVersionError(
        "unsupported .edls format version " + std::to_string(header_.format_version),
        header_.format_version);
  }
  header_.value_kind = static_cast<ValueKind>(read_scalar<std::uint8_t>("value_kind"));
  header_.value_width = static_cast<ValueWidth>(read_scalar<std::uint8_t>("value_width"));
  header_.vocab_size = read_scalar<std::uint32_t>("vocab_size");
  header_.position_count_hint = read_scalar<std::uint32_t>("position_count_hint");
  header_.metadata_digest = read_scalar<std::uint64_t>("metadata_digest");
  const auto id_len = read_scalar<std::uint32_t>("generation_id length");
  if (id_len > kMaxGenerationIdBytes) throw StreamError("generation_id length out of range");
  header_.generation_id.assign(id_len, '\0');
  auto id_bytes = std::as_writable_bytes(std::span(header_.generation_id.data(), id_len));
  read_exact(id_bytes, "generation_id");
  hash_.update(id_bytes);
  check_header(header_);
  record_length(header_);

  if (header_.value_width == ValueWidth::binary32) {
    record_.values = std::vector<float>(header_.vocab_size);
  } else {
    record_.values = std::vector<double>(header_.vocab_size);
  }
}

const PositionRecord* StreamReader::next() {
  if (finished_) return nullptr;
  const auto len = read_scalar<std::uint32_t>("record length");
  if (len == kEndMarker) {
    const auto count = read_scalar<std::uint32_t>("record count");
    std::array<std::byte, 8> sum_bytes{};
    read_exact(sum_bytes, "checksum");
    const auto stored = from_le<std::uint64_t>(sum_bytes);
    if (stored != hash_.digest()) {
      throw ChecksumError("checksum mismatch at end of .edls stream", stored, hash_.digest());
    }
    if (count != records_) {
      throw RecordMismatchError("trailer declares " + std::to_string(count) +
                                " records, stream holds " + std::to_string(records_));
    }
    if (source_.peek() != std::char_traits<char>::eof()) {
      throw StreamError("trailing bytes after .edls checksum at offset " +
                        std::to_string(offset_));
    }
    source_.clear();
    finished_ = true;
    return nullptr;
  }
  if (len != record_length(header_)) {
    throw RecordMismatchError("record length " + std::to_string(len) + " at byte offset " +
                              std::to_string(offset_ - 4) + " does not match header (expected " +
                              std::to_string(record_length(header_)) + ")");
  }
  const auto index = read_scalar<std::uint32_t>("position_index");
  const auto token = read_scalar<std::uint32_t>("sampled_token_id");
  std::visit(
      [&](auto& vals) {
        using T = typename std::decay_t<decltype(vals)>::value_type;
        auto bytes = std::as_writable_bytes(std::span<T>(vals));
        read_exact(bytes, "record values");
        hash_.update(bytes);
        if constexpr (std::endian::native == std::endian::big) {
          for (auto& v : vals) v = byteswap_value(v);
        }
      },
      record_.values);
  if (have_last_index_ && index <= record_.position_index) {
    throw RecordMismatchError("position_index " + std::to_string(index) +
                              " is not strictly increasing");
  }
  if (token >= header_.vocab_size) {
    throw RecordMismatchError("sampled_token_id " + std::to_string(token) +
                              " outside vocabulary");
  }
  record_.position_index = index;
  record_.sampled_token_id = token;
  have_last_index_ = true;
  ++records_;
  return &record_;
}

void StreamReader::drain() {
  while (next() != nullptr) {
  }
}

std::pair<StreamHeader, std::vector<PositionRecord>> read_all(std::istream& source) {
  StreamReader reader(source);
  std::vector<PositionRecord> records;
  while (const auto* r = reader.next()) records.push_back(*r);
  return {reader.header(), std::move(records)};
}

}  // namespace edprof
