#pragma once

// Battery persistence (battery.json) and report emission: one CSV per table
// plus one CSV per plot series. No rendering. All output is a pure function
// of the battery report, so re-emitting gives identical bytes.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "edprof/battery.hpp"

namespace edprof {

// Regression residuals are not persisted; everything else round-trips.
// Non-finite numbers are written as null and read back as NaN.
std::string battery_to_json(const BatteryReport& report);
BatteryReport battery_from_json(std::string_view text);

void write_battery(const std::filesystem::path& path, const BatteryReport& report);
// IoError when the file is missing or unreadable, ValidationError when malformed.
BatteryReport read_battery(const std::filesystem::path& path);

struct ReportFile {
  std::string path;  // relative to the report directory, e.g. "tables/languages.csv"
  std::string description;
  std::vector<std::string> columns;
  std::string content;  // full CSV text including the header line
};

std::vector<ReportFile> render_report(const BatteryReport& report);

// Writes every rendered file plus index.json (path, description, columns)
// under out_dir. Returns the relative paths written, index.json last.
std::vector<std::string> write_report(const std::filesystem::path& out_dir, const BatteryReport& report);

}  // namespace edprof
