#pragma once

// Command implementations behind the edprof CLI. Each command takes the full
// RunConfig, writes its outputs under config.out and returns an exit code.
// Library exceptions are mapped to exit codes by run_command.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "edprof/error.hpp"

namespace edprof {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitValidation = 3,
  kExitPartial = 4,
  kExitIo = 5,
};

// Bad flag values or combinations. Maps to kExitUsage.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::filesystem::path manifest;  // defaults to <out>/manifest.jsonl where read
  std::filesystem::path out = ".";
  std::uint64_t seed = 0;
  unsigned jobs = 1;

  // prompts
  std::filesystem::path corpus = "corpus";
  std::uint32_t seeds = 1;  // seeds per (category, temperature)
  std::vector<std::string> categories;  // empty: all nine
  std::vector<std::string> languages{"EN"};
  std::vector<double> temperatures{0.7, 1.0, 1.3};
  std::string model = "model";
  std::string architecture = "transformer";
  std::uint64_t param_count = 1;
  std::uint32_t vocab_size = 0;  // required by prompts
  std::size_t length_budget = 64;
  std::size_t window_chars = 1000;
  std::optional<std::string> quantization;
  std::optional<bool> chat_template;

  // summarize
  std::string std_convention = "sample";

  // battery
  std::filesystem::path summaries;  // defaults to <out>/summaries.jsonl
  std::string partition = "per_model_class";
  std::string granularity = "domain";
  double alpha = 0.05;
  std::string baseline = "EN";
  std::vector<std::string> analyses;  // empty: all
  std::filesystem::path vocab;        // optional tokenizer vocabulary file

  // synth
  std::string regime = "ssm_like";
  std::uint32_t generations = 20;  // per (temperature, category) cell
  std::uint32_t length = 96;
  std::uint32_t synth_vocab = 256;
  double drift = 0.0;
  std::string width = "f32";

  // zipf
  std::vector<double> alphas{0.0, 0.5, 1.0, 1.5, 2.0};
  std::vector<std::uint64_t> zipf_vocab{150000};

  // report
  std::filesystem::path battery;  // defaults to <out>/battery.json
};

// Resolved default paths.
std::filesystem::path manifest_path(const RunConfig& c);
std::filesystem::path summaries_path(const RunConfig& c);
std::filesystem::path battery_path(const RunConfig& c);

int cmd_prompts(const RunConfig& c, std::ostream& log);
int cmd_summarize(const RunConfig& c, std::ostream& log);
int cmd_battery(const RunConfig& c, std::ostream& log);
int cmd_synth(const RunConfig& c, std::ostream& log);
int cmd_zipf(const RunConfig& c, std::ostream& log);
int cmd_report(const RunConfig& c, std::ostream& log);

// Runs fn, printing any exception to log and mapping it to an exit code:
// UsageError -> usage, IoError -> io, any other edprof::Error -> validation.
int run_command(const std::function<int()>& fn, std::ostream& log);

}  // namespace edprof
