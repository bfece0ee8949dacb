#pragma once

#include <stdexcept>
#include <string>

#include "rssloc/bench.hpp"

namespace rssloc {

/// Raised on config syntax or domain errors; carries the offending line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message)
      : std::runtime_error("config line " + std::to_string(line) + ": " + message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Everything the CLI needs: the sweep plus run-level knobs.
struct CliConfig {
  SweepConfig sweep;
  std::string output_dir = ".";
  int parallelism = 1;
  int verbosity = 0;
};

/// Line-based `key = value` format with optional `[section]` headers and
/// `#` comments. Unknown keys are rejected. An empty document yields all
/// defaults.
CliConfig parse_config(const std::string& text);

/// Reads and parses a config file; throws std::runtime_error on I/O errors.
CliConfig load_config(const std::string& path);

/// Emits a document that parse_config maps back to the same value.
std::string serialize_config(const CliConfig& config);

}  // namespace rssloc
