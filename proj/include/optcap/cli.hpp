#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace optcap::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kUnconverged = 3,
  kNumericalError = 4,
};

struct Options {
  std::string config_path;
  std::optional<std::string> out;
  bool force = false;
  bool json = false;
  std::optional<int> grid_order;
  std::optional<std::uint64_t> seed;  // accepted for test tooling; never affects results
};

int cmd_classify(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_spectrum(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_capacity(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_compare(const Options& opts, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches; returns the process exit code.
int run(int argc, char** argv);

}  // namespace optcap::cli
