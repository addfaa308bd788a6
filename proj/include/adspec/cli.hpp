// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace adspec
{

// Exit codes of the command-line tool.
enum ExitCode : int
{
  ExitOk = 0,
  ExitChecksFailed = 1,
  ExitConfig = 2,
  ExitCompute = 3,
};

struct RunConfig
{
  std::string subcommand;
  std::string input_path;
  std::string output_path;  // report file; tables are written next to it
  std::map<std::string, std::string> overrides;  // --set key=value on the input document
  std::uint64_t seed = 1;
  int threads = 0;     // 0 keeps the OpenMP default
  double tol = 1.0;    // scales every pass/fail threshold
  // Subcommand flags, already parsed to strings.
  std::map<std::string, std::string> flags;
};

// Parses argv and dispatches. Never throws; returns an ExitCode.
int run_cli(int argc, char **argv);

// Dispatch an already parsed configuration.
int run(const RunConfig &cfg);

}  // namespace adspec
