#pragma once

// The `henon` command line: height, verify, batch, family and orbit.

#include <ostream>
#include <string>
#include <vector>

#include "henon/periodic_search.hpp"

namespace henon::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParseError = 2,
  kCapExceeded = 3,
  kRefuted = 4,
  kIoError = 5,
  kUnsupportedNonConstantA = 6,
};

// kRefuted for a refuted verdict, kOk otherwise.
ExitCode exit_code(Outcome outcome);

// args excludes the program name. Results go to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Splits on commas outside parentheses, trimming blanks.
std::vector<std::string> split_top_level(const std::string& text);

}  // namespace henon::cli
