#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ccpslice/trace_io.hpp"

namespace ccpslice::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kStaticError = 2, kBudgetExhausted = 3, kCriterionError = 4 };

struct SliceRequest {
  std::vector<std::string> marks;
  bool causal = false;
  bool exact = false;
  bool show_ids = false;
  bool full = false;
  std::optional<unsigned> unit;  // timed traces; defaults to the last unit
  std::string format = "visual";  // visual | trace
};

/// The text `ccpslice slice` prints. Throws CriterionError.
std::string slice_output(const TraceFile& file, const SliceRequest& request, std::vector<std::string>& warnings);

/// Entry point of the `ccpslice` tool.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

/// The interactive session over a loaded trace; returns the exit code.
int repl(const TraceFile& file, std::istream& in, std::ostream& out, std::ostream& err, bool prompt);

}  // namespace ccpslice::cli
