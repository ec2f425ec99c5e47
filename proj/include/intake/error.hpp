#pragma once

#include <stdexcept>
#include <string>

namespace intake {

enum class Errc {
  invalid_argument,
  too_short,
  bad_header,
  non_monotone,
  non_uniform,
  malformed_row,
  bad_magic,
  version_mismatch,
  shape_mismatch,
  truncated_stream,
  overlapping_intervals,
  unpaired_edge,
  io,
};

// All library failures surface as intake::Error; code() tells callers
// (and the CLI exit-code mapping) what went wrong.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace intake
