#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cellex {

/// Error categories. The CLI maps each category to a distinct exit code.
enum class Errc {
  EmptyGraph,
  Malformed,
  DimensionMismatch,
  EndpointRange,
  InvalidArgument,
  Overflow,
  Consistency,
  NonFinite,
  DomainMismatch,
  Io,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace cellex
