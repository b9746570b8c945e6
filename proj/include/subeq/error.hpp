#pragma once

#include <stdexcept>
#include <string>

namespace subeq {

enum class ErrorKind {
  invalid_argument,
  dimension_mismatch,
  non_convergence,
  sampler_exhausted,
  non_hyperbolic,
  singular_map,
  degenerate_geometry,
  bracket_failure,
  config,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const char* what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace subeq
