#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qcmi {

enum class ErrorKind {
  not_hermitian,
  not_psd,
  not_density_matrix,
  dimension_mismatch,
  out_of_range,
  off_simplex,
  rank_too_high,
  size_cap,
  parse,
  io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Raised for violated preconditions. `kind()` names the violated invariant.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::not_hermitian: return "not hermitian";
    case ErrorKind::not_psd: return "not positive semidefinite";
    case ErrorKind::not_density_matrix: return "not a density matrix";
    case ErrorKind::dimension_mismatch: return "dimension mismatch";
    case ErrorKind::out_of_range: return "out of range";
    case ErrorKind::off_simplex: return "off simplex";
    case ErrorKind::rank_too_high: return "ensemble smaller than rank";
    case ErrorKind::size_cap: return "size cap exceeded";
    case ErrorKind::parse: return "parse error";
    case ErrorKind::io: return "i/o error";
  }
  return "unknown";
}

}  // namespace qcmi
