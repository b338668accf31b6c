#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace covq {

enum class ErrorKind {
  domain,
  truncation,
  not_positive_semidefinite,
  rank_deficient,
  infinite_divergence,
  decomposition_invalid,
  infeasible_gain,
  condition_unmet,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::not_positive_semidefinite: return "not_positive_semidefinite";
    case ErrorKind::rank_deficient: return "rank_deficient";
    case ErrorKind::infinite_divergence: return "infinite_divergence";
    case ErrorKind::decomposition_invalid: return "decomposition_invalid";
    case ErrorKind::infeasible_gain: return "infeasible_gain";
    case ErrorKind::condition_unmet: return "condition_unmet";
  }
  return "unknown";
}

/// Every physics or validation failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) throw Error(kind, message);
}

}  // namespace covq
