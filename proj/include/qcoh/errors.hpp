#pragma once

#include <stdexcept>
#include <string>

namespace qcoh {

// Every failure mode the library reports. CLI maps these onto exit codes.
enum class ErrorKind {
  length_mismatch,
  not_normalized,
  normalization_violated,
  weight_out_of_range,
  weight_sum_invalid,
  dims_mismatch,
  empty_keep_set,
  index_out_of_range,
  mixed_cuts,
  factor_dim_mismatch,
  decomposition_mismatch,
  unsupported_dims,
  invalid_state,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace qcoh
