#pragma once

#include <stdexcept>
#include <string>

namespace taxjoin {

enum class errc {
  empty_input,
  multiple_roots,
  cycle_detected,
  duplicate_child,
  invalid_node_id,
  empty_matrix,
  empty_set,
  set_too_large,
  tau_exceeds_set_size,
  instance_too_large,
  insufficient_iterations,
  parse_error,
  invalid_config,
};

const char* errc_name(errc code) noexcept;

/// Error carrying a machine-checkable code plus a human-readable message.
class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace taxjoin
