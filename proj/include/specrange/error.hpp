#pragma once

#include <stdexcept>
#include <string>

namespace specrange {

/// Failure category. The CLI maps these onto its exit codes.
enum class ErrorKind {
  invalid_input,   // malformed scenario, violated precondition
  numerical,       // solver non-convergence, overflow, point outside a hull
  certification,   // a requested certificate did not pass
};

/// Every error carries the module and operation that raised it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, std::string operation, const std::string& message)
      : std::runtime_error(module + "::" + operation + ": " + message),
        kind_(kind),
        module_(std::move(module)),
        operation_(std::move(operation)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }
  const std::string& operation() const noexcept { return operation_; }

 private:
  ErrorKind kind_;
  std::string module_;
  std::string operation_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorKind kind, const char* module, const char* op, const std::string& msg) {
  throw Error(kind, module, op, msg);
}

}  // namespace detail
}  // namespace specrange
