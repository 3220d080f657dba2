#pragma once

#include <stdexcept>
#include <string>

namespace genmean {

// Failure categories shared by the library and the command-line tool.
// tag() yields the stable machine-readable code printed on stderr;
// exit_code() yields the process status the tool maps the category to.
enum class Errc {
  InvalidArgument,
  EmptySpace,
  NonPositiveWeight,
  DuplicateLabel,
  IndexOutOfRange,
  ShapeMismatch,
  OrderMismatch,
  ArityError,
  BadExponent,
  BadGrid,
  NonPositiveRho,
  Cond27Fails,
  BudgetExceeded,
  NotAGeneralizedMean,
};

const char* tag(Errc code) noexcept;
int exit_code(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

}  // namespace genmean
