#include "genmean/error.hpp"

namespace genmean {

const char* tag(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument:      return "E_INVALID_ARGUMENT";
    case Errc::EmptySpace:           return "E_EMPTY_SPACE";
    case Errc::NonPositiveWeight:    return "E_NON_POSITIVE_WEIGHT";
    case Errc::DuplicateLabel:       return "E_DUPLICATE_LABEL";
    case Errc::IndexOutOfRange:      return "E_INDEX_OUT_OF_RANGE";
    case Errc::ShapeMismatch:        return "E_SHAPE_MISMATCH";
    case Errc::OrderMismatch:        return "E_ORDER_MISMATCH";
    case Errc::ArityError:           return "E_ARITY_ERROR";
    case Errc::BadExponent:          return "E_BAD_EXPONENT";
    case Errc::BadGrid:              return "E_BAD_GRID";
    case Errc::NonPositiveRho:       return "E_NON_POSITIVE_RHO";
    case Errc::Cond27Fails:          return "E_COND27_FAILS";
    case Errc::BudgetExceeded:       return "E_BUDGET_EXCEEDED";
    case Errc::NotAGeneralizedMean:  return "E_NOT_A_GENERALIZED_MEAN";
  }
  return "E_UNKNOWN";
}

int exit_code(Errc code) noexcept {
  switch (code) {
    case Errc::BudgetExceeded:
      return 2;
    case Errc::NotAGeneralizedMean:
    case Errc::Cond27Fails:
      return 3;
    default:
      return 1;
  }
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(tag(code)) + ": " + message), code_(code) {}

void fail(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace genmean
