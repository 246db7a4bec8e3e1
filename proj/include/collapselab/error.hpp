#ifndef COLLAPSELAB_ERROR_HPP_
#define COLLAPSELAB_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace collapselab {

  enum class ErrorCode {
    invalid_argument,
    letter_out_of_range,
    backend_mismatch,
    backend_unsupported,
    not_found_within_cap,
    ball_too_large,
    inconsistent_oracle,
    search_exhausted,
    membership_violation,
    not_normal,
    step_cap_exceeded,
    selection_failed,
    decomposition_failed,
    cap_exceeded,
    not_realizable,
    malformed_input,
  };

  constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
      case ErrorCode::invalid_argument: return "INVALID_ARGUMENT";
      case ErrorCode::letter_out_of_range: return "LETTER_OUT_OF_RANGE";
      case ErrorCode::backend_mismatch: return "BACKEND_MISMATCH";
      case ErrorCode::backend_unsupported: return "BACKEND_UNSUPPORTED";
      case ErrorCode::not_found_within_cap: return "NOT_FOUND_WITHIN_CAP";
      case ErrorCode::ball_too_large: return "BALL_TOO_LARGE";
      case ErrorCode::inconsistent_oracle: return "INCONSISTENT_ORACLE";
      case ErrorCode::search_exhausted: return "SEARCH_EXHAUSTED";
      case ErrorCode::membership_violation: return "MEMBERSHIP_VIOLATION";
      case ErrorCode::not_normal: return "NOT_NORMAL";
      case ErrorCode::step_cap_exceeded: return "STEP_CAP_EXCEEDED";
      case ErrorCode::selection_failed: return "SELECTION_FAILED";
      case ErrorCode::decomposition_failed: return "DECOMPOSITION_FAILED";
      case ErrorCode::cap_exceeded: return "CAP_EXCEEDED";
      case ErrorCode::not_realizable: return "NOT_REALIZABLE";
      case ErrorCode::malformed_input: return "MALFORMED_INPUT";
    }
    return "UNKNOWN";
  }

  //! Exception carrying a machine-readable code; every failure in the library
  //! is reported through this type.
  class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, std::string const& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what),
          _code(code) {}

    [[nodiscard]] ErrorCode code() const noexcept {
      return _code;
    }

   private:
    ErrorCode _code;
  };

  [[noreturn]] inline void fail(ErrorCode code, std::string const& what) {
    throw Error(code, what);
  }

  inline void require(bool condition, ErrorCode code, std::string const& what) {
    if (!condition) {
      throw Error(code, what);
    }
  }

}  // namespace collapselab

#endif  // COLLAPSELAB_ERROR_HPP_
