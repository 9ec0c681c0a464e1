#pragma once

#include <stdexcept>
#include <string>

namespace qdchain {

/// Base class for all qdchain errors. `code()` is a stable machine-readable
/// identifier; the CLI uses it when rendering JSON error reports.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define QDCHAIN_DEFINE_ERROR(Name)                                 \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

QDCHAIN_DEFINE_ERROR(NonPositiveB);
QDCHAIN_DEFINE_ERROR(ZeroA);
QDCHAIN_DEFINE_ERROR(LengthMismatch);
QDCHAIN_DEFINE_ERROR(WindowMismatch);
QDCHAIN_DEFINE_ERROR(ShiftTooLarge);
QDCHAIN_DEFINE_ERROR(PoleError);
QDCHAIN_DEFINE_ERROR(PoleProximity);
QDCHAIN_DEFINE_ERROR(NegativeCoefficient);
QDCHAIN_DEFINE_ERROR(NotSquareSummable);
QDCHAIN_DEFINE_ERROR(WindowTooSmall);
QDCHAIN_DEFINE_ERROR(NotConverged);
QDCHAIN_DEFINE_ERROR(SingularJacobian);
QDCHAIN_DEFINE_ERROR(SingularAtZero);
QDCHAIN_DEFINE_ERROR(SchemaError);
QDCHAIN_DEFINE_ERROR(ValueError);

#undef QDCHAIN_DEFINE_ERROR

}  // namespace qdchain
