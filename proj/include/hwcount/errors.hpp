#pragma once

#include <stdexcept>
#include <string>

namespace hwcount {

// Base for all library errors. `validation()` separates bad input from
// numerical breakdown; the CLI maps the two onto different exit codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual bool validation() const noexcept = 0;
};

#define HWCOUNT_DEFINE_ERROR(Name, IsValidation)                      \
    class Name : public Error {                                       \
    public:                                                           \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
        bool validation() const noexcept override { return IsValidation; } \
    };

HWCOUNT_DEFINE_ERROR(DomainError, true)
HWCOUNT_DEFINE_ERROR(RangeError, true)
HWCOUNT_DEFINE_ERROR(UnsupportedOrder, true)
HWCOUNT_DEFINE_ERROR(InsufficientReplicates, true)
HWCOUNT_DEFINE_ERROR(NoConvergence, false)
HWCOUNT_DEFINE_ERROR(MethodDisagreement, false)
HWCOUNT_DEFINE_ERROR(CrossCheckFailure, false)
HWCOUNT_DEFINE_ERROR(PositivityViolation, false)

#undef HWCOUNT_DEFINE_ERROR

}  // namespace hwcount
