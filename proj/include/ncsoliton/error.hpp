#pragma once

#include <stdexcept>
#include <string>

namespace ncsoliton {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define NCSOLITON_DEFINE_ERROR(Name)          \
    class Name : public Error {               \
    public:                                   \
        using Error::Error;                   \
    }

NCSOLITON_DEFINE_ERROR(DomainError);
NCSOLITON_DEFINE_ERROR(OverflowError);
NCSOLITON_DEFINE_ERROR(NoTwoRoots);
NCSOLITON_DEFINE_ERROR(NonConvergence);
NCSOLITON_DEFINE_ERROR(RegimeViolation);
NCSOLITON_DEFINE_ERROR(BracketFailure);
NCSOLITON_DEFINE_ERROR(FitWindowTooSmall);
NCSOLITON_DEFINE_ERROR(UnsupportedP);
NCSOLITON_DEFINE_ERROR(TailLeak);
NCSOLITON_DEFINE_ERROR(PhaseUnwrapFailure);
NCSOLITON_DEFINE_ERROR(UsageError);

#undef NCSOLITON_DEFINE_ERROR

}  // namespace ncsoliton
