#pragma once

#include <stdexcept>
#include <string>

namespace maxpol {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define MAXPOL_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                     \
    public:                                                         \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

MAXPOL_DEFINE_ERROR(SingularMatrix);
MAXPOL_DEFINE_ERROR(InvalidSpec);
MAXPOL_DEFINE_ERROR(MatrixTooSmall);
MAXPOL_DEFINE_ERROR(InvalidScheme);
MAXPOL_DEFINE_ERROR(DimensionMismatch);
MAXPOL_DEFINE_ERROR(InvalidMode);
MAXPOL_DEFINE_ERROR(ConvergenceFailure);
MAXPOL_DEFINE_ERROR(SchurFailure);
MAXPOL_DEFINE_ERROR(IllPosed);
MAXPOL_DEFINE_ERROR(ZeroReference);
MAXPOL_DEFINE_ERROR(WidthTooLarge);
MAXPOL_DEFINE_ERROR(DegenerateCalibration);
MAXPOL_DEFINE_ERROR(LayoutMismatch);
MAXPOL_DEFINE_ERROR(FormatError);

#undef MAXPOL_DEFINE_ERROR

}  // namespace maxpol
