#pragma once

#include <stdexcept>
#include <string>

namespace nslab {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input data is malformed (bad JSON, bad rational literal, unknown id, ...).
struct ParseError : Error {
    using Error::Error;
};

// The request is well-formed but mathematically invalid (division by a
// non-unit, mismatched variable lists, non-skew twist datum, ...).
struct DomainError : Error {
    using Error::Error;
};

// A twist datum violates its skew-symmetry requirement.
struct TwistError : Error {
    using Error::Error;
};

// The requested result is not certifiable from the exactness windows of the
// inputs.  Carries a best-effort suggestion for a sufficient input window.
struct WindowError : Error {
    explicit WindowError(const std::string& what, long suggested = 0)
        : Error(what), suggested_window(suggested) {}
    long suggested_window;
};

}  // namespace nslab
