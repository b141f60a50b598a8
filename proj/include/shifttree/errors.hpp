#pragma once

#include <stdexcept>
#include <string>

namespace shifttree {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structural problems with a tree description (circuits, disconnection,
// missing parents, leaves).
struct InvalidTree : Error {
    using Error::Error;
};

struct UnknownVertex : Error {
    using Error::Error;
};

struct UnknownBuiltin : Error {
    using Error::Error;
};

struct InvalidParam : Error {
    using Error::Error;
};

// Raised while reading a spec file (malformed JSON, schema violations).
struct SpecParseError : Error {
    using Error::Error;
};

// The shift has column norms reaching zero (or a non-positive weight),
// so the Cauchy dual and the analytic model are unavailable.
struct NotLeftInvertible : Error {
    using Error::Error;
};

struct OutsideDisc : Error {
    using Error::Error;
};

struct OutsideDelta : Error {
    using Error::Error;
};

struct OnEssentialSpectrum : Error {
    using Error::Error;
};

struct NoGeneralizedRoot : Error {
    using Error::Error;
};

struct NotFredholm : Error {
    using Error::Error;
};

}  // namespace shifttree
