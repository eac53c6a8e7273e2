#pragma once

#include <stdexcept>
#include <string>

namespace glass {

// Base class for all library errors. Subclasses map to distinct CLI exit
// codes, so throw the most specific one that applies.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input bytes: bad tensor header, bad CSV, bad JSON.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Structurally valid inputs whose dimensions do not line up.
class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Degenerate GPS configurations (coincident fixes, zero-length vectors).
class GeometryError : public Error {
public:
    explicit GeometryError(const std::string& msg) : Error(msg) {}
};

// Well-formed but unusable values: non-finite numbers, out-of-range
// coordinates, invalid generator parameters.
class InputError : public Error {
public:
    explicit InputError(const std::string& msg) : Error(msg) {}
};

// A verification run (gradient check, fixture check) that completed but did
// not meet its tolerance.
class VerifyError : public Error {
public:
    explicit VerifyError(const std::string& msg) : Error(msg) {}
};

} // namespace glass
