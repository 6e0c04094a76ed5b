#pragma once

#include <stdexcept>
#include <string>

namespace ca2d {

// Base class for everything this library throws, so callers can catch
// one type at the boundary and map it to a diagnostic + exit code.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operand shapes disagree (matrix products, image comparisons, ...).
struct DimensionMismatch : Error { using Error::Error; };

// A square matrix was required.
struct NotSquare : Error { using Error::Error; };

// Inversion was requested for a matrix of deficient rank.
struct SingularMatrix : Error { using Error::Error; };

// A rule number or neighborhood bit outside the valid range.
struct InvalidRule : Error { using Error::Error; };

// Malformed file content (image headers, key files, ...).
struct FormatError : Error { using Error::Error; };

// The operating system refused a read or write.
struct IoError : Error { using Error::Error; };

// Image dimensions incompatible with a key or an operation.
struct GeometryError : Error { using Error::Error; };

// A key file that parses but describes an unusable key.
struct KeyError : Error { using Error::Error; };

// The image cannot host the requested number of random walks.
struct ImageTooSmall : Error { using Error::Error; };

// A statistic is undefined for the observed sample (e.g. one-symbol runs).
struct DegenerateSample : Error { using Error::Error; };

} // namespace ca2d
