#pragma once

#include <stdexcept>
#include <string>

namespace finsent {

// Bad user input: malformed files, out-of-range values, broken configs.
// The CLI maps these to exit code 2.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Input that failed to parse at all (JSON syntax, unknown keys, bad line format).
struct ParseError : ValidationError {
  explicit ParseError(const std::string& what) : ValidationError(what) {}
};

// R^2 is undefined when the gold vector is constant (zero variance denominator).
struct DegenerateGoldError : ValidationError {
  explicit DegenerateGoldError(const std::string& what) : ValidationError(what) {}
};

// cosine(G, P) is undefined when either vector has zero norm.
struct ZeroVectorError : ValidationError {
  explicit ZeroVectorError(const std::string& what) : ValidationError(what) {}
};

// Normal equations without ridge on a rank-deficient system.
struct SingularSystemError : ValidationError {
  explicit SingularSystemError(const std::string& what) : ValidationError(what) {}
};

struct DimensionMismatchError : ValidationError {
  explicit DimensionMismatchError(const std::string& what) : ValidationError(what) {}
};

}  // namespace finsent
