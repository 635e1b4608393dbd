#pragma once

#include <stdexcept>
#include <string>

namespace specclass {

// Bad input data: missing/corrupt files, format violations, dimension
// mismatches, invalid configuration. CLI maps this to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: factorization of a non-SPD matrix, eigen solver
// not converging. CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace specclass
