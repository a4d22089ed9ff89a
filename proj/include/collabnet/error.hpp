#pragma once

#include <stdexcept>
#include <string>

namespace collabnet {

/// Bad or inconsistent input data (unknown country, malformed file, invalid config).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure failed: non-convergence or a singular design.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what, double residual = 0.0)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

} // namespace collabnet
