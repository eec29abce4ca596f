#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace foldbs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Thrown when inputs violate a documented precondition (bad parameters,
/// grid mismatches, malformed configuration).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a fixed-point solver fails to reach its tolerance.
struct NonConvergenceError : std::runtime_error {
    double residual;
    NonConvergenceError(const std::string& what, double res)
        : std::runtime_error(what + " (final residual " + std::to_string(res) + ")"),
          residual(res) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

}  // namespace foldbs
