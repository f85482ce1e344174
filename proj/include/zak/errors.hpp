/// @file errors.hpp
/// @brief Exception types shared by all solver components.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace zak {

/// Input fields have inconsistent lengths.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A scalar argument lies outside its mathematical domain.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An experiment configuration is infeasible or self-contradictory.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A factorization hit a numerically singular pivot.
struct SingularMatrixError : std::runtime_error {
    int pivot_index;
    explicit SingularMatrixError(int index)
        : std::runtime_error("singular pivot at index " + std::to_string(index)),
          pivot_index(index) {}
};

/// The Newton iteration failed to reach the stopping tolerance.
struct NewtonDivergenceError : std::runtime_error {
    std::vector<double> residual_history;
    NewtonDivergenceError(std::string what, std::vector<double> history)
        : std::runtime_error(std::move(what)), residual_history(std::move(history)) {}
};

}  // namespace zak
