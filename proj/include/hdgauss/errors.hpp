#pragma once

#include <stdexcept>
#include <string>

namespace hdgauss {

// Input failed a documented precondition (dimension mismatch, bad flag, ...).
struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A matrix was too close to singular for the requested operation.
struct IllConditionedError : std::runtime_error {
    explicit IllConditionedError(const std::string& what) : std::runtime_error(what) {}
};

// Covariance failed the positive semi-definite check.
struct FactorizationError : std::runtime_error {
    explicit FactorizationError(const std::string& what) : std::runtime_error(what) {}
};

// A direction with zero L2(gamma) norm where a positive one is required.
struct DegenerateDirectionError : std::runtime_error {
    explicit DegenerateDirectionError(const std::string& what) : std::runtime_error(what) {}
};

// A caller broke an operation contract (e.g. affine risk on unequal covariances).
struct ContractViolation : std::logic_error {
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// Numerical integration could not reach the requested tolerance.
struct QuadratureError : std::runtime_error {
    explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

// A generator spec admits no vector satisfying all constraints.
struct InfeasibleSpecError : std::runtime_error {
    explicit InfeasibleSpecError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hdgauss
