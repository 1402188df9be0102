// Error types shared by all modules.
#pragma once

#include <stdexcept>
#include <string>

namespace rdsym {

// Caller broke a documented precondition.
struct ContractViolation : std::invalid_argument {
    explicit ContractViolation(const std::string& what) : std::invalid_argument(what) {}
};

// The requested construction or run does not fit inside the truncated domain.
struct DomainTooSmall : std::runtime_error {
    explicit DomainTooSmall(const std::string& what) : std::runtime_error(what) {}
};

// A point lies outside [-L, L]^2.
struct OutOfDomain : std::runtime_error {
    explicit OutOfDomain(const std::string& what) : std::runtime_error(what) {}
};

// Time stepping produced a non-finite value.
struct NumericalBlowup : std::runtime_error {
    explicit NumericalBlowup(const std::string& what) : std::runtime_error(what) {}
};

// A level-set measurement was asked of an empty (or interior-empty) mask.
struct EmptyLevelSet : std::runtime_error {
    explicit EmptyLevelSet(const std::string& what) : std::runtime_error(what) {}
};

} // namespace rdsym
