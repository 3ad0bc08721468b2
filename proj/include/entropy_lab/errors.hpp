#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace entropy_lab {

// Input violates a precondition (wrong space, dimension mismatch, singular
// matrix, parameter out of range).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// An orbit left the representable range. Carries the first bad iterate.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, std::size_t first_bad_index)
        : std::runtime_error(what), first_bad_index(first_bad_index) {}
    std::size_t first_bad_index;
};

// A map/partition or map/covering combination the library cannot refine.
class CapabilityError : public std::runtime_error {
public:
    explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical bookkeeping failed a consistency check (e.g. cell masses do not
// sum to one).
class ConsistencyError : public std::runtime_error {
public:
    explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

// A witness point of the universe fell outside every element of a covering
// (or of its refinement). Carries the offending point index.
class CoverageViolation : public std::runtime_error {
public:
    CoverageViolation(const std::string& what, std::size_t point_index)
        : std::runtime_error(what), point_index(point_index) {}
    std::size_t point_index;
};

// Config document failed schema validation. Carries the JSON field path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field_path, const std::string& message)
        : std::runtime_error(field_path + ": " + message), field_path(field_path) {}
    std::string field_path;
};

}  // namespace entropy_lab
