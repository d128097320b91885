#pragma once

#include <stdexcept>
#include <string>

namespace mchain {

struct SingularSystem : std::runtime_error {
    explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

struct LengthMismatch : std::runtime_error {
    explicit LengthMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct CapExceeded : std::runtime_error {
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct MonotonicityViolation : std::runtime_error {
    explicit MonotonicityViolation(const std::string& what) : std::runtime_error(what) {}
};

struct StateLimitExceeded : std::runtime_error {
    explicit StateLimitExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct SearchSpaceExceeded : std::runtime_error {
    explicit SearchSpaceExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// A certificate inequality failed.  This cannot happen for a correct
// implementation, so it always indicates a bug rather than bad input.
struct GadgetFalsified : std::logic_error {
    explicit GadgetFalsified(const std::string& what) : std::logic_error(what) {}
};

// An evaluated sequence exceeded the proven upper bound on moving-target
// hitting times.  Same severity as GadgetFalsified.
struct TripwireViolation : std::logic_error {
    explicit TripwireViolation(const std::string& what) : std::logic_error(what) {}
};

struct NotLumpable : std::runtime_error {
    explicit NotLumpable(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidParams : std::runtime_error {
    explicit InvalidParams(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidCase : std::runtime_error {
    explicit InvalidCase(const std::string& what) : std::runtime_error(what) {}
};

struct SymmetryViolation : std::runtime_error {
    explicit SymmetryViolation(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mchain
