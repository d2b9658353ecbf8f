#pragma once

#include <stdexcept>
#include <string>

namespace clruin {

// Function argument outside the mathematical domain (e.g. MGF evaluated at or
// beyond its radius of convergence, conditioning on a null event).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Operation requested for a claim-severity family it does not support
// (e.g. a closed-form ruin probability for discrete claims).
struct UnsupportedDistribution : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Volterra marching step too coarse: the per-node linear solve is ill-posed.
struct StepTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested solution domain leaves more integrated-tail mass beyond the
// truncation point than the caller's tolerance permits.
struct TruncationTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bracketed root search found no sign change (no adjustment coefficient).
struct NoRoot : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A certificate search exhausted its budget without meeting its condition.
struct ConditionUnreachable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bound evaluated at a scaling index below its certified threshold.
struct ScalingTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A simulated path hit the per-path claim cap before ruin or survival.
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed CLI flags or configuration file.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace clruin
