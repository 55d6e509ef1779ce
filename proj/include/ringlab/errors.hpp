#pragma once

#include <stdexcept>
#include <string>

namespace ringlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct SingularMatrix : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    NoConvergence(const std::string& msg, std::size_t deflated)
        : Error(msg), deflated_count(deflated) {}
    std::size_t deflated_count;  // eigenvalues isolated before giving up
};

struct RingProximity : Error {
    using Error::Error;
};

struct RegionViolation : Error {
    using Error::Error;
};

struct NegativePowersWithZeroInnerRadius : Error {
    using Error::Error;
};

struct NormalizationError : Error {
    using Error::Error;
};

struct GramSingular : Error {
    using Error::Error;
};

struct ComplexityBudgetExceeded : Error {
    using Error::Error;
};

struct InsufficientTrials : Error {
    using Error::Error;
};

struct MissingOutlier : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace ringlab
