#pragma once
// Error types thrown by the betbounds library. All derive from std::exception
// through the standard <stdexcept> hierarchy so callers can catch coarsely or
// per condition.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace betbounds {

// A value fell outside [0,1] (observations, populations, bets, probabilities).
struct OutOfRangeError : std::invalid_argument {
    OutOfRangeError(std::size_t index, double value)
        : std::invalid_argument("value out of [0,1] at index " + std::to_string(index) +
                                ": " + std::to_string(value)),
          index(index), value(value) {}
    std::size_t index;
    double value;
};

// An operation required a nonempty sample.
struct EmptyError : std::invalid_argument {
    explicit EmptyError(const std::string& what) : std::invalid_argument(what) {}
};

// alpha outside (0,1), sigma outside (0,1/2], cap outside (0,1), bad K, ...
struct BadParamError : std::invalid_argument {
    explicit BadParamError(const std::string& what) : std::invalid_argument(what) {}
};

// An argument left the mathematical domain of an operation (psi_E at 1,
// kl_inf at a degenerate m, sup-log-wealth outside (0,1), ...).
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A NamedDistribution was handed to an operation that cannot accept it,
// e.g. GaussianFamily passed to a [0,1]-bounded sampler.
struct UnsupportedDistributionError : std::invalid_argument {
    explicit UnsupportedDistributionError(const std::string& what)
        : std::invalid_argument(what) {}
};

// Requested more without-replacement draws than the population holds.
struct TooManyError : std::invalid_argument {
    explicit TooManyError(const std::string& what) : std::invalid_argument(what) {}
};

// A horizon-tuned betting strategy was handed to a confidence sequence.
struct HorizonDependentStrategyError : std::invalid_argument {
    explicit HorizonDependentStrategyError(const std::string& what)
        : std::invalid_argument(what) {}
};

// a(n, alpha) has a nonpositive numerator (alpha too large), or a negative
// level was passed to an inverse information projection.
struct NonPositiveLevelError : std::domain_error {
    explicit NonPositiveLevelError(const std::string& what) : std::domain_error(what) {}
};

// Deterministic betting-CI width bound needs sigma > 0.
struct ZeroVarianceError : std::domain_error {
    explicit ZeroVarianceError(const std::string& what) : std::domain_error(what) {}
};

// No replicate reached the requested CS width before the censoring horizon.
struct AllCensoredError : std::runtime_error {
    explicit AllCensoredError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace betbounds
