#pragma once

#include <stdexcept>
#include <string>

namespace ggnlab {

// Error taxonomy: all library errors derive from Error so callers can catch
// one base; the concrete types name the contract that was violated.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A distribution query past the essential supremum of a bounded support.
struct QueryBeyondSupport : Error {
    using Error::Error;
};

// Invalid simulation initial state (negative residuals, count mismatch).
struct InvalidInit : Error {
    using Error::Error;
};

// Load rho >= 1: requested steady-state quantity does not exist.
struct Unstable : Error {
    using Error::Error;
};

// A bound's assumption fails (e.g. infinite mean residual time).
struct AssumptionViolated : Error {
    using Error::Error;
};

// Too few post-warmup batches to form a confidence interval.
struct InsufficientData : Error {
    using Error::Error;
};

// Replayed queue-length trajectory diverges from the recorded one.
struct LogInconsistent : Error {
    using Error::Error;
};

// Experiment config failed to parse or validate; message carries line/field.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace ggnlab
