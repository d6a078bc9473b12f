#pragma once

#include <stdexcept>
#include <string>

namespace regime {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A value is outside its mathematical domain (e.g. non-positive price).
struct DomainError : Error {
    using Error::Error;
};

// Input is structurally valid but statistically degenerate (e.g. zero variance).
struct DegenerateInputError : Error {
    using Error::Error;
};

// Mismatched shapes: atom counts, dimensions, projection counts.
struct ShapeError : Error {
    using Error::Error;
};

// Not enough data for the requested operation (windows, clusters).
struct InsufficientDataError : Error {
    using Error::Error;
};

// A barycentre was requested over an empty collection.
struct EmptyClusterError : Error {
    using Error::Error;
};

// An exhaustive-search operation was asked to exceed its size cap.
struct SizeGuardError : Error {
    using Error::Error;
};

// A precondition on the call contract was violated (e.g. missing ground truth).
struct ContractError : Error {
    using Error::Error;
};

// Synthetic data generation failed (infeasible packing, singular covariance).
struct GenerationError : Error {
    using Error::Error;
};

// A configuration parameter violates its invariant.
struct ParameterError : Error {
    using Error::Error;
};

// File I/O or parse failure; message carries the path.
struct IoError : Error {
    using Error::Error;
};

}  // namespace regime
