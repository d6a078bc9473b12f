#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "regime/matrix.hpp"

namespace regime {

/// A discretely observed d-dimensional price path. Immutable after
/// construction; the constructor validates all invariants.
class Stream {
public:
    /// values: N x d strictly positive prices, N >= 2.
    /// timestamps: optional, one per row, strictly increasing. Entries that
    /// parse as numbers are compared numerically, otherwise lexicographically
    /// (ISO-8601 strings order correctly either way).
    explicit Stream(Matrix values,
                    std::optional<std::vector<std::string>> timestamps = std::nullopt);

    const Matrix& values() const { return values_; }
    std::size_t n_points() const { return values_.rows(); }
    std::size_t dimension() const { return values_.cols(); }
    const std::optional<std::vector<std::string>>& timestamps() const { return timestamps_; }

private:
    Matrix values_;
    std::optional<std::vector<std::string>> timestamps_;
};

/// Coordinate-wise standardized log returns of a stream, together with the
/// constants used, so the raw returns can be reconstructed exactly.
struct ReturnSeries {
    Matrix values;                  // (N-1) x d, zero mean / unit variance per column
    std::vector<double> mean_used;  // length d
    std::vector<double> std_used;   // length d

    std::size_t length() const { return values.rows(); }
    std::size_t dimension() const { return values.cols(); }

    // values[i][j] * std_used[j] + mean_used[j]
    Matrix unstandardized() const;
};

/// Sliding-window parameters: window size h1, offset h2, start offset delta.
struct LiftConfig {
    std::size_t h1 = 1;
    std::size_t h2 = 1;
    std::size_t delta = 0;

    LiftConfig() = default;
    LiftConfig(std::size_t h1_, std::size_t h2_, std::size_t delta_ = 0);
};

/// One window of the lifted family: h1 consecutive return points.
struct EmpiricalMeasure {
    Matrix atoms;              // h1 x d
    std::size_t window_index;  // 0-based position within the family
    std::size_t start_index;   // index of the first atom in the return series
};

/// Log returns, standardized coordinate-wise to zero mean and unit variance
/// (population convention). Throws DomainError for non-positive prices and
/// DegenerateInputError (naming the coordinate) when a column has zero
/// variance.
ReturnSeries log_returns(const Stream& stream);

/// Sliding-window lift. Window m (0-based) starts at delta + h2*m; only
/// windows that fit entirely inside the series are produced. Throws
/// InsufficientDataError when not even the first window fits.
std::vector<EmpiricalMeasure> lift(const ReturnSeries& returns, const LiftConfig& cfg);

/// Number of windows lift() will produce for a series of this length.
std::size_t lift_window_count(std::size_t series_length, const LiftConfig& cfg);

}  // namespace regime
