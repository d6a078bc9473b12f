#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "regime/matrix.hpp"
#include "regime/measures.hpp"

namespace regime {

/// Marker for time points not covered by any window.
inline constexpr int kUnlabeled = -1;

/// Per-time-point regime labels obtained from window-level cluster
/// assignments by majority voting.
struct LabeledSeries {
    std::vector<int> labels;       // cluster id per return point, kUnlabeled if uncovered
    std::vector<int> votes_for;    // votes received by the winning label
    std::vector<int> votes_total;  // windows covering the point
    std::optional<std::vector<int>> truth;  // ground-truth regime ids, same length

    std::size_t length() const { return labels.size(); }
};

/// Descriptive statistics of the (raw) returns within each emitted regime.
struct RegimeStats {
    struct PerRegime {
        int regime = 0;
        std::size_t count = 0;                // points carrying this label
        bool stats_valid = false;             // false when count < 2
        std::vector<double> mean;             // length d
        std::vector<double> stddev;           // length d, population convention
        Matrix correlation;                   // d x d; entries NaN where undefined
        bool correlation_defined = false;     // false if any variance is zero
    };
    std::vector<PerRegime> regimes;
};

/// Majority vote over the windows covering each return point. Exact ties go
/// to the prevailing label (the label of the latest previously labeled point)
/// when it is among the tied leaders; otherwise, and for a tie at the first
/// labeled point, the lowest tied cluster id wins.
LabeledSeries majority_vote(const std::vector<std::size_t>& assignments, const LiftConfig& cfg,
                            std::size_t series_length);

/// Cluster id -> regime id mapping maximizing total accuracy, by exhaustive
/// search over permutations/injections. Requires truth; both id ranges <= 8.
/// Entries for clusters left unmatched (when there are more clusters than
/// regimes) are -1.
std::vector<int> map_clusters(const LabeledSeries& labeled);

/// Fraction of labeled points (optionally restricted to `partition`, a set of
/// return indices) whose mapped label equals the truth. Unlabeled points are
/// excluded from numerator and denominator.
double total_accuracy(const LabeledSeries& labeled, const std::vector<int>& mapping,
                      const std::vector<std::size_t>* partition = nullptr);

/// Convenience: optimal-mapping accuracy (map_clusters + total_accuracy).
double total_accuracy(const LabeledSeries& labeled);

/// Per-regime mean/stddev/correlation of raw returns (n x d), grouped by the
/// voted labels. Regimes with fewer than 2 points are flagged, not reported.
RegimeStats regime_stats(const Matrix& raw_returns, const LabeledSeries& labeled);

}  // namespace regime
