#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "regime/clustering.hpp"
#include "regime/measures.hpp"

namespace regime {

/// Lifting offset given either as an absolute count ("7") or as a percentage
/// of h1 ("20%"), resolved as max(1, round-half-up(pct * h1)).
struct H2Rule {
    double value = 1.0;
    bool percent = false;

    static H2Rule absolute(std::size_t h2) { return {static_cast<double>(h2), false}; }
    static H2Rule percentage(double pct) { return {pct, true}; }
    static H2Rule parse(const std::string& text);

    std::size_t resolve(std::size_t h1) const;
    std::string str() const;
};

struct CellSpec {
    std::size_t h1 = 35;
    H2Rule h2 = H2Rule::percentage(20.0);
    std::size_t L = 9;
    std::size_t K = 2;
    int p = 1;
    std::size_t n_runs = 100;
    std::uint64_t seed = 0;
};

/// Accuracy summary of one (h1, h2, L) sweep cell.
struct CellResult {
    std::size_t h1 = 0;
    std::size_t h2 = 0;  // resolved
    std::size_t L = 0;
    std::size_t K = 0;
    std::size_t n_runs = 0;
    bool failed = false;
    std::string error;
    double ta_median = 0.0;
    double ta_max = 0.0;
    double ta_selected = 0.0;  // TA of the run with the largest final mcc
    std::size_t selected_run = 0;
    std::vector<double> run_ta;   // per-run total accuracy
    std::vector<double> run_mcc;  // per-run final mean centroid-centroid distance
};

struct SweepReport {
    std::vector<CellResult> cells;
};

/// Full output of one cell: the summary plus every run's result.
struct CellOutcome {
    CellResult summary;
    MultiRunResult runs;
    LiftConfig lift_base;
};

/// Runs n_runs clusterings for one parameter cell. `truth_points` (optional)
/// is the ground truth per price point; accuracies are NaN without it.
CellOutcome run_cell_full(const Stream& stream, const std::vector<int>* truth_points,
                          const CellSpec& spec, std::size_t workers = 0);

CellResult run_cell(const Stream& stream, const std::vector<int>* truth_points,
                    const CellSpec& spec, std::size_t workers = 0);

/// Sweep CSV: header `h1,h2,L,K,n_runs,ta_median,ta_max,ta_metric_selected`.
std::string sweep_to_csv(const SweepReport& report);
void write_sweep_csv(const std::filesystem::path& path, const SweepReport& report);

/// Median with the midpoint convention for even counts; NaN for empty input.
double median(std::vector<double> values);

/// Pearson correlation of two equal-length samples.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace regime
