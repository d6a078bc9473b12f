#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "regime/labeling.hpp"
#include "regime/measures.hpp"
#include "regime/wasserstein.hpp"

namespace regime {

struct ClusterConfig {
    std::size_t k = 2;
    int p = 1;
    double epsilon = 1e-6;
    std::size_t max_iterations = 300;
    std::uint64_t seed = 0;

    void validate() const;
};

/// A cluster representative, defined only by its sorted projections; never
/// materialized in d dimensions.
struct Centroid {
    std::vector<SortedAtoms> per_direction;

    bool operator==(const Centroid& other) const = default;
};

struct IterationDiagnostics {
    std::size_t iteration = 0;              // 1-based
    double mean_sq_point_centroid = 0.0;
    double mean_centroid_centroid = 0.0;    // 0 when undefined (K=1)
    bool centroid_separation_defined = true;
    std::size_t assignments_changed = 0;
    double centroid_shift = 0.0;            // convergence criterion value
    std::size_t empty_clusters_repaired = 0;
};

struct ClusteringResult {
    std::vector<std::size_t> assignments;   // window index -> cluster id in [0, K)
    std::vector<Centroid> centroids;
    std::vector<IterationDiagnostics> diagnostics;
    bool converged = false;
    std::size_t delta_used = 0;
    std::uint64_t seed_used = 0;

    double final_mean_centroid_centroid() const {
        return diagnostics.empty() ? 0.0 : diagnostics.back().mean_centroid_centroid;
    }
};

/// The K distinct window indices (in sampled order) used to initialize
/// centroids for a given seed.
std::vector<std::size_t> init_centroid_indices(std::size_t m_count, std::size_t k,
                                               std::uint64_t seed);

/// Initial centroids: K measures sampled uniformly without replacement.
std::vector<Centroid> init_centroids(const std::vector<ProjectedMeasure>& measures,
                                     const ClusterConfig& cfg);

/// Nearest-centroid assignment under the sliced distance; ties break to the
/// lowest cluster id.
std::vector<std::size_t> assign_step(const std::vector<ProjectedMeasure>& measures,
                                     const std::vector<Centroid>& centroids, int p);

/// Per-direction Wasserstein barycentre of each cluster's members. Empty
/// clusters are re-seeded with the measure farthest from their current
/// centroid; `repaired` (optional) receives the affected cluster ids.
std::vector<Centroid> update_step(const std::vector<ProjectedMeasure>& measures,
                                  const std::vector<std::size_t>& assignments,
                                  const std::vector<Centroid>& centroids, int p,
                                  std::vector<std::size_t>* repaired = nullptr);

/// Full k-means loop on projected measures (the sliced pipeline). Stops when
/// the summed sliced distance between successive centroids drops below
/// cfg.epsilon, or at cfg.max_iterations.
ClusteringResult run_clustering(const std::vector<ProjectedMeasure>& measures,
                                const ClusterConfig& cfg);

/// Windows of a 1-dimensional return series as plain sorted atom lists.
std::vector<SortedAtoms> sort_lifted_windows(const ReturnSeries& returns, const LiftConfig& cfg);

/// The plain one-dimensional pipeline: identical loop driven directly by the
/// 1D Wasserstein distance and barycentre, no projection machinery. With
/// L=1 and direction (+1) the sliced pipeline must match this bit for bit.
ClusteringResult run_wk_means(const std::vector<SortedAtoms>& windows, const ClusterConfig& cfg);

struct RunOutcome {
    ClusteringResult clustering;
    LabeledSeries labels;
    double accuracy = 0.0;   // optimal-mapping TA; NaN when truth is absent
};

struct MultiRunOptions {
    std::size_t workers = 0;                 // 0: REGIME_SWK_WORKERS env or hardware default
    const std::vector<int>* truth = nullptr; // ground truth per return point
};

struct MultiRunResult {
    std::vector<RunOutcome> runs;
    std::size_t selected = 0;  // run maximizing final mean centroid-centroid distance

    const RunOutcome& selected_run() const { return runs[selected]; }
};

/// n_runs independent clusterings of one stream: per run, a fresh seed and a
/// fresh lifting offset delta in [0, h2), both derived from cfg.seed by a
/// counter-based split so any run can be reproduced in isolation.
MultiRunResult multi_run(const Stream& stream, const LiftConfig& base, const ClusterConfig& cfg,
                         const ProjectionSet& ps, std::size_t n_runs,
                         const MultiRunOptions& opts = {});

/// (seed, delta) pair for run `index` under master seed; the split used by
/// multi_run.
std::pair<std::uint64_t, std::size_t> run_seed_delta(std::uint64_t master_seed, std::size_t index,
                                                     std::size_t h2);

/// Worker count multi_run will use for `requested` (0 resolves the
/// REGIME_SWK_WORKERS environment variable, then hardware concurrency).
std::size_t resolve_workers(std::size_t requested);

}  // namespace regime
