#include "regime/clustering.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <utility>

#include "regime/rng.hpp"

namespace regime {

void ClusterConfig::validate() const {
    if (k < 1) {
        throw ParameterError("ClusterConfig: K must be >= 1");
    }
    if (!(epsilon > 0.0)) {
        throw ParameterError("ClusterConfig: epsilon must be positive");
    }
    if (p != 1 && p != 2) {
        throw ParameterError("ClusterConfig: order p must be 1 or 2");
    }
    if (max_iterations < 1) {
        throw ParameterError("ClusterConfig: max_iterations must be >= 1");
    }
}

std::vector<std::size_t> init_centroid_indices(std::size_t m_count, std::size_t k,
                                               std::uint64_t seed) {
    if (m_count < k) {
        throw InsufficientDataError("init_centroids: " + std::to_string(m_count) +
                                    " measures cannot seed " + std::to_string(k) + " clusters");
    }
    std::vector<std::size_t> indices(m_count);
    std::iota(indices.begin(), indices.end(), 0);
    Rng rng(seed);
    // Partial Fisher-Yates: the first k entries are a uniform sample without
    // replacement, in sampled order.
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.uniform_index(m_count - i);
        std::swap(indices[i], indices[j]);
    }
    indices.resize(k);
    return indices;
}

std::vector<Centroid> init_centroids(const std::vector<ProjectedMeasure>& measures,
                                     const ClusterConfig& cfg) {
    cfg.validate();
    std::vector<Centroid> centroids;
    centroids.reserve(cfg.k);
    for (std::size_t idx : init_centroid_indices(measures.size(), cfg.k, cfg.seed)) {
        centroids.push_back(Centroid{measures[idx].per_direction});
    }
    return centroids;
}

namespace {

double point_centroid_distance(const ProjectedMeasure& m, const Centroid& c, int p) {
    const std::size_t l_count = m.per_direction.size();
    if (l_count != c.per_direction.size()) {
        throw ShapeError("distance: projection counts differ between measure and centroid");
    }
    double sum = 0.0;
    for (std::size_t l = 0; l < l_count; ++l) {
        sum += w1_distance(m.per_direction[l], c.per_direction[l], p);
    }
    return sum / static_cast<double>(l_count);
}

double centroid_centroid_distance(const Centroid& a, const Centroid& b, int p) {
    double sum = 0.0;
    for (std::size_t l = 0; l < a.per_direction.size(); ++l) {
        sum += w1_distance(a.per_direction[l], b.per_direction[l], p);
    }
    return sum / static_cast<double>(a.per_direction.size());
}

// Mean over unordered centroid pairs; 0 when K = 1.
template <typename DistFn>
double mean_pairwise(std::size_t k, DistFn dist) {
    if (k < 2) {
        return 0.0;
    }
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            sum += dist(a, b);
            ++pairs;
        }
    }
    return sum / static_cast<double>(pairs);
}

// Mean over nonempty clusters of the mean squared member-centroid distance.
template <typename DistFn>
double mean_sq_point_centroid(const std::vector<std::size_t>& assignments, std::size_t k,
                              DistFn dist) {
    std::vector<double> sums(k, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        const double d = dist(i, assignments[i]);
        sums[assignments[i]] += d * d;
        ++counts[assignments[i]];
    }
    double total = 0.0;
    std::size_t nonempty = 0;
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] > 0) {
            total += sums[c] / static_cast<double>(counts[c]);
            ++nonempty;
        }
    }
    return nonempty == 0 ? 0.0 : total / static_cast<double>(nonempty);
}

std::size_t count_changed(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::size_t changed = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        changed += a[i] != b[i] ? 1 : 0;
    }
    return changed;
}

}  // namespace

std::vector<std::size_t> assign_step(const std::vector<ProjectedMeasure>& measures,
                                     const std::vector<Centroid>& centroids, int p) {
    if (centroids.empty()) {
        throw ParameterError("assign_step: no centroids");
    }
    std::vector<std::size_t> assignments(measures.size());
    for (std::size_t i = 0; i < measures.size(); ++i) {
        std::size_t best = 0;
        double best_d = point_centroid_distance(measures[i], centroids[0], p);
        for (std::size_t c = 1; c < centroids.size(); ++c) {
            const double d = point_centroid_distance(measures[i], centroids[c], p);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        assignments[i] = best;
    }
    return assignments;
}

std::vector<Centroid> update_step(const std::vector<ProjectedMeasure>& measures,
                                  const std::vector<std::size_t>& assignments,
                                  const std::vector<Centroid>& centroids, int p,
                                  std::vector<std::size_t>* repaired) {
    const std::size_t k = centroids.size();
    if (repaired) {
        repaired->clear();
    }
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        members[assignments[i]].push_back(i);
    }

    std::vector<Centroid> next(k);
    std::vector<bool> reseeded_from(measures.size(), false);
    for (std::size_t c = 0; c < k; ++c) {
        if (members[c].empty()) {
            // Re-seed with the measure farthest from this cluster's current
            // centroid, skipping measures already used for another repair.
            std::size_t far_idx = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < measures.size(); ++i) {
                if (reseeded_from[i]) {
                    continue;
                }
                const double d = point_centroid_distance(measures[i], centroids[c], p);
                if (d > far_d) {
                    far_d = d;
                    far_idx = i;
                }
            }
            reseeded_from[far_idx] = true;
            next[c] = Centroid{measures[far_idx].per_direction};
            if (repaired) {
                repaired->push_back(c);
            }
            continue;
        }
        const std::size_t l_count = measures[members[c][0]].per_direction.size();
        next[c].per_direction.reserve(l_count);
        std::vector<const SortedAtoms*> column(members[c].size());
        for (std::size_t l = 0; l < l_count; ++l) {
            for (std::size_t m = 0; m < members[c].size(); ++m) {
                column[m] = &measures[members[c][m]].per_direction[l];
            }
            next[c].per_direction.push_back(w1_barycentre(column, p));
        }
    }
    return next;
}

ClusteringResult run_clustering(const std::vector<ProjectedMeasure>& measures,
                                const ClusterConfig& cfg) {
    cfg.validate();
    ClusteringResult result;
    result.seed_used = cfg.seed;
    std::vector<Centroid> centroids = init_centroids(measures, cfg);
    std::vector<std::size_t> assignments;

    for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
        std::vector<std::size_t> new_assignments = assign_step(measures, centroids, cfg.p);
        const std::size_t changed =
            assignments.empty() ? measures.size() : count_changed(assignments, new_assignments);
        assignments = std::move(new_assignments);

        std::vector<std::size_t> repaired;
        std::vector<Centroid> next = update_step(measures, assignments, centroids, cfg.p,
                                                 &repaired);

        double shift = 0.0;
        for (std::size_t c = 0; c < centroids.size(); ++c) {
            shift += centroid_centroid_distance(next[c], centroids[c], cfg.p);
        }
        centroids = std::move(next);

        IterationDiagnostics diag;
        diag.iteration = it;
        diag.assignments_changed = changed;
        diag.centroid_shift = shift;
        diag.empty_clusters_repaired = repaired.size();
        diag.mean_sq_point_centroid = mean_sq_point_centroid(
            assignments, cfg.k, [&](std::size_t i, std::size_t c) {
                return point_centroid_distance(measures[i], centroids[c], cfg.p);
            });
        diag.centroid_separation_defined = cfg.k >= 2;
        diag.mean_centroid_centroid = mean_pairwise(cfg.k, [&](std::size_t a, std::size_t b) {
            return centroid_centroid_distance(centroids[a], centroids[b], cfg.p);
        });
        result.diagnostics.push_back(diag);

        if (shift < cfg.epsilon) {
            result.converged = true;
            break;
        }
    }

    result.assignments = std::move(assignments);
    result.centroids = std::move(centroids);
    return result;
}

std::vector<SortedAtoms> sort_lifted_windows(const ReturnSeries& returns, const LiftConfig& cfg) {
    if (returns.dimension() != 1) {
        throw ShapeError("sort_lifted_windows: series must be one-dimensional");
    }
    std::vector<SortedAtoms> windows;
    for (const EmpiricalMeasure& em : lift(returns, cfg)) {
        std::vector<double> vals(em.atoms.data());
        windows.push_back(SortedAtoms::from_unsorted(std::move(vals)));
    }
    return windows;
}

ClusteringResult run_wk_means(const std::vector<SortedAtoms>& windows, const ClusterConfig& cfg) {
    cfg.validate();
    const std::size_t m_count = windows.size();
    ClusteringResult result;
    result.seed_used = cfg.seed;

    std::vector<SortedAtoms> centroids;
    for (std::size_t idx : init_centroid_indices(m_count, cfg.k, cfg.seed)) {
        centroids.push_back(windows[idx]);
    }
    std::vector<std::size_t> assignments;

    for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
        std::vector<std::size_t> new_assignments(m_count);
        for (std::size_t i = 0; i < m_count; ++i) {
            std::size_t best = 0;
            double best_d = w1_distance(windows[i], centroids[0], cfg.p);
            for (std::size_t c = 1; c < centroids.size(); ++c) {
                const double d = w1_distance(windows[i], centroids[c], cfg.p);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            new_assignments[i] = best;
        }
        const std::size_t changed =
            assignments.empty() ? m_count : count_changed(assignments, new_assignments);
        assignments = std::move(new_assignments);

        std::vector<std::vector<std::size_t>> members(cfg.k);
        for (std::size_t i = 0; i < m_count; ++i) {
            members[assignments[i]].push_back(i);
        }
        std::vector<SortedAtoms> next(cfg.k);
        std::vector<bool> reseeded_from(m_count, false);
        std::size_t repaired = 0;
        for (std::size_t c = 0; c < cfg.k; ++c) {
            if (members[c].empty()) {
                std::size_t far_idx = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < m_count; ++i) {
                    if (reseeded_from[i]) {
                        continue;
                    }
                    const double d = w1_distance(windows[i], centroids[c], cfg.p);
                    if (d > far_d) {
                        far_d = d;
                        far_idx = i;
                    }
                }
                reseeded_from[far_idx] = true;
                next[c] = windows[far_idx];
                ++repaired;
                continue;
            }
            std::vector<const SortedAtoms*> column;
            column.reserve(members[c].size());
            for (std::size_t i : members[c]) {
                column.push_back(&windows[i]);
            }
            next[c] = w1_barycentre(column, cfg.p);
        }

        double shift = 0.0;
        for (std::size_t c = 0; c < cfg.k; ++c) {
            shift += w1_distance(next[c], centroids[c], cfg.p);
        }
        centroids = std::move(next);

        IterationDiagnostics diag;
        diag.iteration = it;
        diag.assignments_changed = changed;
        diag.centroid_shift = shift;
        diag.empty_clusters_repaired = repaired;
        diag.mean_sq_point_centroid = mean_sq_point_centroid(
            assignments, cfg.k, [&](std::size_t i, std::size_t c) {
                return w1_distance(windows[i], centroids[c], cfg.p);
            });
        diag.centroid_separation_defined = cfg.k >= 2;
        diag.mean_centroid_centroid = mean_pairwise(cfg.k, [&](std::size_t a, std::size_t b) {
            return w1_distance(centroids[a], centroids[b], cfg.p);
        });
        result.diagnostics.push_back(diag);

        if (shift < cfg.epsilon) {
            result.converged = true;
            break;
        }
    }

    result.assignments = std::move(assignments);
    result.centroids.reserve(centroids.size());
    for (SortedAtoms& c : centroids) {
        result.centroids.push_back(Centroid{{std::move(c)}});
    }
    return result;
}

std::pair<std::uint64_t, std::size_t> run_seed_delta(std::uint64_t master_seed, std::size_t index,
                                                     std::size_t h2) {
    const std::uint64_t seed = splitmix64_at(master_seed, 2 * index + 1);
    Rng delta_rng(splitmix64_at(master_seed, 2 * index + 2));
    const std::size_t delta = static_cast<std::size_t>(delta_rng.uniform_index(h2));
    return {seed, delta};
}

std::size_t resolve_workers(std::size_t requested) {
    if (requested > 0) {
        return requested;
    }
    if (const char* env = std::getenv("REGIME_SWK_WORKERS")) {
        const unsigned long v = std::strtoul(env, nullptr, 10);
        if (v > 0) {
            return static_cast<std::size_t>(v);
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

MultiRunResult multi_run(const Stream& stream, const LiftConfig& base, const ClusterConfig& cfg,
                         const ProjectionSet& ps, std::size_t n_runs,
                         const MultiRunOptions& opts) {
    cfg.validate();
    if (n_runs < 1) {
        throw ParameterError("multi_run: n_runs must be >= 1");
    }
    if (ps.dimension() != stream.dimension()) {
        throw ShapeError("multi_run: projection dimension does not match stream dimension");
    }
    const ReturnSeries returns = log_returns(stream);
    if (opts.truth && opts.truth->size() != returns.length()) {
        throw ShapeError("multi_run: truth length " + std::to_string(opts.truth->size()) +
                         " does not match return count " + std::to_string(returns.length()));
    }

    MultiRunResult out;
    out.runs.resize(n_runs);

    // Runs sharing a lifting offset share one projected family.
    std::map<std::size_t, std::vector<std::size_t>> by_delta;
    std::vector<std::uint64_t> run_seeds(n_runs);
    for (std::size_t i = 0; i < n_runs; ++i) {
        const auto [seed, delta] = run_seed_delta(cfg.seed, i, base.h2);
        run_seeds[i] = seed;
        by_delta[delta].push_back(i);
    }

    const std::size_t workers = resolve_workers(opts.workers);

    for (const auto& [delta, run_indices] : by_delta) {
        const LiftConfig lift_cfg(base.h1, base.h2, delta);
        const std::vector<ProjectedMeasure> projected =
            project_family(lift(returns, lift_cfg), ps);

        auto execute = [&](std::size_t run_idx) {
            ClusterConfig run_cfg = cfg;
            run_cfg.seed = run_seeds[run_idx];
            RunOutcome outcome;
            outcome.clustering = run_clustering(projected, run_cfg);
            outcome.clustering.delta_used = delta;
            outcome.labels =
                majority_vote(outcome.clustering.assignments, lift_cfg, returns.length());
            if (opts.truth) {
                outcome.labels.truth = *opts.truth;
                outcome.accuracy = total_accuracy(outcome.labels);
            } else {
                outcome.accuracy = std::numeric_limits<double>::quiet_NaN();
            }
            out.runs[run_idx] = std::move(outcome);
        };

        if (workers <= 1 || run_indices.size() <= 1) {
            for (std::size_t run_idx : run_indices) {
                execute(run_idx);
            }
        } else {
            std::atomic<std::size_t> cursor{0};
            std::exception_ptr first_error;
            std::mutex error_mutex;
            auto worker = [&]() {
                for (;;) {
                    const std::size_t pos = cursor.fetch_add(1);
                    if (pos >= run_indices.size()) {
                        return;
                    }
                    try {
                        execute(run_indices[pos]);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error) {
                            first_error = std::current_exception();
                        }
                    }
                }
            };
            std::vector<std::thread> pool;
            const std::size_t n_threads = std::min(workers, run_indices.size());
            pool.reserve(n_threads);
            for (std::size_t t = 0; t < n_threads; ++t) {
                pool.emplace_back(worker);
            }
            for (std::thread& t : pool) {
                t.join();
            }
            if (first_error) {
                std::rethrow_exception(first_error);
            }
        }
    }

    out.selected = 0;
    for (std::size_t i = 1; i < n_runs; ++i) {
        if (out.runs[i].clustering.final_mean_centroid_centroid() >
            out.runs[out.selected].clustering.final_mean_centroid_centroid()) {
            out.selected = i;
        }
    }
    return out;
}

}  // namespace regime
