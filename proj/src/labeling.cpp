#include "regime/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace regime {

LabeledSeries majority_vote(const std::vector<std::size_t>& assignments, const LiftConfig& cfg,
                            std::size_t series_length) {
    std::size_t k = 0;
    for (std::size_t a : assignments) {
        k = std::max(k, a + 1);
    }
    std::vector<int> counts(series_length * std::max<std::size_t>(k, 1), 0);
    std::vector<int> total(series_length, 0);

    for (std::size_t m = 0; m < assignments.size(); ++m) {
        const std::size_t start = cfg.delta + cfg.h2 * m;
        const std::size_t end = std::min(series_length, start + cfg.h1);
        for (std::size_t i = start; i < end; ++i) {
            ++counts[i * k + assignments[m]];
            ++total[i];
        }
    }

    LabeledSeries out;
    out.labels.assign(series_length, kUnlabeled);
    out.votes_for.assign(series_length, 0);
    out.votes_total = std::move(total);

    int prev = kUnlabeled;
    for (std::size_t i = 0; i < series_length; ++i) {
        if (out.votes_total[i] == 0) {
            continue;
        }
        int best = 0;
        std::size_t tied = 1;
        for (std::size_t c = 1; c < k; ++c) {
            if (counts[i * k + c] > counts[i * k + best]) {
                best = static_cast<int>(c);
                tied = 1;
            } else if (counts[i * k + c] == counts[i * k + best]) {
                ++tied;
            }
        }
        // No unique plurality: the regime switches only when a majority of
        // the votes switches, so the prevailing label stands. Without a
        // previously labeled point the lowest tied cluster id wins (best
        // already holds it).
        if (tied > 1 && prev != kUnlabeled) {
            best = prev;
        }
        out.labels[i] = best;
        out.votes_for[i] = counts[i * k + best];
        prev = best;
    }
    return out;
}

namespace {

// Confusion counts over labeled points: counts[cluster][regime].
std::vector<std::vector<long>> confusion(const LabeledSeries& labeled, std::size_t k,
                                         std::size_t r) {
    std::vector<std::vector<long>> counts(k, std::vector<long>(r, 0));
    const std::vector<int>& truth = *labeled.truth;
    for (std::size_t i = 0; i < labeled.labels.size(); ++i) {
        if (labeled.labels[i] == kUnlabeled) {
            continue;
        }
        ++counts[labeled.labels[i]][truth[i]];
    }
    return counts;
}

}  // namespace

std::vector<int> map_clusters(const LabeledSeries& labeled) {
    if (!labeled.truth) {
        throw ContractError("map_clusters: ground truth not present");
    }
    if (labeled.truth->size() != labeled.labels.size()) {
        throw ShapeError("map_clusters: truth length does not match labels");
    }
    int max_cluster = -1;
    int max_regime = -1;
    for (std::size_t i = 0; i < labeled.labels.size(); ++i) {
        max_cluster = std::max(max_cluster, labeled.labels[i]);
        max_regime = std::max(max_regime, (*labeled.truth)[i]);
    }
    const std::size_t k = static_cast<std::size_t>(max_cluster + 1);
    const std::size_t r = static_cast<std::size_t>(max_regime + 1);
    if (k > 8 || r > 8) {
        throw SizeGuardError("map_clusters: exhaustive search capped at 8 ids, got " +
                             std::to_string(k) + " clusters / " + std::to_string(r) + " regimes");
    }

    const auto counts = confusion(labeled, k, r);

    // Enumerate injective assignments by permuting the larger id set; ids
    // beyond the real regime count act as "unmatched".
    const std::size_t n = std::max(k, r);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best_perm = perm;
    long best_score = -1;
    do {
        long score = 0;
        for (std::size_t c = 0; c < k; ++c) {
            if (perm[c] < static_cast<int>(r)) {
                score += counts[c][perm[c]];
            }
        }
        if (score > best_score) {
            best_score = score;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::vector<int> mapping(k);
    for (std::size_t c = 0; c < k; ++c) {
        mapping[c] = best_perm[c] < static_cast<int>(r) ? best_perm[c] : -1;
    }
    return mapping;
}

double total_accuracy(const LabeledSeries& labeled, const std::vector<int>& mapping,
                      const std::vector<std::size_t>* partition) {
    if (!labeled.truth) {
        throw ContractError("total_accuracy: ground truth not present");
    }
    const std::vector<int>& truth = *labeled.truth;
    if (truth.size() != labeled.labels.size()) {
        throw ShapeError("total_accuracy: truth length does not match labels");
    }
    long hit = 0;
    long seen = 0;
    auto tally = [&](std::size_t i) {
        const int label = labeled.labels[i];
        if (label == kUnlabeled) {
            return;
        }
        ++seen;
        const int mapped = label < static_cast<int>(mapping.size()) ? mapping[label] : -1;
        if (mapped == truth[i]) {
            ++hit;
        }
    };
    if (partition) {
        for (std::size_t i : *partition) {
            tally(i);
        }
    } else {
        for (std::size_t i = 0; i < labeled.labels.size(); ++i) {
            tally(i);
        }
    }
    if (seen == 0) {
        return 0.0;
    }
    return static_cast<double>(hit) / static_cast<double>(seen);
}

double total_accuracy(const LabeledSeries& labeled) {
    return total_accuracy(labeled, map_clusters(labeled));
}

RegimeStats regime_stats(const Matrix& raw_returns, const LabeledSeries& labeled) {
    if (raw_returns.rows() != labeled.labels.size()) {
        throw ShapeError("regime_stats: return count does not match label count");
    }
    const std::size_t d = raw_returns.cols();
    int max_label = -1;
    for (int l : labeled.labels) {
        max_label = std::max(max_label, l);
    }

    RegimeStats out;
    for (int regime = 0; regime <= max_label; ++regime) {
        RegimeStats::PerRegime pr;
        pr.regime = regime;
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labeled.labels.size(); ++i) {
            if (labeled.labels[i] == regime) {
                members.push_back(i);
            }
        }
        pr.count = members.size();
        if (pr.count < 2) {
            out.regimes.push_back(std::move(pr));
            continue;
        }
        pr.stats_valid = true;
        const double n = static_cast<double>(pr.count);
        pr.mean.assign(d, 0.0);
        for (std::size_t i : members) {
            for (std::size_t j = 0; j < d; ++j) {
                pr.mean[j] += raw_returns(i, j);
            }
        }
        for (double& v : pr.mean) {
            v /= n;
        }
        Matrix cov(d, d, 0.0);
        for (std::size_t i : members) {
            for (std::size_t a = 0; a < d; ++a) {
                const double da = raw_returns(i, a) - pr.mean[a];
                for (std::size_t b = a; b < d; ++b) {
                    cov(a, b) += da * (raw_returns(i, b) - pr.mean[b]);
                }
            }
        }
        pr.stddev.assign(d, 0.0);
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = a; b < d; ++b) {
                cov(a, b) /= n;
                cov(b, a) = cov(a, b);
            }
            pr.stddev[a] = std::sqrt(cov(a, a));
        }
        pr.correlation = Matrix(d, d, std::numeric_limits<double>::quiet_NaN());
        pr.correlation_defined = true;
        for (std::size_t a = 0; a < d; ++a) {
            if (pr.stddev[a] == 0.0) {
                pr.correlation_defined = false;
            }
        }
        if (pr.correlation_defined) {
            for (std::size_t a = 0; a < d; ++a) {
                pr.correlation(a, a) = 1.0;
                for (std::size_t b = a + 1; b < d; ++b) {
                    const double rho = cov(a, b) / (pr.stddev[a] * pr.stddev[b]);
                    pr.correlation(a, b) = rho;
                    pr.correlation(b, a) = rho;
                }
            }
        }
        out.regimes.push_back(std::move(pr));
    }
    return out;
}

}  // namespace regime
