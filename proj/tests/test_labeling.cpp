#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "regime/labeling.hpp"
#include "regime/synthgen.hpp"
#include "test_support.hpp"

using namespace regime;

namespace {

LabeledSeries with_truth(LabeledSeries labeled, std::vector<int> truth) {
    labeled.truth = std::move(truth);
    return labeled;
}

LabeledSeries plain_labels(std::vector<int> labels) {
    LabeledSeries out;
    out.votes_for.assign(labels.size(), 1);
    out.votes_total.assign(labels.size(), 1);
    out.labels = std::move(labels);
    return out;
}

}  // namespace

TEST_SUITE_BEGIN("labeling");

TEST_CASE("majority vote with disjoint windows copies window labels") {
    // h1 = h2 = 3: windows [0,3) and [3,6), one vote per point.
    const std::vector<std::size_t> assignments{1, 0};
    const LabeledSeries labeled = majority_vote(assignments, LiftConfig(3, 3), 7);
    CHECK(labeled.labels == std::vector<int>{1, 1, 1, 0, 0, 0, kUnlabeled});
    CHECK(labeled.votes_total == std::vector<int>{1, 1, 1, 1, 1, 1, 0});
    CHECK(labeled.votes_for == std::vector<int>{1, 1, 1, 1, 1, 1, 0});
}

TEST_CASE("majority vote picks the strict majority") {
    // h1 = 3, h2 = 1: point 2 is covered by windows 0, 1, 2.
    const std::vector<std::size_t> assignments{0, 0, 1};
    const LabeledSeries labeled = majority_vote(assignments, LiftConfig(3, 1), 5);
    CHECK(labeled.labels[2] == 0);  // votes (0, 0, 1)
    CHECK(labeled.votes_total[2] == 3);
    CHECK(labeled.votes_for[2] == 2);
}

TEST_CASE("exact ties go to the prevailing label") {
    // h1 = 2, h2 = 1, windows w0={0,1} -> 1 and w1={1,2} -> 0. Point 1 is
    // covered by two windows voting (0, 1) with the previous point labeled 1,
    // so the prevailing regime 1 wins the tie.
    const std::vector<std::size_t> assignments{1, 0};
    const LabeledSeries labeled = majority_vote(assignments, LiftConfig(2, 1), 3);
    CHECK(labeled.labels[0] == 1);
    CHECK(labeled.labels[1] == 1);
    CHECK(labeled.labels[2] == 0);
}

TEST_CASE("the prevailing label stands through any tie") {
    // h1 = 2, h2 = 1, windows w0={0,1} -> 1, w1={1,2} -> 2, w2={2,3} -> 0.
    // Point 2 splits between labels 0 and 2: no majority switched, so the
    // prevailing label 1 stands even though it is not among the leaders. (A
    // tie at the very first labeled point cannot arise from the sliding
    // lift, which covers the first point with exactly one window; the
    // lowest tied cluster id would win there.)
    const std::vector<std::size_t> assignments{1, 2, 0};
    const LabeledSeries labeled = majority_vote(assignments, LiftConfig(2, 1), 4);
    CHECK(labeled.labels[0] == 1);
    CHECK(labeled.labels[1] == 1);  // tie {1, 2}, prevailing 1 holds
    CHECK(labeled.labels[2] == 1);  // tie {0, 2}, prevailing 1 holds
    CHECK(labeled.labels[3] == 0);
    CHECK(labeled.votes_for[2] == 0);  // the held label received no votes here
}

TEST_CASE("uncovered points carry the explicit unlabeled marker") {
    const std::vector<std::size_t> assignments{0};
    const LabeledSeries labeled = majority_vote(assignments, LiftConfig(2, 2, 1), 6);
    CHECK(labeled.labels[0] == kUnlabeled);  // delta skips point 0
    CHECK(labeled.labels[1] == 0);
    CHECK(labeled.labels[2] == 0);
    CHECK(labeled.labels[3] == kUnlabeled);
    CHECK(labeled.votes_total[0] == 0);
}

TEST_CASE("vote relabeling invariance") {
    Rng rng(5);
    std::vector<std::size_t> assignments(40);
    for (auto& a : assignments) {
        a = rng.uniform_index(3);
    }
    const LiftConfig cfg(4, 2);
    const LabeledSeries base = majority_vote(assignments, cfg, 90);

    // Swap labels 0 <-> 2 in the votes; the output must swap identically.
    std::vector<std::size_t> swapped(assignments.size());
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        swapped[i] = assignments[i] == 0 ? 2 : assignments[i] == 2 ? 0 : 1;
    }
    const LabeledSeries relabeled = majority_vote(swapped, cfg, 90);
    for (std::size_t i = 0; i < base.labels.size(); ++i) {
        const int expect = base.labels[i] == kUnlabeled ? kUnlabeled
                           : base.labels[i] == 0        ? 2
                           : base.labels[i] == 2        ? 0
                                                        : 1;
        CHECK(relabeled.labels[i] == expect);
    }
}

TEST_CASE("map_clusters finds identity, swaps, and the exhaustive optimum") {
    SUBCASE("identity-optimal") {
        const LabeledSeries labeled =
            with_truth(plain_labels({0, 0, 1, 1, 0}), {0, 0, 1, 1, 1});
        CHECK(map_clusters(labeled) == std::vector<int>{0, 1});
    }
    SUBCASE("swapped binary labels") {
        const LabeledSeries labeled =
            with_truth(plain_labels({1, 1, 0, 0}), {0, 0, 1, 1});
        CHECK(map_clusters(labeled) == std::vector<int>{1, 0});
    }
    SUBCASE("three clusters match the exhaustive optimum") {
        Rng rng(6);
        std::vector<int> labels(600);
        std::vector<int> truth(600);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            labels[i] = static_cast<int>(rng.uniform_index(3));
            truth[i] = static_cast<int>(rng.uniform_index(3));
        }
        const LabeledSeries labeled = with_truth(plain_labels(labels), truth);
        const std::vector<int> mapping = map_clusters(labeled);

        // Exhaustive check over all 3! permutations.
        std::vector<int> perm{0, 1, 2};
        double best = -1.0;
        do {
            long hits = 0;
            for (std::size_t i = 0; i < labels.size(); ++i) {
                hits += perm[labels[i]] == truth[i] ? 1 : 0;
            }
            best = std::max(best, static_cast<double>(hits));
        } while (std::next_permutation(perm.begin(), perm.end()));
        long mapped_hits = 0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            mapped_hits += mapping[labels[i]] == truth[i] ? 1 : 0;
        }
        CHECK(static_cast<double>(mapped_hits) == best);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(map_clusters(plain_labels({0, 1})), ContractError);
        std::vector<int> labels(10);
        std::vector<int> truth(10);
        for (int i = 0; i < 10; ++i) {
            labels[i] = i % 9;  // 9 distinct ids exceeds the cap
            truth[i] = 0;
        }
        CHECK_THROWS_AS(map_clusters(with_truth(plain_labels(labels), truth)), SizeGuardError);
    }
}

TEST_CASE("total accuracy") {
    SUBCASE("perfect labels give 1.0, flipped labels need the mapping") {
        const std::vector<int> truth{0, 1, 0, 1, 1};
        const LabeledSeries perfect = with_truth(plain_labels({0, 1, 0, 1, 1}), truth);
        CHECK(total_accuracy(perfect) == 1.0);

        const LabeledSeries flipped = with_truth(plain_labels({1, 0, 1, 0, 0}), truth);
        CHECK(total_accuracy(flipped, {0, 1}) == 0.0);  // identity mapping
        CHECK(total_accuracy(flipped) == 1.0);          // optimal mapping
    }
    SUBCASE("unlabeled points are excluded from both sides") {
        LabeledSeries labeled = plain_labels({0, kUnlabeled, 0, 1});
        labeled.votes_total[1] = 0;
        labeled.truth = std::vector<int>{0, 0, 1, 1};
        CHECK(total_accuracy(labeled, {0, 1}) == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("partition restricts the evaluation") {
        const std::vector<int> truth{0, 0, 1, 1};
        const LabeledSeries labeled = with_truth(plain_labels({0, 1, 1, 1}), truth);
        const std::vector<std::size_t> regime0{0, 1};
        const std::vector<std::size_t> regime1{2, 3};
        CHECK(total_accuracy(labeled, {0, 1}, &regime0) == 0.5);
        CHECK(total_accuracy(labeled, {0, 1}, &regime1) == 1.0);
    }
    SUBCASE("accuracy equals the coverage-weighted per-regime combination") {
        Rng rng(7);
        std::vector<int> labels(300);
        std::vector<int> truth(300);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            labels[i] = static_cast<int>(rng.uniform_index(2));
            truth[i] = static_cast<int>(rng.uniform_index(2));
        }
        const LabeledSeries labeled = with_truth(plain_labels(labels), truth);
        const std::vector<int> mapping = map_clusters(labeled);
        const double overall = total_accuracy(labeled, mapping);
        double weighted = 0.0;
        for (int k = 0; k < 2; ++k) {
            std::vector<std::size_t> partition;
            for (std::size_t i = 0; i < truth.size(); ++i) {
                if (truth[i] == k) {
                    partition.push_back(i);
                }
            }
            weighted += static_cast<double>(partition.size()) *
                        total_accuracy(labeled, mapping, &partition);
        }
        weighted /= static_cast<double>(truth.size());
        CHECK(overall == doctest::Approx(weighted).epsilon(1e-12));
    }
    SUBCASE("TA is invariant under cluster permutations once mapped") {
        Rng rng(8);
        std::vector<int> labels(200);
        std::vector<int> truth(200);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            labels[i] = static_cast<int>(rng.uniform_index(3));
            truth[i] = static_cast<int>(rng.uniform_index(3));
        }
        const LabeledSeries base = with_truth(plain_labels(labels), truth);
        const double base_ta = total_accuracy(base);
        std::vector<int> perm{2, 0, 1};
        std::vector<int> permuted(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            permuted[i] = perm[labels[i]];
        }
        const double permuted_ta = total_accuracy(with_truth(plain_labels(permuted), truth));
        CHECK(base_ta == permuted_ta);
    }
    SUBCASE("missing truth is a contract error") {
        CHECK_THROWS_AS(total_accuracy(plain_labels({0, 1}), {0, 1}), ContractError);
    }
}

TEST_CASE("with disjoint windows and perfect clusters errors stay on regime boundaries") {
    // Simulate a perfect clustering: each disjoint window is assigned its own
    // majority regime. Interior points are then always correct and the total
    // error count is bounded by (regime switches) * h1.
    const SyntheticDataset ds = gen_scenario(ScenarioType::k1d, 23);
    const std::vector<int> truth = ds.truth_for_returns();
    const std::size_t h1 = 35;
    const LiftConfig cfg(h1, h1);
    const std::size_t m_count = lift_window_count(truth.size(), cfg);

    std::vector<std::size_t> assignments(m_count);
    for (std::size_t m = 0; m < m_count; ++m) {
        std::size_t bear_votes = 0;
        for (std::size_t i = 0; i < h1; ++i) {
            bear_votes += truth[cfg.h2 * m + i] == 1 ? 1 : 0;
        }
        assignments[m] = bear_votes * 2 > h1 ? 1 : 0;
    }
    LabeledSeries labeled = majority_vote(assignments, cfg, truth.size());
    labeled.truth = truth;

    std::size_t switches = 0;
    for (std::size_t i = 1; i < truth.size(); ++i) {
        switches += truth[i] != truth[i - 1] ? 1 : 0;
    }
    std::size_t errors = 0;
    std::size_t labeled_points = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (labeled.labels[i] == kUnlabeled) {
            continue;
        }
        ++labeled_points;
        errors += labeled.labels[i] != truth[i] ? 1 : 0;
    }
    CHECK(errors <= switches * h1);
    CHECK(total_accuracy(labeled, {0, 1}) ==
          doctest::Approx(1.0 - static_cast<double>(errors) /
                                    static_cast<double>(labeled_points)));
}

TEST_CASE("regime_stats") {
    SUBCASE("single-regime labels reproduce whole-series statistics") {
        Rng rng(9);
        Matrix returns(500, 2);
        for (std::size_t i = 0; i < 500; ++i) {
            returns(i, 0) = rng.normal(0.1, 2.0);
            returns(i, 1) = rng.normal(-0.2, 0.5);
        }
        const LabeledSeries labeled = plain_labels(std::vector<int>(500, 0));
        const RegimeStats stats = regime_stats(returns, labeled);
        REQUIRE(stats.regimes.size() == 1);
        const auto& r = stats.regimes[0];
        CHECK(r.count == 500);
        CHECK(r.stats_valid);
        CHECK(r.mean[0] == doctest::Approx(test::sample_mean(test::column(returns, 0))));
        CHECK(r.stddev[1] ==
              doctest::Approx(test::sample_std(test::column(returns, 1))));
        CHECK(r.correlation(0, 0) == 1.0);
        CHECK(r.correlation(0, 1) ==
              doctest::Approx(test::sample_corr(test::column(returns, 0),
                                                test::column(returns, 1))));
    }
    SUBCASE("type-B style data with perfect labels recovers +-0.5 correlations") {
        const double dt = 1.0 / 1764.0;
        const Matrix pos = gen_2d_gaussian_regime(bull_params(), 0.5, 15000, dt, 31);
        const Matrix neg = gen_2d_gaussian_regime(bull_params(), -0.5, 15000, dt, 32);
        Matrix returns(30000, 2);
        std::vector<int> labels(30000);
        for (std::size_t i = 0; i < 15000; ++i) {
            returns(i, 0) = pos(i, 0);
            returns(i, 1) = pos(i, 1);
            labels[i] = 0;
            returns(15000 + i, 0) = neg(i, 0);
            returns(15000 + i, 1) = neg(i, 1);
            labels[15000 + i] = 1;
        }
        const RegimeStats stats = regime_stats(returns, plain_labels(labels));
        REQUIRE(stats.regimes.size() == 2);
        CHECK(stats.regimes[0].correlation(0, 1) == doctest::Approx(0.5).epsilon(0.1));
        CHECK(std::abs(stats.regimes[0].correlation(0, 1) - 0.5) < 0.05);
        CHECK(std::abs(stats.regimes[1].correlation(0, 1) + 0.5) < 0.05);
    }
    SUBCASE("regimes with fewer than two points are suppressed") {
        Matrix returns(3, 1);
        returns(0, 0) = 1.0;
        returns(1, 0) = 2.0;
        returns(2, 0) = 3.0;
        const RegimeStats stats = regime_stats(returns, plain_labels({0, 0, 1}));
        REQUIRE(stats.regimes.size() == 2);
        CHECK(stats.regimes[0].stats_valid);
        CHECK_FALSE(stats.regimes[1].stats_valid);
    }
    SUBCASE("constant returns have zero stddev and undefined correlation") {
        Matrix returns(4, 2);
        for (std::size_t i = 0; i < 4; ++i) {
            returns(i, 0) = 1.5;             // constant coordinate
            returns(i, 1) = 0.25 * static_cast<double>(i);
        }
        const RegimeStats stats = regime_stats(returns, plain_labels({0, 0, 0, 0}));
        REQUIRE(stats.regimes.size() == 1);
        CHECK(stats.regimes[0].stddev[0] == 0.0);
        CHECK_FALSE(stats.regimes[0].correlation_defined);
    }
}

TEST_SUITE_END();
