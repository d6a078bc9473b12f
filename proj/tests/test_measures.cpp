#include <doctest.h>

#include <cmath>
#include <string>

#include "regime/measures.hpp"
#include "regime/synthgen.hpp"
#include "test_support.hpp"

using namespace regime;

namespace {

Stream column_stream(const std::vector<double>& prices) {
    Matrix m(prices.size(), 1);
    for (std::size_t i = 0; i < prices.size(); ++i) {
        m(i, 0) = prices[i];
    }
    return Stream(std::move(m));
}

// Independent enumeration oracle: count the windows [s, s+h1) with
// s = delta + h2*m that fit inside [0, n).
std::size_t count_windows_brute(std::size_t n, std::size_t h1, std::size_t h2,
                                std::size_t delta) {
    std::size_t count = 0;
    for (std::size_t m = 0;; ++m) {
        const std::size_t start = delta + h2 * m;
        if (start + h1 > n) {
            break;
        }
        ++count;
    }
    return count;
}

}  // namespace

TEST_SUITE_BEGIN("measures");

TEST_CASE("stream validation") {
    Matrix ok(3, 1);
    ok(0, 0) = 1.0;
    ok(1, 0) = 2.0;
    ok(2, 0) = 3.0;
    CHECK_NOTHROW(Stream{ok});

    Matrix neg = ok;
    neg(1, 0) = -2.0;
    CHECK_THROWS_AS(Stream{neg}, DomainError);

    Matrix zero = ok;
    zero(2, 0) = 0.0;
    CHECK_THROWS_AS(Stream{zero}, DomainError);

    Matrix one_row(1, 1, 1.0);
    CHECK_THROWS_AS(Stream{one_row}, ParameterError);

    CHECK_NOTHROW(Stream(ok, std::vector<std::string>{"1", "2", "10"}));
    CHECK_THROWS_AS(Stream(ok, std::vector<std::string>{"1", "10", "2"}), ParameterError);
    // ISO-8601 timestamps order lexicographically.
    CHECK_NOTHROW(Stream(ok, std::vector<std::string>{"2020-01-01T00:00:00", "2020-01-01T01:00:00",
                                                      "2020-01-02T00:00:00"}));
    CHECK_THROWS_AS(Stream(ok, std::vector<std::string>{"2020-01-02", "2020-01-01", "2020-01-03"}),
                    ParameterError);
    CHECK_THROWS_AS(Stream(ok, std::vector<std::string>{"1", "2"}), ShapeError);
}

TEST_CASE("log_returns rejects constant return coordinates") {
    const double e = std::exp(1.0);
    CHECK_THROWS_AS(log_returns(column_stream({1.0, e, e * e})), DegenerateInputError);
    try {
        log_returns(column_stream({1.0, e, e * e}));
    } catch (const DegenerateInputError& err) {
        CHECK(std::string(err.what()).find("coordinate 0") != std::string::npos);
    }
}

TEST_CASE("log_returns standardizes a symmetric pair to +-1") {
    // Raw returns (log 2, -log 2); population variance makes these exactly +-1.
    const ReturnSeries rs = log_returns(column_stream({1.0, 2.0, 1.0}));
    REQUIRE(rs.length() == 2);
    CHECK(rs.values(0, 0) == 1.0);
    CHECK(rs.values(1, 0) == -1.0);
    CHECK(rs.mean_used[0] == 0.0);
    CHECK(rs.std_used[0] == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("log_returns standardization on a generated GBM path") {
    // A year-long 1,765-point slice of the canonical dataset.
    const SyntheticDataset ds = test::one_d_prefix(11, 1765);
    REQUIRE(ds.prices.n_points() == 1765);
    const ReturnSeries rs = log_returns(ds.prices);
    CHECK(rs.length() == 1764);
    double mean = 0.0;
    double var = 0.0;
    for (std::size_t i = 0; i < rs.length(); ++i) {
        mean += rs.values(i, 0);
    }
    mean /= static_cast<double>(rs.length());
    for (std::size_t i = 0; i < rs.length(); ++i) {
        var += (rs.values(i, 0) - mean) * (rs.values(i, 0) - mean);
    }
    var /= static_cast<double>(rs.length());
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::abs(var - 1.0) < 1e-9);
}

TEST_CASE("unstandardized returns reconstruct raw log returns") {
    const Stream stream = column_stream({1.0, 1.5, 1.2, 2.0, 1.7});
    const ReturnSeries rs = log_returns(stream);
    const Matrix raw = rs.unstandardized();
    for (std::size_t i = 0; i < raw.rows(); ++i) {
        const double expected = std::log(stream.values()(i + 1, 0)) -
                                std::log(stream.values()(i, 0));
        CHECK(raw(i, 0) == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("lift window layout") {
    Matrix prices(11, 1);
    for (std::size_t i = 0; i < 11; ++i) {
        prices(i, 0) = std::exp(0.01 * static_cast<double>(i * i));  // nonconstant returns
    }
    const ReturnSeries rs = log_returns(Stream(std::move(prices)));
    REQUIRE(rs.length() == 10);

    SUBCASE("overlapping windows, h1=4 h2=2") {
        const auto family = lift(rs, LiftConfig(4, 2));
        REQUIRE(family.size() == 4);
        for (std::size_t m = 0; m < 4; ++m) {
            CHECK(family[m].start_index == 2 * m);
            CHECK(family[m].window_index == m);
            CHECK(family[m].atoms.rows() == 4);
        }
    }
    SUBCASE("disjoint windows, h1=4 h2=4 drop the overrunning tail") {
        const auto family = lift(rs, LiftConfig(4, 4));
        REQUIRE(family.size() == 2);
        CHECK(family[0].start_index == 0);
        CHECK(family[1].start_index == 4);
    }
    SUBCASE("delta shifts every window") {
        const auto family = lift(rs, LiftConfig(4, 2, 1));
        REQUIRE(family.size() == 3);
        CHECK(family[0].start_index == 1);
        CHECK(family[2].start_index == 5);
    }
    SUBCASE("window content matches the series slice") {
        const auto family = lift(rs, LiftConfig(4, 2));
        for (const auto& em : family) {
            for (std::size_t i = 0; i < 4; ++i) {
                CHECK(em.atoms(i, 0) == rs.values(em.start_index + i, 0));
            }
        }
    }
}

TEST_CASE("lift rejects series shorter than h1 + delta") {
    Matrix prices(4, 1);
    prices(0, 0) = 1.0;
    prices(1, 0) = 2.0;
    prices(2, 0) = 1.5;
    prices(3, 0) = 2.5;
    const ReturnSeries rs = log_returns(Stream(std::move(prices)));
    CHECK_THROWS_AS(lift(rs, LiftConfig(4, 2, 0)), InsufficientDataError);
    CHECK_THROWS_AS(lift(rs, LiftConfig(3, 3, 1)), InsufficientDataError);
    CHECK_NOTHROW(lift(rs, LiftConfig(3, 3, 0)));
}

TEST_CASE("lift config invariants") {
    CHECK_THROWS_AS(LiftConfig(4, 5), ParameterError);      // h2 > h1
    CHECK_THROWS_AS(LiftConfig(4, 0), ParameterError);      // h2 < 1
    CHECK_THROWS_AS(LiftConfig(4, 2, 2), ParameterError);   // delta > h2-1
    CHECK_NOTHROW(LiftConfig(4, 2, 1));
}

TEST_CASE("window count agrees with the closed form and the enumeration oracle") {
    // The 20-year point count minus one return point.
    const std::size_t n_returns = 35279;
    const std::size_t h1 = 35;
    const std::size_t h2 = 7;
    const std::size_t brute = count_windows_brute(n_returns, h1, h2, 0);
    const std::size_t closed_form = (n_returns - (h1 - h2)) / h2;
    CHECK(brute == closed_form);
    CHECK(lift_window_count(n_returns, LiftConfig(h1, h2)) == brute);

    // Random configurations, with and without delta.
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(400);
        const std::size_t h1r = 1 + rng.uniform_index(40);
        const std::size_t h2r = 1 + rng.uniform_index(h1r);
        const std::size_t delta = rng.uniform_index(h2r);
        CHECK(lift_window_count(n, LiftConfig(h1r, h2r, delta)) ==
              count_windows_brute(n, h1r, h2r, delta));
    }
}

TEST_CASE("lift coverage and overlap properties") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 30 + rng.uniform_index(200);
        const std::size_t h1 = 2 + rng.uniform_index(20);
        const std::size_t h2 = 1 + rng.uniform_index(h1);

        Matrix prices(n + 1, 1);
        prices(0, 0) = 1.0;
        for (std::size_t i = 1; i <= n; ++i) {
            prices(i, 0) = prices(i - 1, 0) * std::exp(0.1 + 0.01 * rng.normal());
        }
        ReturnSeries rs = log_returns(Stream(std::move(prices)));
        if (rs.length() < h1) {
            continue;
        }
        const auto family = lift(rs, LiftConfig(h1, h2));

        // Consecutive windows are offset by exactly h2.
        for (std::size_t m = 1; m < family.size(); ++m) {
            CHECK(family[m].start_index - family[m - 1].start_index == h2);
        }
        // With delta = 0 every point before the final window's end is covered,
        // leaving at most a tail of fewer than h1 points.
        std::vector<bool> covered(n, false);
        for (const auto& em : family) {
            for (std::size_t i = 0; i < h1; ++i) {
                covered[em.start_index + i] = true;
            }
        }
        const std::size_t last = family.back().start_index + h1;
        bool all_covered = true;
        for (std::size_t i = 0; i < last; ++i) {
            all_covered = all_covered && covered[i];
        }
        CHECK(all_covered);
        CHECK(n - last < h1);
    }
}

TEST_CASE("lift is deterministic") {
    const SyntheticDataset ds = test::one_d_prefix(5, 2000);
    const ReturnSeries rs = log_returns(ds.prices);
    const auto a = lift(rs, LiftConfig(35, 7, 3));
    const auto b = lift(rs, LiftConfig(35, 7, 3));
    REQUIRE(a.size() == b.size());
    for (std::size_t m = 0; m < a.size(); ++m) {
        CHECK(a[m].atoms == b[m].atoms);
        CHECK(a[m].start_index == b[m].start_index);
    }
}

TEST_SUITE_END();
