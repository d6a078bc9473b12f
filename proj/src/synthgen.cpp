#include "regime/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "regime/rng.hpp"

namespace regime {

namespace {

struct Theta {
    double mean;    // per-step mean log return, (mu - sigma^2/2) * dt
    double stddev;  // per-step volatility, sigma * sqrt(dt)
};

Theta per_step(const RegimeParams& params, double dt) {
    return {(params.mu - params.sigma * params.sigma / 2.0) * dt,
            params.sigma * std::sqrt(dt)};
}

// Seed namespaces under a scenario seed; keeps placement and per-block
// streams independent.
std::uint64_t placement_seed(std::uint64_t seed) { return splitmix64_at(seed, 1); }
std::uint64_t block_seed(std::uint64_t seed, std::size_t block) {
    return splitmix64_at(seed, 2 + block);
}

}  // namespace

void RegimeParams::validate() const {
    if (!(sigma > 0.0)) {
        throw ParameterError("RegimeParams: sigma must be positive");
    }
    if (!(rho > -1.0 && rho < 1.0)) {
        throw ParameterError("RegimeParams: rho must lie in (-1, 1)");
    }
    if (moon_noise < 0.0) {
        throw ParameterError("RegimeParams: moon noise must be >= 0");
    }
}

std::vector<int> SyntheticDataset::truth_for_returns() const {
    return {truth.begin() + 1, truth.end()};
}

ScenarioType scenario_from_string(const std::string& name) {
    if (name == "1d") return ScenarioType::k1d;
    if (name == "2d-a") return ScenarioType::k2dA;
    if (name == "2d-b") return ScenarioType::k2dB;
    if (name == "2d-c") return ScenarioType::k2dC;
    if (name == "2d-d") return ScenarioType::k2dD;
    if (name == "3d-a") return ScenarioType::k3dA;
    if (name == "3d-b") return ScenarioType::k3dB;
    throw ParameterError("unknown scenario '" + name +
                         "' (expected 1d, 2d-a, 2d-b, 2d-c, 2d-d, 3d-a, 3d-b)");
}

std::string to_string(ScenarioType type) {
    switch (type) {
        case ScenarioType::k1d: return "1d";
        case ScenarioType::k2dA: return "2d-a";
        case ScenarioType::k2dB: return "2d-b";
        case ScenarioType::k2dC: return "2d-c";
        case ScenarioType::k2dD: return "2d-d";
        case ScenarioType::k3dA: return "3d-a";
        case ScenarioType::k3dB: return "3d-b";
    }
    return "unknown";
}

std::vector<std::pair<std::size_t, std::size_t>> place_minority_periods(const ScenarioSpec& spec) {
    const std::size_t n = spec.n_points();
    const std::size_t len = spec.period_length();
    const std::size_t minority_regimes = spec.regimes.empty() ? 0 : spec.regimes.size() - 1;
    const std::size_t total_periods = minority_regimes * spec.minority_period_count;
    if (len == 0 || total_periods == 0) {
        return {};
    }
    if (len * total_periods >= n) {
        throw GenerationError("place_minority_periods: minority periods cover the whole series, "
                              "no room for the majority regime");
    }

    Rng rng(placement_seed(spec.seed));
    std::vector<std::pair<std::size_t, std::size_t>> periods;
    periods.reserve(total_periods);
    std::size_t rejections = 0;
    while (periods.size() < total_periods) {
        const std::size_t start = static_cast<std::size_t>(rng.uniform_index(n - len + 1));
        const std::size_t end = start + len;
        const bool overlaps = std::any_of(periods.begin(), periods.end(), [&](const auto& p) {
            return start < p.second && p.first < end;
        });
        if (overlaps) {
            if (++rejections >= 10000) {
                throw GenerationError("place_minority_periods: packing failed after 10,000 "
                                      "rejections");
            }
            continue;
        }
        periods.emplace_back(start, end);
    }
    return periods;
}

Matrix gen_2d_gaussian_regime(const RegimeParams& theta, double rho, std::size_t n, double dt,
                              std::uint64_t seed) {
    theta.validate();
    if (!(rho > -1.0 && rho < 1.0)) {
        throw ParameterError("gen_2d_gaussian_regime: rho must lie in (-1, 1)");
    }
    const Theta t = per_step(theta, dt);
    const double mix = std::sqrt(1.0 - rho * rho);
    Rng rng(seed);
    Matrix out(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double r1 = rng.normal(t.mean, t.stddev);
        const double rp = rng.normal(t.mean, t.stddev);
        out(i, 0) = r1;
        out(i, 1) = rho * r1 + mix * rp;
    }
    return out;
}

Matrix make_moons_raw(std::size_t n, double noise, std::uint64_t seed) {
    constexpr double kPi = 3.141592653589793238462643383279502884;
    const std::size_t n_out = (n + 1) / 2;
    const std::size_t n_in = n / 2;
    Matrix pts(n, 2);
    for (std::size_t i = 0; i < n_out; ++i) {
        const double t = n_out > 1 ? kPi * static_cast<double>(i) / static_cast<double>(n_out - 1)
                                   : 0.0;
        pts(i, 0) = std::cos(t);
        pts(i, 1) = std::sin(t);
    }
    for (std::size_t i = 0; i < n_in; ++i) {
        const double t = n_in > 1 ? kPi * static_cast<double>(i) / static_cast<double>(n_in - 1)
                                  : 0.0;
        pts(n_out + i, 0) = 1.0 - std::cos(t);
        pts(n_out + i, 1) = 0.5 - std::sin(t);
    }
    Rng rng(seed);
    // Shuffle the rows: the cloud is a joint return distribution, so the
    // parametric sweep order along the arcs must not leak into time order.
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform_index(i));
        std::swap(pts(i - 1, 0), pts(j, 0));
        std::swap(pts(i - 1, 1), pts(j, 1));
    }
    if (noise > 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            pts(i, 0) += rng.normal(0.0, noise);
            pts(i, 1) += rng.normal(0.0, noise);
        }
    }
    return pts;
}

Matrix gen_moons_regime(const RegimeParams& theta, double rho, std::size_t n, double dt,
                        double noise, std::uint64_t seed) {
    theta.validate();
    if (noise < 0.0) {
        throw ParameterError("gen_moons_regime: noise must be >= 0");
    }
    Matrix pts = make_moons_raw(n, noise, seed);

    // Whiten the raw cloud, then color to the target moments, so the sample
    // mean/covariance land exactly on the Gaussian regime's values.
    const std::vector<double> mean = column_means(pts);
    const Matrix cov = covariance(pts);
    Matrix sample_chol;
    try {
        sample_chol = cholesky(cov);
    } catch (const ParameterError&) {
        throw GenerationError("gen_moons_regime: singular sample covariance, cannot "
                              "moment-match");
    }
    const Theta t = per_step(theta, dt);
    const double s = t.stddev;
    // Target Cholesky factor: s * [[1, 0], [rho, sqrt(1 - rho^2)]].
    const double lt00 = s;
    const double lt10 = s * rho;
    const double lt11 = s * std::sqrt(1.0 - rho * rho);
    // A = L_target * L_sample^{-1} (both lower triangular).
    const double ls00 = sample_chol(0, 0);
    const double ls10 = sample_chol(1, 0);
    const double ls11 = sample_chol(1, 1);
    const double a00 = lt00 / ls00;
    const double a10 = (lt10 - lt11 * ls10 / ls11) / ls00;
    const double a11 = lt11 / ls11;

    Matrix out(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = pts(i, 0) - mean[0];
        const double y = pts(i, 1) - mean[1];
        out(i, 0) = t.mean + a00 * x;
        out(i, 1) = t.mean + a10 * x + a11 * y;
    }
    return out;
}

namespace {

// Per-block return generators, one seed per contiguous regime block.
Matrix gen_block(const RegimeParams& params, std::size_t d, std::size_t n, double dt,
                 std::uint64_t seed) {
    params.validate();
    if (params.shape == RegimeShape::kMoons) {
        if (d != 2) {
            throw ParameterError("moon-shaped regimes are defined for d = 2 only");
        }
        return gen_moons_regime(params, params.rho, n, dt, params.moon_noise, seed);
    }
    if (d == 1) {
        const Theta t = per_step(params, dt);
        Rng rng(seed);
        Matrix out(n, 1);
        for (std::size_t i = 0; i < n; ++i) {
            out(i, 0) = rng.normal(t.mean, t.stddev);
        }
        return out;
    }
    if (d == 2) {
        return gen_2d_gaussian_regime(params, params.rho, n, dt, seed);
    }
    // d >= 3: equicorrelated Gaussian; positive definite iff rho > -1/(d-1).
    if (params.rho <= -1.0 / static_cast<double>(d - 1)) {
        throw ParameterError("equicorrelation rho = " + std::to_string(params.rho) +
                             " is not positive definite for d = " + std::to_string(d) +
                             " (requires rho > -1/(d-1))");
    }
    Matrix corr(d, d);
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
            corr(a, b) = a == b ? 1.0 : params.rho;
        }
    }
    const Matrix chol = cholesky(corr);
    const Theta t = per_step(params, dt);
    Rng rng(seed);
    Matrix out(n, d);
    std::vector<double> z(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            z[j] = rng.normal();
        }
        for (std::size_t j = 0; j < d; ++j) {
            double v = 0.0;
            for (std::size_t k = 0; k <= j; ++k) {
                v += chol(j, k) * z[k];
            }
            out(i, j) = t.mean + t.stddev * v;
        }
    }
    return out;
}

}  // namespace

SyntheticDataset gen_dataset(const ScenarioSpec& spec) {
    if (spec.regimes.empty()) {
        throw ParameterError("ScenarioSpec: needs at least one regime");
    }
    if (spec.d < 1) {
        throw ParameterError("ScenarioSpec: d must be >= 1");
    }
    for (const RegimeParams& r : spec.regimes) {
        r.validate();
        if (r.shape == RegimeShape::kMoons && spec.d != 2) {
            throw ParameterError("ScenarioSpec: moon-shaped regimes require d = 2");
        }
    }
    const std::size_t n = spec.n_points();
    if (n < 2) {
        throw ParameterError("ScenarioSpec: needs at least 2 points");
    }

    std::vector<int> truth(n, 0);
    const auto periods = place_minority_periods(spec);
    for (std::size_t idx = 0; idx < periods.size(); ++idx) {
        const int regime = 1 + static_cast<int>(idx / spec.minority_period_count);
        for (std::size_t t = periods[idx].first; t < periods[idx].second; ++t) {
            truth[t] = regime;
        }
    }

    // Returns are drawn block by block; return t-1 realizes price point t and
    // follows that point's regime.
    Matrix returns(n - 1, spec.d);
    const double dt = spec.dt();
    std::size_t block = 0;
    std::size_t t = 1;
    while (t < n) {
        std::size_t end = t;
        while (end < n && truth[end] == truth[t]) {
            ++end;
        }
        const Matrix block_returns = gen_block(spec.regimes[truth[t]], spec.d, end - t, dt,
                                               block_seed(spec.seed, block));
        for (std::size_t i = 0; i < end - t; ++i) {
            for (std::size_t j = 0; j < spec.d; ++j) {
                returns(t - 1 + i, j) = block_returns(i, j);
            }
        }
        ++block;
        t = end;
    }

    Matrix prices(n, spec.d);
    for (std::size_t j = 0; j < spec.d; ++j) {
        prices(0, j) = 1.0;
        for (std::size_t i = 1; i < n; ++i) {
            prices(i, j) = prices(i - 1, j) * std::exp(returns(i - 1, j));
        }
    }

    return SyntheticDataset{Stream(std::move(prices)), std::move(truth), spec};
}

SyntheticDataset gen_1d(const ScenarioSpec& spec) {
    if (spec.d != 1) {
        throw ParameterError("gen_1d: spec dimension must be 1");
    }
    return gen_dataset(spec);
}

SyntheticDataset gen_3d(const ScenarioSpec& spec) {
    if (spec.d != 3) {
        throw ParameterError("gen_3d: spec dimension must be 3");
    }
    return gen_dataset(spec);
}

ScenarioSpec scenario_spec(ScenarioType type, std::uint64_t seed, std::size_t years) {
    ScenarioSpec spec;
    spec.seed = seed;
    spec.years = years;
    switch (type) {
        case ScenarioType::k1d:
            spec.d = 1;
            spec.regimes = {bull_params(), bear_params()};
            break;
        case ScenarioType::k2dA:
            spec.d = 2;
            spec.regimes = {bull_params(0.5), bear_params(0.5)};
            break;
        case ScenarioType::k2dB:
            spec.d = 2;
            spec.regimes = {bull_params(0.5), bull_params(-0.5)};
            break;
        case ScenarioType::k2dC:
            spec.d = 2;
            spec.regimes = {bull_params(0.5), bear_params(0.5), bear_params(-0.5)};
            break;
        case ScenarioType::k2dD: {
            spec.d = 2;
            RegimeParams moons = bear_params(-0.5);
            moons.shape = RegimeShape::kMoons;
            spec.regimes = {bull_params(-0.5), bear_params(-0.5), moons};
            break;
        }
        case ScenarioType::k3dA:
            spec.d = 3;
            spec.regimes = {bull_params(0.5), bear_params(0.5)};
            break;
        case ScenarioType::k3dB:
            // The equicorrelation matrix is singular at rho = -1/(d-1), so the
            // negatively correlated regime sits just inside the valid range.
            spec.d = 3;
            spec.regimes = {bull_params(0.5), bull_params(-0.45)};
            break;
    }
    return spec;
}

SyntheticDataset gen_scenario(ScenarioType type, std::uint64_t seed, std::size_t years) {
    return gen_dataset(scenario_spec(type, seed, years));
}

SyntheticDataset truncate_dataset(const SyntheticDataset& full, std::size_t n_points) {
    if (n_points < 2 || n_points > full.prices.n_points()) {
        throw ParameterError("truncate_dataset: invalid prefix length");
    }
    const Matrix& values = full.prices.values();
    Matrix prefix(n_points, values.cols());
    for (std::size_t i = 0; i < n_points; ++i) {
        for (std::size_t j = 0; j < values.cols(); ++j) {
            prefix(i, j) = values(i, j);
        }
    }
    std::vector<int> truth(full.truth.begin(), full.truth.begin() + n_points);
    return SyntheticDataset{Stream(std::move(prefix)), std::move(truth), full.spec};
}

}  // namespace regime
