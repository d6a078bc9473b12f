#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "regime/matrix.hpp"
#include "regime/measures.hpp"

namespace regime {

enum class RegimeShape { kGaussian, kMoons };

/// Parameters of one regime: annualized mean log return and volatility, plus
/// the cross-correlation for d > 1.
struct RegimeParams {
    double mu = 0.0;
    double sigma = 0.2;
    double rho = 0.0;               // ignored for d = 1
    RegimeShape shape = RegimeShape::kGaussian;
    double moon_noise = 0.05;

    void validate() const;
};

inline RegimeParams bull_params(double rho = 0.0) { return {0.02, 0.2, rho}; }
inline RegimeParams bear_params(double rho = 0.0) { return {-0.02, 0.3, rho}; }

/// Full description of a synthetic dataset: regime 0 is the majority; every
/// further regime occupies `minority_period_count` non-overlapping periods of
/// `minority_period_length` points.
struct ScenarioSpec {
    std::size_t d = 1;
    std::size_t years = 20;
    std::size_t days_per_year = 252;
    std::size_t obs_per_day = 7;
    std::vector<RegimeParams> regimes;       // regimes[0] = majority
    std::size_t minority_period_count = 10;
    std::size_t minority_period_length = 0;  // 0: half a year
    std::uint64_t seed = 0;

    std::size_t n_points() const { return years * days_per_year * obs_per_day; }
    double dt() const { return 1.0 / static_cast<double>(days_per_year * obs_per_day); }
    std::size_t period_length() const {
        return minority_period_length > 0 ? minority_period_length
                                          : days_per_year / 2 * obs_per_day;
    }
};

struct SyntheticDataset {
    Stream prices;            // n_points() rows, d columns, S_0 = 1 per coordinate
    std::vector<int> truth;   // regime id per price point
    ScenarioSpec spec;

    /// Ground truth per return point: return i realizes price point i+1.
    std::vector<int> truth_for_returns() const;
};

/// Canonical dataset types. The 2D types A-D carry two or three regimes with
/// the bull/bear parameter pairs and correlations +-1/2; type D's third
/// regime is the moon-shaped one. The 3D pair mirrors the 2D two-regime
/// setups with an equicorrelated Gaussian.
enum class ScenarioType { k1d, k2dA, k2dB, k2dC, k2dD, k3dA, k3dB };

ScenarioType scenario_from_string(const std::string& name);
std::string to_string(ScenarioType type);

/// Non-overlapping minority intervals [start, end) inside [0, n_points()),
/// sampled by seeded rejection; one batch of periods per minority regime.
/// Throws GenerationError after 10,000 rejected draws.
std::vector<std::pair<std::size_t, std::size_t>> place_minority_periods(const ScenarioSpec& spec);

/// One-dimensional GBM with regime-dependent drift/volatility.
SyntheticDataset gen_1d(const ScenarioSpec& spec);

/// n x 2 log returns: coordinate 1 drawn with parameters theta, coordinate 2
/// as rho*r1 + sqrt(1-rho^2)*r' with r' an independent draw of the same law.
Matrix gen_2d_gaussian_regime(const RegimeParams& theta, double rho, std::size_t n, double dt,
                              std::uint64_t seed);

/// Two interleaving noisy semicircles, affinely transformed so sample means,
/// variances, and correlation match the Gaussian regime targets exactly.
Matrix gen_moons_regime(const RegimeParams& theta, double rho, std::size_t n, double dt,
                        double noise, std::uint64_t seed);

/// The raw two-moons cloud before moment matching (unit radius, n_out =
/// ceil(n/2) upper-semicircle points first). Exposed for shape testing.
Matrix make_moons_raw(std::size_t n, double noise, std::uint64_t seed);

/// Three-dimensional Gaussian returns with equicorrelation rho; requires
/// rho > -1/(d-1) for positive definiteness.
SyntheticDataset gen_3d(const ScenarioSpec& spec);

/// Any-dimension generator driven by the spec (dispatches on spec.d).
SyntheticDataset gen_dataset(const ScenarioSpec& spec);

/// The canonical ScenarioSpec for a dataset type.
ScenarioSpec scenario_spec(ScenarioType type, std::uint64_t seed, std::size_t years = 20);

/// Generate one of the canonical datasets.
SyntheticDataset gen_scenario(ScenarioType type, std::uint64_t seed, std::size_t years = 20);

/// The first `n_points` price rows (and truth entries) of a dataset; the
/// reduced low-data variants are prefixes of the full one.
SyntheticDataset truncate_dataset(const SyntheticDataset& full, std::size_t n_points);

}  // namespace regime
