#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "regime/matrix.hpp"
#include "regime/measures.hpp"

namespace regime {

/// Ascending-sorted atoms of a one-dimensional empirical measure.
class SortedAtoms {
public:
    SortedAtoms() = default;

    /// Sorts the input.
    static SortedAtoms from_unsorted(std::vector<double> values);

    /// Adopts values that are already ascending; validated.
    static SortedAtoms from_sorted(std::vector<double> values);

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    bool operator==(const SortedAtoms& other) const = default;

private:
    std::vector<double> values_;
};

enum class ProjectionScheme {
    kSingle,              // d=1: the lone direction (+1)
    kHalfCircle,          // d=2: L equally spaced angles on [0, pi)
    kFibonacciHemisphere, // d=3: Fibonacci lattice on the upper hemisphere
    kCustom,              // caller-supplied directions (any d)
};

std::string to_string(ProjectionScheme scheme);

/// L unit vectors on S^{d-1}, fixed for a whole clustering run. No two
/// directions may be equal or antipodal.
class ProjectionSet {
public:
    static ProjectionSet from_directions(Matrix directions,
                                         ProjectionScheme scheme = ProjectionScheme::kCustom);

    const Matrix& directions() const { return directions_; }
    std::size_t count() const { return directions_.rows(); }
    std::size_t dimension() const { return directions_.cols(); }
    ProjectionScheme scheme() const { return scheme_; }

private:
    ProjectionSet(Matrix directions, ProjectionScheme scheme)
        : directions_(std::move(directions)), scheme_(scheme) {}

    Matrix directions_;
    ProjectionScheme scheme_;
};

/// A measure reduced to its L sorted one-dimensional projections. Projection
/// and sorting happen exactly once, at construction.
struct ProjectedMeasure {
    std::vector<SortedAtoms> per_direction;  // L entries of common length h1
    std::size_t window_index = 0;

    std::size_t directions() const { return per_direction.size(); }
    std::size_t atom_count() const { return per_direction.empty() ? 0 : per_direction[0].size(); }
};

/// p-Wasserstein distance between equal-size sorted 1D measures:
/// ((1/n) * sum |a_i - b_i|^p)^(1/p). p must be 1 or 2.
double w1_distance(const SortedAtoms& a, const SortedAtoms& b, int p);

/// 1D Wasserstein barycentre of equal-size sorted measures: per order
/// statistic, the median (p=1, midpoint rule for even counts) or mean (p=2).
SortedAtoms w1_barycentre(const std::vector<const SortedAtoms*>& measures, int p);
SortedAtoms w1_barycentre(const std::vector<SortedAtoms>& measures, int p);

/// Deterministic projection grid. d=1 ignores L and returns (+1); d=2 uses L
/// angles pi*l/L; d=3 uses a Fibonacci hemisphere lattice. For d >= 4 supply
/// directions via ProjectionSet::from_directions instead.
ProjectionSet make_projection_set(std::size_t d, std::size_t L);

/// Sorted projections <x_i, theta_l> of a measure's atoms for every direction.
ProjectedMeasure project_measure(const EmpiricalMeasure& measure, const ProjectionSet& ps);

/// Convenience: project a whole lifted family.
std::vector<ProjectedMeasure> project_family(const std::vector<EmpiricalMeasure>& family,
                                             const ProjectionSet& ps);

/// Sliced Wasserstein distance: (1/L) * sum_l W_p over matching projections.
double sliced_distance(const ProjectedMeasure& a, const ProjectedMeasure& b, int p);

/// Exact Kantorovich optimum over all n! assignments; test oracle. n <= 8.
double brute_force_w1(const std::vector<double>& a, const std::vector<double>& b, int p);

}  // namespace regime
