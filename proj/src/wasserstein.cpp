#include "regime/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace regime {

namespace {

void require_order(int p) {
    if (p != 1 && p != 2) {
        throw ParameterError("order p must be 1 or 2, got " + std::to_string(p));
    }
}

constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace

SortedAtoms SortedAtoms::from_unsorted(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    SortedAtoms out;
    out.values_ = std::move(values);
    return out;
}

SortedAtoms SortedAtoms::from_sorted(std::vector<double> values) {
    if (!std::is_sorted(values.begin(), values.end())) {
        throw ParameterError("SortedAtoms::from_sorted: values are not ascending");
    }
    SortedAtoms out;
    out.values_ = std::move(values);
    return out;
}

std::string to_string(ProjectionScheme scheme) {
    switch (scheme) {
        case ProjectionScheme::kSingle: return "single";
        case ProjectionScheme::kHalfCircle: return "half-circle";
        case ProjectionScheme::kFibonacciHemisphere: return "fibonacci-hemisphere";
        case ProjectionScheme::kCustom: return "custom";
    }
    return "unknown";
}

ProjectionSet ProjectionSet::from_directions(Matrix directions, ProjectionScheme scheme) {
    const std::size_t l = directions.rows();
    const std::size_t d = directions.cols();
    if (l < 1 || d < 1) {
        throw ParameterError("ProjectionSet: need at least one direction of dimension >= 1");
    }
    for (std::size_t i = 0; i < l; ++i) {
        double norm2 = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            norm2 += directions(i, j) * directions(i, j);
        }
        if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) {
            throw ParameterError("ProjectionSet: direction " + std::to_string(i) +
                                 " is not unit norm");
        }
    }
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = i + 1; j < l; ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                dot += directions(i, k) * directions(j, k);
            }
            if (std::abs(dot) > 1.0 - 1e-12) {
                throw ParameterError("ProjectionSet: directions " + std::to_string(i) + " and " +
                                     std::to_string(j) + " are equal or antipodal");
            }
        }
    }
    return ProjectionSet(std::move(directions), scheme);
}

double w1_distance(const SortedAtoms& a, const SortedAtoms& b, int p) {
    require_order(p);
    const std::size_t n = a.size();
    if (n == 0 || n != b.size()) {
        throw ShapeError("w1_distance: atom counts differ (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
    }
    const double* av = a.values().data();
    const double* bv = b.values().data();
    double sum = 0.0;
    if (p == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            sum += std::abs(av[i] - bv[i]);
        }
        return sum / static_cast<double>(n);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double diff = av[i] - bv[i];
        sum += diff * diff;
    }
    return std::sqrt(sum / static_cast<double>(n));
}

SortedAtoms w1_barycentre(const std::vector<const SortedAtoms*>& measures, int p) {
    require_order(p);
    if (measures.empty()) {
        throw EmptyClusterError("w1_barycentre: empty measure list");
    }
    const std::size_t n = measures[0]->size();
    for (const SortedAtoms* m : measures) {
        if (m->size() != n) {
            throw ShapeError("w1_barycentre: atom counts differ");
        }
    }
    const std::size_t m_count = measures.size();
    std::vector<double> out(n);
    std::vector<double> scratch(m_count);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t m = 0; m < m_count; ++m) {
            scratch[m] = (*measures[m])[j];
        }
        if (p == 2) {
            out[j] = std::accumulate(scratch.begin(), scratch.end(), 0.0) /
                     static_cast<double>(m_count);
        } else {
            const std::size_t mid = m_count / 2;
            std::nth_element(scratch.begin(), scratch.begin() + mid, scratch.end());
            if (m_count % 2 == 1) {
                out[j] = scratch[mid];
            } else {
                const double hi = scratch[mid];
                const double lo = *std::max_element(scratch.begin(), scratch.begin() + mid);
                out[j] = 0.5 * (lo + hi);
            }
        }
    }
    // Per-index medians/means of sorted sequences are themselves monotone.
    return SortedAtoms::from_sorted(std::move(out));
}

SortedAtoms w1_barycentre(const std::vector<SortedAtoms>& measures, int p) {
    std::vector<const SortedAtoms*> ptrs;
    ptrs.reserve(measures.size());
    for (const SortedAtoms& m : measures) {
        ptrs.push_back(&m);
    }
    return w1_barycentre(ptrs, p);
}

ProjectionSet make_projection_set(std::size_t d, std::size_t L) {
    if (d < 1 || L < 1) {
        throw ParameterError("make_projection_set: require d >= 1 and L >= 1");
    }
    if (d == 1) {
        Matrix dirs(1, 1);
        dirs(0, 0) = 1.0;
        return ProjectionSet::from_directions(std::move(dirs), ProjectionScheme::kSingle);
    }
    if (d == 2) {
        // Angles on [0, pi): antipodal directions carry no extra information
        // for the distance, so the half circle suffices.
        Matrix dirs(L, 2);
        for (std::size_t l = 0; l < L; ++l) {
            const double angle = kPi * static_cast<double>(l) / static_cast<double>(L);
            dirs(l, 0) = std::cos(angle);
            dirs(l, 1) = std::sin(angle);
        }
        return ProjectionSet::from_directions(std::move(dirs), ProjectionScheme::kHalfCircle);
    }
    if (d == 3) {
        // Fibonacci lattice restricted to the upper hemisphere (z > 0), which
        // keeps the set free of antipodal pairs by construction.
        const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
        Matrix dirs(L, 3);
        for (std::size_t l = 0; l < L; ++l) {
            const double z = (static_cast<double>(l) + 0.5) / static_cast<double>(L);
            const double r = std::sqrt(1.0 - z * z);
            const double phi = golden_angle * static_cast<double>(l);
            double x = r * std::cos(phi);
            double y = r * std::sin(phi);
            const double norm = std::sqrt(x * x + y * y + z * z);
            dirs(l, 0) = x / norm;
            dirs(l, 1) = y / norm;
            dirs(l, 2) = z / norm;
        }
        return ProjectionSet::from_directions(std::move(dirs),
                                              ProjectionScheme::kFibonacciHemisphere);
    }
    throw ParameterError("make_projection_set: d >= 4 requires caller-supplied directions "
                         "(ProjectionSet::from_directions)");
}

ProjectedMeasure project_measure(const EmpiricalMeasure& measure, const ProjectionSet& ps) {
    const std::size_t d = measure.atoms.cols();
    if (d != ps.dimension()) {
        throw ShapeError("project_measure: measure dimension " + std::to_string(d) +
                         " does not match projection dimension " +
                         std::to_string(ps.dimension()));
    }
    const std::size_t n = measure.atoms.rows();
    const std::size_t l_count = ps.count();
    ProjectedMeasure out;
    out.window_index = measure.window_index;
    out.per_direction.reserve(l_count);
    std::vector<double> proj(n);
    for (std::size_t l = 0; l < l_count; ++l) {
        const double* dir = ps.directions().row(l);
        for (std::size_t i = 0; i < n; ++i) {
            const double* atom = measure.atoms.row(i);
            double dot = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                dot += atom[j] * dir[j];
            }
            proj[i] = dot;
        }
        out.per_direction.push_back(SortedAtoms::from_unsorted(proj));
    }
    return out;
}

std::vector<ProjectedMeasure> project_family(const std::vector<EmpiricalMeasure>& family,
                                             const ProjectionSet& ps) {
    std::vector<ProjectedMeasure> out;
    out.reserve(family.size());
    for (const EmpiricalMeasure& m : family) {
        out.push_back(project_measure(m, ps));
    }
    return out;
}

double sliced_distance(const ProjectedMeasure& a, const ProjectedMeasure& b, int p) {
    const std::size_t l_count = a.per_direction.size();
    if (l_count == 0 || l_count != b.per_direction.size()) {
        throw ShapeError("sliced_distance: projection counts differ (" +
                         std::to_string(a.per_direction.size()) + " vs " +
                         std::to_string(b.per_direction.size()) + ")");
    }
    double sum = 0.0;
    for (std::size_t l = 0; l < l_count; ++l) {
        sum += w1_distance(a.per_direction[l], b.per_direction[l], p);
    }
    return sum / static_cast<double>(l_count);
}

double brute_force_w1(const std::vector<double>& a, const std::vector<double>& b, int p) {
    require_order(p);
    const std::size_t n = a.size();
    if (n == 0 || n != b.size()) {
        throw ShapeError("brute_force_w1: atom counts differ");
    }
    if (n > 8) {
        throw SizeGuardError("brute_force_w1: n = " + std::to_string(n) + " exceeds cap of 8");
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double diff = std::abs(a[i] - b[perm[i]]);
            cost += (p == 1) ? diff : diff * diff;
        }
        best = std::min(best, cost);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const double mean = best / static_cast<double>(n);
    return (p == 1) ? mean : std::sqrt(mean);
}

}  // namespace regime
