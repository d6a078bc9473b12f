#include "regime/measures.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace regime {

namespace {

// Numeric comparison when both entries parse fully as numbers, lexicographic
// otherwise. ISO-8601 timestamps sort correctly under the string branch.
bool timestamp_less(const std::string& a, const std::string& b) {
    char* end_a = nullptr;
    char* end_b = nullptr;
    const double va = std::strtod(a.c_str(), &end_a);
    const double vb = std::strtod(b.c_str(), &end_b);
    const bool numeric = !a.empty() && !b.empty() && *end_a == '\0' && *end_b == '\0';
    if (numeric) {
        return va < vb;
    }
    return a < b;
}

}  // namespace

Stream::Stream(Matrix values, std::optional<std::vector<std::string>> timestamps)
    : values_(std::move(values)), timestamps_(std::move(timestamps)) {
    if (values_.rows() < 2) {
        throw ParameterError("Stream: need at least 2 observations, got " +
                             std::to_string(values_.rows()));
    }
    if (values_.cols() < 1) {
        throw ParameterError("Stream: dimension must be >= 1");
    }
    for (std::size_t i = 0; i < values_.rows(); ++i) {
        for (std::size_t j = 0; j < values_.cols(); ++j) {
            if (!(values_(i, j) > 0.0)) {
                throw DomainError("Stream: non-positive price at row " + std::to_string(i) +
                                  ", column " + std::to_string(j));
            }
        }
    }
    if (timestamps_) {
        if (timestamps_->size() != values_.rows()) {
            throw ShapeError("Stream: timestamp count " + std::to_string(timestamps_->size()) +
                             " does not match row count " + std::to_string(values_.rows()));
        }
        for (std::size_t i = 1; i < timestamps_->size(); ++i) {
            if (!timestamp_less((*timestamps_)[i - 1], (*timestamps_)[i])) {
                throw ParameterError("Stream: timestamps not strictly increasing at row " +
                                     std::to_string(i));
            }
        }
    }
}

Matrix ReturnSeries::unstandardized() const {
    Matrix raw(values.rows(), values.cols());
    for (std::size_t i = 0; i < values.rows(); ++i) {
        for (std::size_t j = 0; j < values.cols(); ++j) {
            raw(i, j) = values(i, j) * std_used[j] + mean_used[j];
        }
    }
    return raw;
}

LiftConfig::LiftConfig(std::size_t h1_, std::size_t h2_, std::size_t delta_)
    : h1(h1_), h2(h2_), delta(delta_) {
    if (h1 < 1 || h2 < 1 || h2 > h1) {
        throw ParameterError("LiftConfig: require 1 <= h2 <= h1, got h1=" + std::to_string(h1) +
                             " h2=" + std::to_string(h2));
    }
    if (delta > h2 - 1) {
        throw ParameterError("LiftConfig: require delta <= h2-1, got delta=" +
                             std::to_string(delta) + " h2=" + std::to_string(h2));
    }
}

ReturnSeries log_returns(const Stream& stream) {
    const Matrix& prices = stream.values();
    const std::size_t n = prices.rows() - 1;
    const std::size_t d = prices.cols();

    Matrix raw(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            raw(i, j) = std::log(prices(i + 1, j)) - std::log(prices(i, j));
        }
    }

    ReturnSeries out;
    out.mean_used.resize(d);
    out.std_used.resize(d);
    out.values = Matrix(n, d);

    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mean += raw(i, j);
        }
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dv = raw(i, j) - mean;
            var += dv * dv;
        }
        var /= static_cast<double>(n);  // population variance
        const double sd = std::sqrt(var);
        // Constant log-return columns produce sd of 0 up to rounding noise.
        if (sd <= 1e-15 * std::max(1.0, std::abs(mean))) {
            throw DegenerateInputError("log_returns: coordinate " + std::to_string(j) +
                                       " has zero return variance");
        }
        out.mean_used[j] = mean;
        out.std_used[j] = sd;
        for (std::size_t i = 0; i < n; ++i) {
            out.values(i, j) = (raw(i, j) - mean) / sd;
        }
    }
    return out;
}

std::size_t lift_window_count(std::size_t series_length, const LiftConfig& cfg) {
    if (series_length < cfg.h1 + cfg.delta) {
        return 0;
    }
    // Largest M with delta + h2*(M-1) + h1 <= series_length.
    return (series_length - cfg.delta - (cfg.h1 - cfg.h2)) / cfg.h2;
}

std::vector<EmpiricalMeasure> lift(const ReturnSeries& returns, const LiftConfig& cfg) {
    const std::size_t n = returns.length();
    const std::size_t d = returns.dimension();
    const std::size_t m_count = lift_window_count(n, cfg);
    if (m_count == 0) {
        throw InsufficientDataError("lift: series of length " + std::to_string(n) +
                                    " cannot fit a window of h1=" + std::to_string(cfg.h1) +
                                    " at delta=" + std::to_string(cfg.delta));
    }
    std::vector<EmpiricalMeasure> family;
    family.reserve(m_count);
    for (std::size_t m = 0; m < m_count; ++m) {
        const std::size_t start = cfg.delta + cfg.h2 * m;
        EmpiricalMeasure em;
        em.window_index = m;
        em.start_index = start;
        em.atoms = Matrix(cfg.h1, d);
        for (std::size_t i = 0; i < cfg.h1; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                em.atoms(i, j) = returns.values(start + i, j);
            }
        }
        family.push_back(std::move(em));
    }
    return family;
}

}  // namespace regime
