#include "regime/matrix.hpp"

#include <cmath>

namespace regime {

Matrix cholesky(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw ParameterError("cholesky: matrix must be square");
    }
    const std::size_t n = a.rows();
    Matrix l(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                sum -= l(i, k) * l(j, k);
            }
            if (i == j) {
                if (sum <= 0.0) {
                    throw ParameterError("cholesky: matrix is not positive definite");
                }
                l(i, i) = std::sqrt(sum);
            } else {
                l(i, j) = sum / l(j, j);
            }
        }
    }
    return l;
}

std::vector<double> column_means(const Matrix& m) {
    std::vector<double> means(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            means[j] += m(i, j);
        }
    }
    for (double& v : means) {
        v /= static_cast<double>(m.rows());
    }
    return means;
}

Matrix covariance(const Matrix& m) {
    const std::size_t n = m.rows();
    const std::size_t d = m.cols();
    const std::vector<double> means = column_means(m);
    Matrix cov(d, d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < d; ++a) {
            const double da = m(i, a) - means[a];
            for (std::size_t b = a; b < d; ++b) {
                cov(a, b) += da * (m(i, b) - means[b]);
            }
        }
    }
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a; b < d; ++b) {
            cov(a, b) /= static_cast<double>(n);
            cov(b, a) = cov(a, b);
        }
    }
    return cov;
}

}  // namespace regime
