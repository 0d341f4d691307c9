#include <genspec/spectra.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include <genspec/error.hpp>
#include <genspec/random.hpp>

namespace genspec {

namespace {

constexpr int kIterationsPerRow = 60;

bool lex_less(const Scalar& x, const Scalar& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
}

double min_pairwise_gap(const std::vector<Scalar>& values) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t j = i + 1; j < values.size(); ++j) gap = std::min(gap, std::abs(values[i] - values[j]));
    return gap;
}

} // namespace

Eigendecomposition eigendecompose(const Matrix& a) {
    const std::size_t n = a.order();
    const int cap = kIterationsPerRow * static_cast<int>(n);

    Eigen::ComplexEigenSolver<DenseValues> solver;
    solver.setMaxIterations(cap);
    solver.compute(a.values(), true);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigensolver did not converge on a " + std::to_string(n) + "x" + std::to_string(n) +
                           " matrix (|A|_F=" + std::to_string(frobenius_norm(a)) +
                           ", iteration cap=" + std::to_string(cap) + ")");
    }

    const auto& raw_values = solver.eigenvalues();
    const auto& raw_vectors = solver.eigenvectors();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return lex_less(raw_values(static_cast<Eigen::Index>(i)), raw_values(static_cast<Eigen::Index>(j)));
    });

    std::vector<Scalar> values;
    values.reserve(n);
    DenseValues vectors(raw_vectors.rows(), raw_vectors.cols());
    for (std::size_t k = 0; k < n; ++k) {
        const auto src = static_cast<Eigen::Index>(order[k]);
        values.push_back(raw_values(src));
        auto column = raw_vectors.col(src);
        const double norm = column.norm();
        vectors.col(static_cast<Eigen::Index>(k)) = norm > 0.0 ? DenseValues(column / norm) : DenseValues(column);
    }
    return {std::move(values), Matrix(std::move(vectors), Field::Complex)};
}

SpectrumReport simplicity_report(const Matrix& a, double gap_tol) {
    if (!(gap_tol > 0.0)) throw PreconditionError("simplicity_report: gap_tol must be positive");
    auto decomposition = eigendecompose(a);

    SpectrumReport report;
    report.gap_tol_used = gap_tol;
    report.eigenvalues = std::move(decomposition.eigenvalues);
    report.min_gap = min_pairwise_gap(report.eigenvalues);

    const double threshold = gap_tol * std::max(1.0, frobenius_norm(a));
    report.is_simple = report.min_gap > threshold;

    const bool eigenvalues_clear = std::all_of(report.eigenvalues.begin(), report.eigenvalues.end(),
                                               [&](const Scalar& lambda) { return std::abs(lambda) > threshold; });
    report.is_invertible = eigenvalues_clear && passes_invertibility_gate(a);

    if (report.is_simple) {
        const double kappa = condition_number(decomposition.eigenvectors);
        report.eig_condition = kappa;
        report.safe_radius = report.min_gap / (2.0 * kappa);
    }
    return report;
}

Scalar char_poly_discriminant(const Matrix& a) {
    const std::size_t n = a.order();
    if (n > kMaxDiscriminantOrder)
        throw DimensionError("char_poly_discriminant: order " + std::to_string(n) + " exceeds the limit of " +
                             std::to_string(kMaxDiscriminantOrder));
    const auto values = eigendecompose(a).eigenvalues;
    Scalar product(1.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Scalar d = values[i] - values[j];
            product *= d * d;
        }
    }
    return product;
}

Scalar discriminant_2x2(const Matrix& a) {
    if (a.rows() != 2 || a.cols() != 2) throw DimensionError("discriminant_2x2: expected a 2x2 matrix");
    const Scalar trace = a(0, 0) + a(1, 1);
    const Scalar det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    return trace * trace - 4.0 * det;
}

bool certify_openness(const Matrix& a, const SpectrumReport& report, std::size_t trials, RandomSource& rng) {
    if (!report.is_simple) throw PreconditionError("certify_openness: the report does not certify a simple spectrum");
    const std::size_t n = a.order();
    if (trials == 0) return true;
    // Every 1x1 matrix has a simple spectrum.
    if (n == 1 || !std::isfinite(report.safe_radius)) return true;

    const double radius = 0.9 * report.safe_radius;
    for (std::size_t t = 0; t < trials; ++t) {
        Matrix direction = sample_gaussian(n, a.field(), rng);
        const double norm = spectral_norm(direction);
        if (norm == 0.0) continue;
        direction *= radius / norm;
        if (!simplicity_report(a + direction, report.gap_tol_used).is_simple) return false;
    }
    return true;
}

} // namespace genspec
