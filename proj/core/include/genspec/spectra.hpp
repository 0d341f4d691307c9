#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <genspec/matrix.hpp>

namespace genspec {

class RandomSource;

/// Default relative gap threshold for deciding simplicity.
inline constexpr double kDefaultGapTol = 1e-8;

/// Residual bound for eigenpairs: |A v - lambda v| <= kTolEig * |A|_2.
inline constexpr double kTolEig = 1e-10;

/// Largest order accepted by char_poly_discriminant.
inline constexpr std::size_t kMaxDiscriminantOrder = 8;

struct Eigendecomposition {
    /// Sorted lexicographically by (real, imag).
    std::vector<Scalar> eigenvalues;
    /// Column k is a unit 2-norm eigenvector for eigenvalues[k].
    Matrix eigenvectors;
};

/// Dense complex Schur-based eigensolve. Throws NumericError if the QR
/// iteration does not converge.
Eigendecomposition eigendecompose(const Matrix& a);

/// Simplicity and invertibility certificate for a square matrix.
///
/// With scale = max(1, |A|_F):
///   is_simple     <=> min_gap > gap_tol_used * scale
///   is_invertible <=> every |lambda| > gap_tol_used * scale and
///                     sigma_min / sigma_max > kTolSing
/// safe_radius = min_gap / (2 * eig_condition) bounds, in spectral norm,
/// the perturbations under which the spectrum stays simple (Bauer-Fike).
struct SpectrumReport {
    std::vector<Scalar> eigenvalues;
    /// +inf for 1x1 matrices.
    double min_gap = 0.0;
    bool is_simple = false;
    bool is_invertible = false;
    /// 2-norm condition number of the eigenvector matrix; set only when simple.
    std::optional<double> eig_condition;
    double safe_radius = 0.0;
    double gap_tol_used = kDefaultGapTol;
};

SpectrumReport simplicity_report(const Matrix& a, double gap_tol = kDefaultGapTol);

/// True when the report certifies the matrix as both simple and invertible.
inline bool is_generic(const SpectrumReport& report) noexcept {
    return report.is_simple && report.is_invertible;
}

/// Product of (lambda_i - lambda_j)^2 over i < j, from computed eigenvalues.
/// Requires order <= kMaxDiscriminantOrder.
Scalar char_poly_discriminant(const Matrix& a);

/// (trace)^2 - 4 det, the closed form for 2x2 matrices.
Scalar discriminant_2x2(const Matrix& a);

/// Samples `trials` perturbations E with |E|_2 = 0.9 * safe_radius and
/// checks that a + E is still simple at the report's gap tolerance.
/// Requires report.is_simple.
bool certify_openness(const Matrix& a, const SpectrumReport& report, std::size_t trials, RandomSource& rng);

} // namespace genspec
