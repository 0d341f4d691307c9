#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <genspec/matrix.hpp>
#include <genspec/perturb.hpp>
#include <genspec/spectra.hpp>

namespace genspec {

/// X = A (x) C + B (x) D with A, B of order p and C, D of order q.
struct KroneckerBinomial {
    Matrix a;
    Matrix b;
    Matrix c;
    Matrix d;

    std::size_t p() const noexcept { return a.rows(); }
    std::size_t q() const noexcept { return c.rows(); }
    /// Throws DimensionError on inconsistent factor shapes.
    void validate() const;
};

struct KronTerm {
    Matrix left;  // p x p
    Matrix right; // q x q
};

/// Sum over k of left_k (x) right_k, an explicit witness for tRank_{p,q}.
struct KronSumDecomposition {
    std::size_t p = 0;
    std::size_t q = 0;
    std::vector<KronTerm> terms;
};

struct KronRankReport {
    /// Singular values of the rearranged matrix, descending.
    std::vector<double> singular_values;
    std::size_t numeric_rank = 0;
    double tol_used = 0.0;
};

inline constexpr double kDefaultKronRankTol = 1e-9;
inline constexpr double kDefaultReconstructionTol = 1e-8;

/// Block convention: entry (i q + k, j q + l) = L(i, j) R(k, l), 0-based.
Matrix kron_product(const Matrix& l, const Matrix& r);

Matrix evaluate_binomial(const KroneckerBinomial& binomial);

/// Van Loan-Pitsianis rearrangement of a pq x pq matrix into p^2 x q^2.
/// Row i + j p holds the column-stacked q x q block X_ij, so
/// rearrange(L (x) R) = vec(L) vec(R)^T.
Matrix rearrange(const Matrix& x, std::size_t p, std::size_t q);

/// Numeric Kronecker rank: count of singular values of rearrange(x) above
/// tol * sigma_1 (0 for the zero matrix).
KronRankReport kron_rank(const Matrix& x, std::size_t p, std::size_t q, double tol = kDefaultKronRankTol);

struct PencilSpectrum {
    std::vector<Scalar> eigenvalues;
    Matrix eigenvectors;
    SpectrumReport report;
};

/// Spectrum of the pencil (a, b) as the eigendecomposition of b^{-1} a.
/// Throws SingularMatrix when b fails the invertibility gate.
PencilSpectrum pencil_spectrum(const Matrix& a, const Matrix& b, double gap_tol = kDefaultGapTol);

/// Coefficients M_0 .. M_{q-1} of adj(lambda c + d) = sum_j lambda^j M_j,
/// recovered by interpolation at scaled roots of unity.
std::vector<Matrix> adjugate_poly(const Matrix& c, const Matrix& d);

enum class InverseBranch {
    Auto,   // p terms when p <= q, q terms otherwise
    PTerms, // spectral projectors of the pencil
    QTerms, // adjugate polynomial coefficients
};

/// What binomial_inverse does when rank(X) is not 2.
enum class RankCheck { Ignore, Warn, Reject };

struct InverseOptions {
    InverseBranch branch = InverseBranch::Auto;
    double gap_tol = kDefaultGapTol;
    double tol_recon = kDefaultReconstructionTol;
    RankCheck rank_check = RankCheck::Warn;
    double rank_tol = kDefaultKronRankTol;
};

struct BinomialInverse {
    KronSumDecomposition decomposition;
    InverseBranch branch_used = InverseBranch::PTerms;
    /// (A, C) and (B, D) were exchanged because only A was invertible.
    bool swapped = false;
    /// |X * reconstruct - I|_F
    double residual = 0.0;
    /// 2-norm condition number of X.
    double condition = 0.0;
    std::size_t binomial_rank = 0;
    std::vector<std::string> warnings;
};

/// Reason the binomial cannot be inverted directly, or nullopt when
/// binomial_inverse's preconditions hold.
std::optional<std::string> inverse_precondition_failure(const KroneckerBinomial& binomial,
                                                        double gap_tol = kDefaultGapTol);

/// X^{-1} as a sum of at most min(p, q) Kronecker products.
///
/// With M = B^{-1} A = S diag(lambda) S^{-1}:
///   p-term branch: L_i = S E_ii S^{-1} B^{-1},            R_i = (lambda_i C + D)^{-1}
///   q-term branch: L_j = S diag(lambda_i^j / d_i) S^{-1} B^{-1}, R_j = M_j
/// where d_i = det(lambda_i C + D) and M_j come from adjugate_poly.
///
/// Throws PreconditionError when B (and A) is singular, the pencil is not
/// simple, or some lambda_i C + D is singular. Throws NumericError when the
/// reconstruction residual exceeds tol_recon * cond(X).
BinomialInverse binomial_inverse(const KroneckerBinomial& binomial, const InverseOptions& options = {});

Matrix reconstruct(const KronSumDecomposition& decomposition);

struct PreprocessedBinomial {
    KroneckerBinomial binomial;
    PerturbOutcome evidence;
};

/// Replaces (A, B) by the perturb_pair_inverse result at eps = delta so that
/// B is invertible and B^{-1} A has a simple spectrum; C and D are kept.
PreprocessedBinomial preprocess_binomial(const KroneckerBinomial& binomial, double delta, const PerturbSpec& spec);

} // namespace genspec
