#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <genspec/serialize.hpp>

namespace genspec::selftest {

/// Size of a property-suite run. `trials` is the per-configuration sample
/// count; `nmax` caps matrix orders (and Kronecker factor orders at 6).
struct SuiteOptions {
    std::size_t trials = 20;
    std::size_t nmax = 6;
    std::uint64_t seed = 0;
};

struct SuiteResult {
    std::string name;
    bool passed = true;
    std::size_t cases = 0;
    std::size_t failures = 0;
    double seconds = 0.0;
    /// Human-readable summary: observed rates, worst ratios, first failure.
    std::string detail;
};

Json to_json(const SuiteResult& result);

/// Complex Gaussian samples are simple and invertible at gap_tol 1e-10 in
/// at least 99.9% of cases for each order 2..nmax.
SuiteResult density(const SuiteOptions& options);

/// `trials` certified matrices per order, each surviving `trials` random
/// perturbations at 0.9 of the safe radius.
SuiteResult openness(const SuiteOptions& options);

/// Pair search with maps (identity, inverse) over random and degenerate
/// pairs (I/I, 0/G, G/0, J/J) and eps in {1e-1, 1e-3, 1e-6}; every success
/// is re-certified independently.
SuiteResult pair_search(const SuiteOptions& options);

/// Triples with maps (transpose, inverse, identity) for orders 3 and 5
/// (those not above nmax) at eps 1e-2.
SuiteResult triple_search(const SuiteOptions& options);

/// Inverses of random pencil-simple binomials for p, q in 2..min(6, nmax):
/// at most min(p, q) terms, reconstruction residual within 1e-8 * cond(X),
/// and the Kronecker rank of inv(X) at most min(p, q).
SuiteResult kron_inverse_bound(const SuiteOptions& options);

/// A = B = I binomials: preprocessing at delta 1e-4, then the perturbed
/// inverse reconstructs and stays within the delta-scaled distance of X.
SuiteResult degenerate_pipeline(const SuiteOptions& options);

/// 2x2 discriminant against tr^2 - 4 det on `trials` random matrices, and
/// the diagonal binomial against its elementwise inverse.
SuiteResult small_oracles(const SuiteOptions& options);

/// Repeated library runs with a fixed seed serialize byte-identically.
SuiteResult determinism(const SuiteOptions& options);

/// All suites in order.
std::vector<SuiteResult> run_all(const SuiteOptions& options);

} // namespace genspec::selftest
