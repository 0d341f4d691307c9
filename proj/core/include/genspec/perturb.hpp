#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <genspec/error.hpp>
#include <genspec/matrix.hpp>
#include <genspec/selfmap.hpp>
#include <genspec/spectra.hpp>

namespace genspec {

/// Budget and search parameters shared by every perturbation routine.
struct PerturbSpec {
    /// Frobenius-norm budget; every returned matrix is strictly within it.
    double eps = 1e-2;
    double gap_tol = kDefaultGapTol;
    std::size_t max_attempts = 64;
    /// Factor applied to the stage-2 ball radius, initially and on each shrink.
    double stage2_shrink = 0.5;
    std::uint64_t seed = 0;
    /// Tuple index searched in stage 2.
    std::size_t designated = 0;
    /// Field of the random perturbation directions. Unset: complex if any
    /// input is complex, real otherwise.
    std::optional<Field> field;

    /// Throws PreconditionError unless eps > 0, gap_tol > 0,
    /// max_attempts >= 1 and stage2_shrink lies in (0, 1).
    void validate() const;
};

/// Stage-2 draws per round: the stage-1 intermediate itself, then random
/// points in balls whose radius shrinks by stage2_shrink after each miss.
inline constexpr std::size_t kStage2DrawsPerRound = 4;

struct SinglePerturbation {
    Matrix matrix;
    SpectrumReport report;
    /// 1 means the input was accepted unchanged.
    std::size_t attempts = 0;
    double delta = 0.0;
};

struct Stage1Record {
    std::size_t index = 0;
    double budget = 0.0;
    std::size_t attempts = 0;
    double delta = 0.0;
    /// The certified intermediate; empty when the search was exhausted.
    std::optional<Matrix> result;
};

struct Stage2Attempt {
    enum class Status { Accepted, OutsideBudget, NotGeneric, ProductNotSimple };

    std::size_t attempt = 0;
    double radius = 0.0;
    /// Frobenius distance from the stage-1 intermediate.
    double step = 0.0;
    Status status = Status::Accepted;
};

std::string_view to_string(Stage2Attempt::Status status) noexcept;

/// One stage-1 draw of every matrix followed by a short stage-2 ball search.
struct PerturbRound {
    std::size_t round = 0;
    std::vector<Stage1Record> stage1;
    double initial_radius = 0.0;
    std::vector<Stage2Attempt> stage2;
};

struct PerturbTrace {
    std::size_t designated = 0;
    std::vector<PerturbRound> rounds;
};

struct PerturbOutcome {
    std::vector<Matrix> perturbed;
    /// |A_i - A_i,eps|_F
    std::vector<double> deltas;
    std::vector<SelfMap> maps;
    /// f_1(A_1,eps) ... f_k(A_k,eps)
    Matrix product;
    SpectrumReport product_report;
    std::vector<SpectrumReport> per_matrix_reports;
    /// Stage-2 draws consumed across all rounds; 1 means the first stage-1
    /// matrices already worked.
    std::size_t attempts_used = 0;
    PerturbTrace trace;
};

/// The randomized search ran out of attempts. The trace shows how far it got.
class AttemptsExhausted : public Error {
public:
    AttemptsExhausted(const std::string& what, PerturbTrace trace) : Error(what), trace_(std::move(trace)) {}
    const PerturbTrace& trace() const noexcept { return trace_; }

private:
    PerturbTrace trace_;
};

/// Nearby simple, invertible matrix: tries `a` itself, then
/// a + (eps * u / |G|_F) G for Gaussian G and u in (0, 1).
SinglePerturbation perturb_single(const Matrix& a, const PerturbSpec& spec);

/// Perturbs (a, b) within eps so both are simple and invertible and
/// f(A_eps) g(B_eps) has a simple spectrum.
///
/// Stage 1 certifies B_eps within eps and an intermediate A~ within eps/2.
/// Stage 2 draws A_eps from the Frobenius ball around A~ of radius
/// r < eps/2 (bounded by A~'s safe radius) until the product is simple.
/// When a round's stage-2 draws are used up, stage 1 is redrawn from fresh
/// sub-streams; spec.max_attempts caps the stage-2 draws over all rounds.
PerturbOutcome perturb_pair(const Matrix& a, const Matrix& b, const SelfMap& f, const SelfMap& g,
                            const PerturbSpec& spec);

/// perturb_pair with f = identity, g = inverse: certifies A_eps B_eps^{-1}.
PerturbOutcome perturb_pair_inverse(const Matrix& a, const Matrix& b, const PerturbSpec& spec);

/// k-tuple generalization. Stage 1 certifies the designated matrix within
/// eps/2 and the others within eps; stage 2 searches only the designated
/// index. For k = 2 and designated = 0 this is exactly perturb_pair.
PerturbOutcome perturb_tuple(const std::vector<Matrix>& as, const std::vector<SelfMap>& fs,
                             const PerturbSpec& spec);

} // namespace genspec
