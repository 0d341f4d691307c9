#include <genspec/perturb.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include <genspec/random.hpp>

namespace genspec {

namespace {

constexpr std::uint64_t kStage1Stream = 1;
constexpr std::uint64_t kStage2Stream = 2;

// Offset of size `step` (Frobenius) in a random Gaussian direction.
Matrix random_offset(std::size_t n, Field field, double step, RandomSource& rng) {
    Matrix direction = sample_gaussian(n, field, rng);
    const double norm = frobenius_norm(direction);
    if (norm > 0.0) direction *= step / norm;
    return direction;
}

struct SingleSearch {
    std::optional<SinglePerturbation> found;
    std::size_t attempts = 0;
};

// Attempt 1 is the input itself; attempt j >= 2 draws from its own
// sub-stream so that attempts are independent of one another.
SingleSearch search_single(const Matrix& a, double budget, Field field, std::uint64_t seed,
                           const PerturbSpec& spec) {
    const std::size_t n = a.order();
    SingleSearch search;
    for (std::size_t attempt = 1; attempt <= spec.max_attempts; ++attempt) {
        search.attempts = attempt;
        if (attempt == 1) {
            auto report = simplicity_report(a, spec.gap_tol);
            if (is_generic(report)) {
                search.found = SinglePerturbation{a, std::move(report), attempt, 0.0};
                return search;
            }
            continue;
        }
        RandomSource rng(RandomSource::derive(seed, {attempt}));
        const double u = rng.uniform_open();
        Matrix candidate = a + random_offset(n, field, budget * u, rng);
        const double delta = frobenius_norm(a - candidate);
        if (!(delta < budget)) continue;
        auto report = simplicity_report(candidate, spec.gap_tol);
        if (is_generic(report)) {
            search.found = SinglePerturbation{std::move(candidate), std::move(report), attempt, delta};
            return search;
        }
    }
    return search;
}

Matrix ordered_product(const std::vector<Matrix>& mapped) {
    Matrix product = mapped.front();
    for (std::size_t i = 1; i < mapped.size(); ++i) product = multiply(product, mapped[i]);
    return product;
}

} // namespace

void PerturbSpec::validate() const {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw PreconditionError("perturbation budget eps must be positive");
    if (!(gap_tol > 0.0)) throw PreconditionError("gap_tol must be positive");
    if (max_attempts < 1) throw PreconditionError("max_attempts must be at least 1");
    if (!(stage2_shrink > 0.0 && stage2_shrink < 1.0)) throw PreconditionError("stage2_shrink must lie in (0, 1)");
}

std::string_view to_string(Stage2Attempt::Status status) noexcept {
    switch (status) {
    case Stage2Attempt::Status::Accepted: return "accepted";
    case Stage2Attempt::Status::OutsideBudget: return "outside_budget";
    case Stage2Attempt::Status::NotGeneric: return "not_generic";
    case Stage2Attempt::Status::ProductNotSimple: return "product_not_simple";
    }
    return "unknown";
}

SinglePerturbation perturb_single(const Matrix& a, const PerturbSpec& spec) {
    spec.validate();
    const Field field = spec.field.value_or(a.field());
    auto search = search_single(a, spec.eps, field, spec.seed, spec);
    if (!search.found) {
        PerturbTrace trace;
        trace.rounds.push_back({0, {{0, spec.eps, search.attempts, 0.0, std::nullopt}}, 0.0, {}});
        throw AttemptsExhausted("no simple invertible matrix found within eps after " +
                                    std::to_string(search.attempts) + " attempts",
                                std::move(trace));
    }
    return std::move(*search.found);
}

PerturbOutcome perturb_pair(const Matrix& a, const Matrix& b, const SelfMap& f, const SelfMap& g,
                            const PerturbSpec& spec) {
    return perturb_tuple({a, b}, {f, g}, spec);
}

PerturbOutcome perturb_pair_inverse(const Matrix& a, const Matrix& b, const PerturbSpec& spec) {
    return perturb_pair(a, b, SelfMap::identity(), SelfMap::inverse(), spec);
}

PerturbOutcome perturb_tuple(const std::vector<Matrix>& as, const std::vector<SelfMap>& fs,
                             const PerturbSpec& spec) {
    spec.validate();
    if (as.empty()) throw DimensionError("perturb_tuple: at least one matrix is required");
    if (as.size() != fs.size())
        throw DimensionError("perturb_tuple: " + std::to_string(as.size()) + " matrices but " +
                             std::to_string(fs.size()) + " maps");
    const std::size_t n = as.front().order();
    for (const auto& m : as) {
        if (!m.is_square() || m.rows() != n)
            throw DimensionError("perturb_tuple: all matrices must be square of the same order");
    }
    const std::size_t k = as.size();
    const std::size_t designated = spec.designated;
    if (designated >= k) throw PreconditionError("perturb_tuple: designated index out of range");

    Field field = Field::Real;
    for (const auto& m : as) field = join(field, m.field());
    field = spec.field.value_or(field);

    PerturbOutcome outcome{.perturbed = {},
                           .deltas = {},
                           .maps = fs,
                           .product = as.front(),
                           .product_report = {},
                           .per_matrix_reports = {},
                           .attempts_used = 0,
                           .trace = {}};
    outcome.trace.designated = designated;

    // A single matrix under the identity needs no product search.
    if (k == 1 && fs.front().is_identity()) {
        PerturbSpec single = spec;
        single.field = field;
        auto result = perturb_single(as.front(), single);
        outcome.trace.rounds.push_back({0, {{0, spec.eps, result.attempts, result.delta, result.matrix}}, 0.0, {}});
        outcome.perturbed = {result.matrix};
        outcome.deltas = {result.delta};
        outcome.product = result.matrix;
        outcome.product_report = result.report;
        outcome.per_matrix_reports = {result.report};
        outcome.attempts_used = result.attempts;
        return outcome;
    }

    std::size_t attempt = 0;
    for (std::size_t round = 0; attempt < spec.max_attempts; ++round) {
        PerturbRound& log = outcome.trace.rounds.emplace_back();
        log.round = round;

        // Stage 1: certified simple invertible stand-ins for every matrix.
        std::vector<SinglePerturbation> stage1;
        stage1.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            const double budget = i == designated ? spec.eps / 2.0 : spec.eps;
            const auto seed = round == 0 ? RandomSource::derive(spec.seed, {kStage1Stream, i})
                                         : RandomSource::derive(spec.seed, {kStage1Stream, i, round});
            auto search = search_single(as[i], budget, field, seed, spec);
            if (!search.found) {
                log.stage1.push_back({i, budget, search.attempts, 0.0, std::nullopt});
                throw AttemptsExhausted("stage 1: no simple invertible matrix found near input " +
                                            std::to_string(i) + " after " + std::to_string(search.attempts) +
                                            " attempts",
                                        std::move(outcome.trace));
            }
            log.stage1.push_back({i, budget, search.attempts, search.found->delta, search.found->matrix});
            stage1.push_back(std::move(*search.found));
        }

        std::vector<Matrix> mapped;
        mapped.reserve(k);
        for (std::size_t i = 0; i < k; ++i) mapped.push_back(apply_selfmap(fs[i], stage1[i].matrix));

        // Stage 2: search the ball around the designated intermediate.
        const Matrix& center = stage1[designated].matrix;
        const Matrix& original = as[designated];
        const double safe = stage1[designated].report.safe_radius;
        log.initial_radius = spec.stage2_shrink * std::min(spec.eps / 2.0, safe);

        for (std::size_t draw = 1; draw <= kStage2DrawsPerRound && attempt < spec.max_attempts; ++draw) {
            Stage2Attempt record;
            record.attempt = ++attempt;
            record.radius = log.initial_radius;

            Matrix candidate = center;
            SpectrumReport candidate_report;
            if (draw == 1) {
                candidate_report = stage1[designated].report;
            } else {
                record.radius = log.initial_radius * std::pow(spec.stage2_shrink, static_cast<double>(draw - 2));
                RandomSource rng(RandomSource::derive(spec.seed, {kStage2Stream, attempt}));
                const double u = rng.uniform_open();
                candidate = center + random_offset(n, field, record.radius * u, rng);
                record.step = frobenius_norm(candidate - center);
            }

            const double delta = frobenius_norm(original - candidate);
            const bool inside_ball = draw == 1 || record.step < record.radius;
            if (!inside_ball || !(delta < spec.eps)) {
                record.status = Stage2Attempt::Status::OutsideBudget;
                log.stage2.push_back(record);
                continue;
            }
            if (draw > 1) {
                candidate_report = simplicity_report(candidate, spec.gap_tol);
                if (!is_generic(candidate_report)) {
                    record.status = Stage2Attempt::Status::NotGeneric;
                    log.stage2.push_back(record);
                    continue;
                }
                mapped[designated] = apply_selfmap(fs[designated], candidate);
            }

            Matrix product = ordered_product(mapped);
            auto product_report = simplicity_report(product, spec.gap_tol);
            if (!product_report.is_simple) {
                record.status = Stage2Attempt::Status::ProductNotSimple;
                log.stage2.push_back(record);
                continue;
            }

            record.status = Stage2Attempt::Status::Accepted;
            log.stage2.push_back(record);
            outcome.attempts_used = attempt;
            for (std::size_t i = 0; i < k; ++i) {
                if (i == designated) {
                    outcome.perturbed.push_back(candidate);
                    outcome.deltas.push_back(delta);
                    outcome.per_matrix_reports.push_back(candidate_report);
                } else {
                    outcome.perturbed.push_back(stage1[i].matrix);
                    outcome.deltas.push_back(stage1[i].delta);
                    outcome.per_matrix_reports.push_back(stage1[i].report);
                }
            }
            outcome.product = std::move(product);
            outcome.product_report = std::move(product_report);
            return outcome;
        }
    }

    throw AttemptsExhausted("no simple product found after " + std::to_string(spec.max_attempts) +
                                " stage-2 attempts over " + std::to_string(outcome.trace.rounds.size()) + " rounds",
                            std::move(outcome.trace));
}

} // namespace genspec
