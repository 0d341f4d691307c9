#include <genspec/selftest.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include <genspec/kron.hpp>
#include <genspec/perturb.hpp>
#include <genspec/random.hpp>
#include <genspec/spectra.hpp>

namespace genspec::selftest {

namespace {

constexpr std::size_t kMaxFactorOrder = 6;

// Times `body` and fills in name and seconds; the body records cases,
// failures and detail, and passed defaults to failures == 0.
SuiteResult timed(const std::string& name, const std::function<void(SuiteResult&)>& body) {
    SuiteResult result;
    result.name = name;
    const auto start = std::chrono::steady_clock::now();
    body(result);
    if (result.detail.empty()) result.detail = std::to_string(result.cases) + " cases passed";
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

void note_failure(SuiteResult& result, const std::string& what) {
    ++result.failures;
    result.passed = false;
    if (result.detail.find("first failure") == std::string::npos) {
        if (!result.detail.empty()) result.detail += "; ";
        result.detail += "first failure: " + what;
    }
}

std::string fmt(double value) {
    std::ostringstream out;
    out.precision(4);
    out << value;
    return out.str();
}

Matrix jordan_block(std::size_t n) {
    DenseValues values = DenseValues::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i + 1 < static_cast<Eigen::Index>(n); ++i) values(i, i + 1) = 1.0;
    return Matrix(std::move(values), Field::Real);
}

// Independent re-check of a tuple outcome: deltas recomputed against the
// inputs, each perturbed matrix generic, the product rebuilt and simple.
std::optional<std::string> recertify(const std::vector<Matrix>& inputs, const PerturbOutcome& outcome,
                                     const PerturbSpec& spec) {
    if (outcome.perturbed.size() != inputs.size()) return "wrong tuple length";
    Matrix product = apply_selfmap(outcome.maps.front(), outcome.perturbed.front());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const double delta = frobenius_norm(inputs[i] - outcome.perturbed[i]);
        if (!(delta < spec.eps)) return "delta " + fmt(delta) + " not below eps " + fmt(spec.eps);
        if (!is_generic(simplicity_report(outcome.perturbed[i], spec.gap_tol))) return "perturbed matrix not generic";
        if (i > 0) product = multiply(product, apply_selfmap(outcome.maps[i], outcome.perturbed[i]));
    }
    if (!simplicity_report(product, spec.gap_tol).is_simple) return "product spectrum not simple";
    return std::nullopt;
}

std::size_t clamp_order(std::size_t nmax) { return std::min(nmax, kMaxFactorOrder); }

} // namespace

Json to_json(const SuiteResult& result) {
    Json doc;
    doc["name"] = result.name;
    doc["passed"] = result.passed;
    doc["cases"] = result.cases;
    doc["failures"] = result.failures;
    doc["detail"] = result.detail;
    return doc;
}

SuiteResult density(const SuiteOptions& options) {
    return timed("density", [&](SuiteResult& result) {
        constexpr double kGapTol = 1e-10;
        constexpr double kRequiredRate = 0.999;
        double worst_rate = 1.0;
        for (std::size_t n = 2; n <= options.nmax; ++n) {
            std::size_t generic = 0;
            for (std::size_t s = 0; s < options.trials; ++s) {
                RandomSource rng(RandomSource::derive(options.seed, {10, n, s}));
                if (is_generic(simplicity_report(sample_gaussian(n, Field::Complex, rng), kGapTol))) ++generic;
            }
            result.cases += options.trials;
            if (options.trials == 0) continue;
            const double rate = static_cast<double>(generic) / static_cast<double>(options.trials);
            worst_rate = std::min(worst_rate, rate);
            if (rate < kRequiredRate) note_failure(result, "n=" + std::to_string(n) + " rate " + fmt(rate));
        }
        result.detail = "worst per-order rate " + fmt(worst_rate) + (result.detail.empty() ? "" : "; " + result.detail);
    });
}

SuiteResult openness(const SuiteOptions& options) {
    return timed("openness", [&](SuiteResult& result) {
        for (std::size_t n = 2; n <= options.nmax; ++n) {
            for (std::size_t s = 0; s < options.trials; ++s) {
                RandomSource rng(RandomSource::derive(options.seed, {20, n, s}));
                Matrix a = sample_gaussian(n, Field::Complex, rng);
                SpectrumReport report = simplicity_report(a);
                while (!is_generic(report)) {
                    a = sample_gaussian(n, Field::Complex, rng);
                    report = simplicity_report(a);
                }
                ++result.cases;
                if (!certify_openness(a, report, options.trials, rng))
                    note_failure(result, "n=" + std::to_string(n) + " sample " + std::to_string(s));
            }
        }
        if (result.passed) result.detail = std::to_string(result.cases) + " certified matrices retained simplicity";
    });
}

SuiteResult pair_search(const SuiteOptions& options) {
    return timed("pair_search", [&](SuiteResult& result) {
        const double epsilons[] = {1e-1, 1e-3, 1e-6};
        const char* kinds[] = {"gaussian", "identity", "zero_a", "zero_b", "jordan"};
        std::size_t most_attempts = 0;
        for (double eps : epsilons) {
            for (std::size_t n = 2; n <= options.nmax; ++n) {
                for (std::size_t kind = 0; kind < std::size(kinds); ++kind) {
                    for (std::size_t s = 0; s < options.trials; ++s) {
                        RandomSource rng(RandomSource::derive(options.seed, {30, n, kind, s}));
                        Matrix a = sample_gaussian(n, Field::Complex, rng);
                        Matrix b = sample_gaussian(n, Field::Complex, rng);
                        switch (kind) {
                        case 1: a = b = Matrix::identity(n); break;
                        case 2: a = Matrix::zeros(n, n); break;
                        case 3: b = Matrix::zeros(n, n); break;
                        case 4: a = b = jordan_block(n); break;
                        default: break;
                        }
                        PerturbSpec spec;
                        spec.eps = eps;
                        spec.max_attempts = 64;
                        spec.seed = RandomSource::derive(options.seed, {31, n, kind, s});
                        ++result.cases;
                        const std::string label = std::string(kinds[kind]) + " n=" + std::to_string(n) +
                                                  " eps=" + fmt(eps) + " sample " + std::to_string(s);
                        try {
                            const PerturbOutcome outcome = perturb_pair_inverse(a, b, spec);
                            most_attempts = std::max(most_attempts, outcome.attempts_used);
                            if (auto why = recertify({a, b}, outcome, spec)) note_failure(result, label + ": " + *why);
                        } catch (const Error& e) {
                            note_failure(result, label + ": " + e.what());
                        }
                    }
                }
            }
        }
        const std::string summary = "max attempts used " + std::to_string(most_attempts);
        result.detail = result.detail.empty() ? summary : summary + "; " + result.detail;
    });
}

SuiteResult triple_search(const SuiteOptions& options) {
    return timed("triple_search", [&](SuiteResult& result) {
        const std::vector<SelfMap> maps = {SelfMap::transpose(), SelfMap::inverse(), SelfMap::identity()};
        for (std::size_t n : {std::size_t{3}, std::size_t{5}}) {
            if (n > options.nmax) continue;
            for (std::size_t s = 0; s < options.trials; ++s) {
                RandomSource rng(RandomSource::derive(options.seed, {40, n, s}));
                std::vector<Matrix> inputs;
                for (int i = 0; i < 3; ++i) inputs.push_back(sample_gaussian(n, Field::Complex, rng));
                PerturbSpec spec;
                spec.eps = 1e-2;
                spec.seed = RandomSource::derive(options.seed, {41, n, s});
                ++result.cases;
                const std::string label = "n=" + std::to_string(n) + " sample " + std::to_string(s);
                try {
                    const PerturbOutcome outcome = perturb_tuple(inputs, maps, spec);
                    if (auto why = recertify(inputs, outcome, spec)) note_failure(result, label + ": " + *why);
                } catch (const Error& e) {
                    note_failure(result, label + ": " + e.what());
                }
            }
        }
    });
}

SuiteResult kron_inverse_bound(const SuiteOptions& options) {
    return timed("kron_inverse_bound", [&](SuiteResult& result) {
        constexpr double kRankTol = 1e-8;
        constexpr double kResidualFactor = 1e-8;
        double worst_ratio = 0.0;
        const std::size_t top = clamp_order(options.nmax);
        for (std::size_t p = 2; p <= top; ++p) {
            for (std::size_t q = 2; q <= top; ++q) {
                for (std::size_t s = 0; s < options.trials; ++s) {
                    RandomSource rng(RandomSource::derive(options.seed, {50, p, q, s}));
                    KroneckerBinomial binomial{Matrix::identity(p), Matrix::identity(p), Matrix::identity(q),
                                               Matrix::identity(q)};
                    do {
                        binomial = {sample_gaussian(p, Field::Complex, rng), sample_gaussian(p, Field::Complex, rng),
                                    sample_gaussian(q, Field::Complex, rng), sample_gaussian(q, Field::Complex, rng)};
                    } while (inverse_precondition_failure(binomial));
                    ++result.cases;
                    const std::string label = "p=" + std::to_string(p) + " q=" + std::to_string(q) + " sample " +
                                              std::to_string(s);
                    try {
                        const BinomialInverse inv = binomial_inverse(binomial);
                        const std::size_t bound = std::min(p, q);
                        const Matrix x = evaluate_binomial(binomial);
                        const double kappa = condition_number(x);
                        const double residual =
                            frobenius_norm(multiply(x, reconstruct(inv.decomposition)) - Matrix::identity(p * q));
                        worst_ratio = std::max(worst_ratio, residual / (kResidualFactor * kappa));
                        const std::size_t rank = kron_rank(inverse(x), p, q, kRankTol).numeric_rank;
                        if (inv.decomposition.terms.size() > bound)
                            note_failure(result, label + ": " + std::to_string(inv.decomposition.terms.size()) + " terms");
                        else if (residual > kResidualFactor * kappa)
                            note_failure(result, label + ": residual " + fmt(residual));
                        else if (rank > bound)
                            note_failure(result, label + ": kron rank of inverse " + std::to_string(rank));
                    } catch (const Error& e) {
                        note_failure(result, label + ": " + e.what());
                    }
                }
            }
        }
        const std::string summary = "worst residual / (1e-8 cond) " + fmt(worst_ratio);
        result.detail = result.detail.empty() ? summary : summary + "; " + result.detail;
    });
}

SuiteResult degenerate_pipeline(const SuiteOptions& options) {
    return timed("degenerate_pipeline", [&](SuiteResult& result) {
        constexpr double kDelta = 1e-4;
        constexpr std::size_t kQ = 3;
        const std::size_t top = clamp_order(options.nmax);
        for (std::size_t s = 0; s < options.trials; ++s) {
            for (std::size_t p = 2; p <= top; ++p) {
                RandomSource rng(RandomSource::derive(options.seed, {60, p, s}));
                const KroneckerBinomial binomial{Matrix::identity(p), Matrix::identity(p),
                                                 sample_gaussian(kQ, Field::Complex, rng),
                                                 sample_gaussian(kQ, Field::Complex, rng)};
                PerturbSpec spec;
                spec.seed = RandomSource::derive(options.seed, {61, p, s});
                ++result.cases;
                const std::string label = "p=" + std::to_string(p) + " seed " + std::to_string(s);
                try {
                    const PreprocessedBinomial pre = preprocess_binomial(binomial, kDelta, spec);
                    const BinomialInverse inv = binomial_inverse(pre.binomial);
                    const Matrix x = evaluate_binomial(binomial);
                    const Matrix x_pert = evaluate_binomial(pre.binomial);
                    const double residual =
                        frobenius_norm(multiply(x_pert, reconstruct(inv.decomposition)) - Matrix::identity(p * kQ));
                    const double distance = frobenius_norm(x - x_pert);
                    const double allowed = kDelta * (frobenius_norm(binomial.c) + frobenius_norm(binomial.d)) *
                                           std::sqrt(static_cast<double>(p));
                    if (residual > 1e-8 * condition_number(x_pert))
                        note_failure(result, label + ": residual " + fmt(residual));
                    else if (!(distance <= allowed))
                        note_failure(result, label + ": distance " + fmt(distance) + " > " + fmt(allowed));
                } catch (const Error& e) {
                    note_failure(result, label + ": " + e.what());
                }
            }
        }
    });
}

SuiteResult small_oracles(const SuiteOptions& options) {
    return timed("small_oracles", [&](SuiteResult& result) {
        double worst = 0.0;
        for (std::size_t s = 0; s < options.trials; ++s) {
            RandomSource rng(RandomSource::derive(options.seed, {70, s}));
            const Matrix a = sample_gaussian(2, Field::Complex, rng);
            const Scalar closed = a(0, 0) + a(1, 1);
            const Scalar expected = closed * closed - 4.0 * (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0));
            const double relative = std::abs(char_poly_discriminant(a) - expected) / std::max(1.0, std::abs(expected));
            worst = std::max(worst, relative);
            ++result.cases;
            if (relative > 1e-9) note_failure(result, "sample " + std::to_string(s) + " relative " + fmt(relative));
        }
        if (options.trials > 0) {
            const KroneckerBinomial binomial{Matrix::diagonal({1.0, 2.0}), Matrix::identity(2), Matrix::identity(2),
                                             Matrix::diagonal({1.0, 3.0})};
            ++result.cases;
            try {
                const Matrix rec = reconstruct(binomial_inverse(binomial).decomposition);
                const double err = frobenius_norm(rec - Matrix::diagonal({0.5, 0.25, 1.0 / 3.0, 0.2}));
                if (err > 1e-12) note_failure(result, "diagonal binomial error " + fmt(err));
            } catch (const Error& e) {
                note_failure(result, std::string("diagonal binomial: ") + e.what());
            }
        }
        const std::string summary = "worst discriminant relative error " + fmt(worst);
        result.detail = result.detail.empty() ? summary : summary + "; " + result.detail;
    });
}

SuiteResult determinism(const SuiteOptions& options) {
    return timed("determinism", [&](SuiteResult& result) {
        if (options.trials == 0) return;
        const std::size_t n = std::min<std::size_t>(4, std::max<std::size_t>(2, options.nmax));
        auto run = [&] {
            RandomSource rng(RandomSource::derive(options.seed, {80}));
            const Matrix a = sample_gaussian(n, Field::Complex, rng);
            PerturbSpec spec;
            spec.seed = options.seed;
            Json doc;
            doc["pair"] = to_json(perturb_pair_inverse(Matrix::identity(n), Matrix::identity(n), spec));
            doc["tuple"] = to_json(perturb_tuple({a, a, a},
                                                 {SelfMap::transpose(), SelfMap::inverse(), SelfMap::identity()}, spec));
            const KroneckerBinomial degenerate{Matrix::identity(2), Matrix::identity(2), a, Matrix::identity(n)};
            const PreprocessedBinomial pre = preprocess_binomial(degenerate, 1e-4, spec);
            doc["kron"] = to_json(binomial_inverse(pre.binomial).decomposition);
            return dump(doc);
        };
        try {
            const std::string first = run();
            for (int repeat = 0; repeat < 2; ++repeat) {
                ++result.cases;
                if (run() != first) note_failure(result, "run " + std::to_string(repeat + 2) + " differs");
            }
        } catch (const Error& e) {
            note_failure(result, e.what());
        }
    });
}

std::vector<SuiteResult> run_all(const SuiteOptions& options) {
    return {density(options),     openness(options),           pair_search(options),   triple_search(options),
            kron_inverse_bound(options), degenerate_pipeline(options), small_oracles(options), determinism(options)};
}

} // namespace genspec::selftest
