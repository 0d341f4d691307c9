#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <genspec/kron.hpp>
#include <genspec/matrix_io.hpp>
#include <genspec/perturb.hpp>
#include <genspec/selftest.hpp>
#include <genspec/serialize.hpp>
#include <genspec/spectra.hpp>

#ifndef GENSPEC_SELFTEST_INJECT_FAILURE
#define GENSPEC_SELFTEST_INJECT_FAILURE 0
#endif

namespace {

using namespace genspec;

enum ExitCode : int { kOk = 0, kInput = 2, kNumeric = 3, kExhausted = 4, kPrecondition = 5 };

struct Config {
    double eps = 1e-2;
    double delta = 1e-4;
    double gap_tol = kDefaultGapTol;
    std::optional<double> tol;
    std::uint64_t seed = 0;
    std::size_t max_attempts = 64;
    std::string field = "complex";
    std::string format = "mm";
    std::string out;

    std::vector<std::string> inputs;
    std::string map_f = "identity";
    std::string map_g = "inverse";
    std::string maps;
    std::optional<std::size_t> p;
    std::optional<std::size_t> q;
    bool auto_preprocess = false;
    std::size_t trials = 20;
    std::size_t nmax = 6;
};

// A malformed command line is an input error, not a precondition failure.
SelfMap parse_map(const std::string& name) {
    try {
        return SelfMap::parse(name);
    } catch (const PreconditionError& e) {
        throw InputError(e.what());
    }
}

PerturbSpec perturb_spec(const Config& config) {
    PerturbSpec spec;
    spec.eps = config.eps;
    spec.gap_tol = config.gap_tol;
    spec.max_attempts = config.max_attempts;
    spec.seed = config.seed;
    spec.field = parse_field(config.field);
    try {
        spec.validate();
    } catch (const PreconditionError& e) {
        throw InputError(e.what());
    }
    return spec;
}

std::vector<Matrix> read_inputs(const Config& config) {
    const MatrixFormat format = parse_format(config.format);
    std::vector<Matrix> matrices;
    for (const auto& path : config.inputs) matrices.push_back(read_matrix(path, format));
    return matrices;
}

void emit(const Config& config, const Json& doc) {
    const std::string text = dump(doc);
    if (config.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(config.out, std::ios::binary);
    if (!file) throw InputError("cannot write '" + config.out + "'");
    file << text;
}

int cmd_spectrum(const Config& config) {
    const Matrix a = read_inputs(config).front();
    emit(config, to_json(simplicity_report(a, config.gap_tol)));
    return kOk;
}

int cmd_perturb(const Config& config) {
    const auto matrices = read_inputs(config);
    const PerturbOutcome outcome =
        perturb_pair(matrices[0], matrices[1], parse_map(config.map_f), parse_map(config.map_g), perturb_spec(config));
    emit(config, to_json(outcome));
    return kOk;
}

int cmd_perturb_tuple(const Config& config) {
    std::vector<SelfMap> maps;
    std::stringstream list(config.maps);
    for (std::string name; std::getline(list, name, ',');) maps.push_back(parse_map(name));
    if (maps.size() != config.inputs.size())
        throw InputError("--maps lists " + std::to_string(maps.size()) + " maps for " +
                         std::to_string(config.inputs.size()) + " matrices");
    emit(config, to_json(perturb_tuple(read_inputs(config), maps, perturb_spec(config))));
    return kOk;
}

void check_order(const Matrix& m, std::optional<std::size_t> expected, const char* name) {
    if (!m.is_square()) throw DimensionError(std::string("factor matrices must be square (") + name + ")");
    if (expected && m.rows() != *expected)
        throw DimensionError(std::string("factor order ") + std::to_string(m.rows()) + " does not match --" + name +
                             " " + std::to_string(*expected));
}

int cmd_kron_inverse(const Config& config) {
    const auto m = read_inputs(config);
    for (std::size_t i = 0; i < 2; ++i) check_order(m[i], config.p, "p");
    for (std::size_t i = 2; i < 4; ++i) check_order(m[i], config.q, "q");
    KroneckerBinomial binomial{m[0], m[1], m[2], m[3]};
    binomial.validate();

    InverseOptions options;
    options.gap_tol = config.gap_tol;
    if (config.tol) options.tol_recon = *config.tol;

    Json evidence = nullptr;
    if (config.auto_preprocess) {
        if (auto reason = inverse_precondition_failure(binomial, config.gap_tol)) {
            std::cerr << "genspec: preprocessing binomial: " << *reason << "\n";
            PerturbSpec spec = perturb_spec(config);
            const PreprocessedBinomial pre = preprocess_binomial(binomial, config.delta, spec);
            evidence = Json::object();
            evidence["reason"] = *reason;
            evidence["delta"] = to_json(config.delta);
            evidence["distance"] = to_json(frobenius_norm(evaluate_binomial(binomial) - evaluate_binomial(pre.binomial)));
            evidence["perturbation"] = to_json(pre.evidence);
            binomial = pre.binomial;
        }
    }

    const BinomialInverse inv = binomial_inverse(binomial, options);
    for (const auto& warning : inv.warnings) std::cerr << "genspec: warning: " << warning << "\n";

    Json doc;
    doc["decomposition"] = to_json(inv.decomposition);
    doc["branch"] = inv.branch_used == InverseBranch::PTerms ? "p_terms" : "q_terms";
    doc["swapped"] = inv.swapped;
    doc["residual"] = to_json(inv.residual);
    doc["condition"] = to_json(inv.condition);
    doc["binomial_kron_rank"] = inv.binomial_rank;
    doc["kron_rank"] = to_json(kron_rank(reconstruct(inv.decomposition), binomial.p(), binomial.q(),
                                         kDefaultKronRankTol));
    doc["warnings"] = inv.warnings;
    doc["preprocessed"] = !evidence.is_null();
    doc["preprocess_evidence"] = std::move(evidence);
    emit(config, doc);
    return kOk;
}

int cmd_kron_rank(const Config& config) {
    const Matrix x = read_inputs(config).front();
    if (!config.p || !config.q) throw InputError("kron-rank requires --p and --q");
    if (x.rows() != *config.p * *config.q || x.cols() != *config.p * *config.q)
        throw DimensionError("matrix is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                             ", expected p*q = " + std::to_string(*config.p * *config.q));
    emit(config, to_json(kron_rank(x, *config.p, *config.q, config.tol.value_or(kDefaultKronRankTol))));
    return kOk;
}

int cmd_selftest(const Config& config) {
    selftest::SuiteOptions options;
    options.trials = config.trials;
    options.nmax = config.nmax;
    options.seed = config.seed;
    if (options.nmax < 2) throw InputError("--nmax must be at least 2");

    std::vector<selftest::SuiteResult> results = selftest::run_all(options);
    if (GENSPEC_SELFTEST_INJECT_FAILURE) {
        selftest::SuiteResult injected;
        injected.name = "injected_failure";
        injected.passed = false;
        injected.failures = 1;
        injected.detail = "failure injected at build time";
        results.push_back(injected);
    }

    bool passed = true;
    Json suites = Json::array();
    for (const auto& result : results) {
        passed = passed && result.passed;
        suites.push_back(selftest::to_json(result));
        std::cerr << (result.passed ? "PASS " : "FAIL ") << result.name << ": " << result.detail << "\n";
    }
    Json doc;
    doc["passed"] = passed;
    doc["trials"] = options.trials;
    doc["nmax"] = options.nmax;
    doc["seed"] = options.seed;
    doc["suites"] = std::move(suites);
    emit(config, doc);
    return passed ? kOk : 1;
}

int report(int code, const std::exception& e) {
    std::cerr << "genspec: error: " << e.what() << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    Config config;
    CLI::App app{"Simple-spectrum certificates, perturbation searches and Kronecker binomial inverses"};
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--eps", config.eps, "Frobenius perturbation budget")->capture_default_str();
    app.add_option("--delta", config.delta, "Preprocessing budget for kron-inverse")->capture_default_str();
    app.add_option("--gap-tol", config.gap_tol, "Relative eigenvalue gap threshold")->capture_default_str();
    app.add_option("--tol", config.tol, "kron-rank: singular value cutoff; kron-inverse: reconstruction tolerance");
    app.add_option("--seed", config.seed, "Seed for every random draw")->capture_default_str();
    app.add_option("--max-attempts", config.max_attempts, "Search attempt budget")->capture_default_str();
    app.add_option("--field", config.field, "Field of perturbation directions")
        ->check(CLI::IsMember({"real", "complex"}))
        ->capture_default_str();
    app.add_option("--format", config.format, "Input matrix format")
        ->check(CLI::IsMember({"mm", "json"}))
        ->capture_default_str();
    app.add_option("--out", config.out, "Write the JSON report here instead of stdout");

    auto* spectrum = app.add_subcommand("spectrum", "Simplicity report of one matrix");
    spectrum->add_option("matrix", config.inputs, "Matrix file")->required()->expected(1);

    auto* perturb = app.add_subcommand("perturb", "Perturb a pair so f(A) g(B) has a simple spectrum");
    perturb->add_option("files", config.inputs, "A and B")->required()->expected(2);
    perturb->add_option("--map-f", config.map_f, "Map applied to A")->capture_default_str();
    perturb->add_option("--map-g", config.map_g, "Map applied to B")->capture_default_str();

    auto* tuple = app.add_subcommand("perturb-tuple", "Perturb k matrices so f_1(A_1)...f_k(A_k) is simple");
    tuple->add_option("files", config.inputs, "Matrix files")->required()->expected(1, -1);
    tuple->add_option("--maps", config.maps, "Comma-separated maps, one per matrix")->required();

    auto* kinv = app.add_subcommand("kron-inverse", "Inverse of A(x)C + B(x)D as a short Kronecker sum");
    kinv->add_option("files", config.inputs, "A B C D")->required()->expected(4);
    kinv->add_option("--p", config.p, "Order of A and B");
    kinv->add_option("--q", config.q, "Order of C and D");
    kinv->add_flag("--auto-preprocess", config.auto_preprocess, "Perturb degenerate inputs within --delta");

    auto* krank = app.add_subcommand("kron-rank", "Numeric Kronecker rank of a pq x pq matrix");
    krank->add_option("matrix", config.inputs, "Matrix file")->required()->expected(1);
    krank->add_option("--p", config.p, "Left factor order")->required();
    krank->add_option("--q", config.q, "Right factor order")->required();

    auto* self = app.add_subcommand("selftest", "Run the property suites");
    self->add_option("--trials", config.trials, "Samples per configuration")->capture_default_str();
    self->add_option("--nmax", config.nmax, "Largest matrix order")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInput;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(config);
        if (perturb->parsed()) return cmd_perturb(config);
        if (tuple->parsed()) return cmd_perturb_tuple(config);
        if (kinv->parsed()) return cmd_kron_inverse(config);
        if (krank->parsed()) return cmd_kron_rank(config);
        if (self->parsed()) return cmd_selftest(config);
    } catch (const AttemptsExhausted& e) {
        Json doc;
        doc["error"] = e.what();
        doc["trace"] = to_json(e.trace());
        try {
            emit(config, doc);
        } catch (const std::exception&) {
        }
        return report(kExhausted, e);
    } catch (const InputError& e) {
        return report(kInput, e);
    } catch (const DimensionError& e) {
        return report(kInput, e);
    } catch (const PreconditionError& e) {
        return report(kPrecondition, e);
    } catch (const SingularMatrix& e) {
        return report(kNumeric, e);
    } catch (const std::exception& e) {
        return report(kNumeric, e);
    }
    return kInput;
}
