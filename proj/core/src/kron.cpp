#include <genspec/kron.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <genspec/error.hpp>
#include <genspec/random.hpp>

namespace genspec {

namespace {

constexpr int kNodeRetries = 32;
constexpr std::size_t kPreprocessRounds = 8;
constexpr std::uint64_t kPreprocessStream = 3;

Field field_of(const KroneckerBinomial& x) {
    return join(join(x.a.field(), x.b.field()), join(x.c.field(), x.d.field()));
}

// Factors arranged so that `b` is the invertible one.
struct Oriented {
    const Matrix* a;
    const Matrix* b;
    const Matrix* c;
    const Matrix* d;
    bool swapped;
};

std::optional<Oriented> orient(const KroneckerBinomial& x) {
    if (passes_invertibility_gate(x.b)) return Oriented{&x.a, &x.b, &x.c, &x.d, false};
    if (passes_invertibility_gate(x.a)) return Oriented{&x.b, &x.a, &x.d, &x.c, true};
    return std::nullopt;
}

const char* kPreprocessHint = "; perturb the binomial first (preprocess_binomial / --auto-preprocess)";

} // namespace

void KroneckerBinomial::validate() const {
    const std::size_t p_ = a.rows();
    const std::size_t q_ = c.rows();
    if (!a.is_square() || !b.is_square() || b.rows() != p_)
        throw DimensionError("binomial: A and B must be square of the same order p");
    if (!c.is_square() || !d.is_square() || d.rows() != q_)
        throw DimensionError("binomial: C and D must be square of the same order q");
}

Matrix kron_product(const Matrix& l, const Matrix& r) {
    const auto lr = static_cast<Eigen::Index>(l.rows());
    const auto lc = static_cast<Eigen::Index>(l.cols());
    const auto rr = static_cast<Eigen::Index>(r.rows());
    const auto rc = static_cast<Eigen::Index>(r.cols());
    DenseValues out(lr * rr, lc * rc);
    for (Eigen::Index i = 0; i < lr; ++i)
        for (Eigen::Index j = 0; j < lc; ++j) out.block(i * rr, j * rc, rr, rc) = l.values()(i, j) * r.values();
    Field field = join(l.field(), r.field());
    if (field == Field::Real) out.imag().setZero();
    return Matrix(std::move(out), field);
}

Matrix evaluate_binomial(const KroneckerBinomial& binomial) {
    binomial.validate();
    return kron_product(binomial.a, binomial.c) + kron_product(binomial.b, binomial.d);
}

Matrix rearrange(const Matrix& x, std::size_t p, std::size_t q) {
    if (p == 0 || q == 0 || x.rows() != p * q || x.cols() != p * q)
        throw DimensionError("rearrange: expected a " + std::to_string(p * q) + "x" + std::to_string(p * q) +
                             " matrix for p=" + std::to_string(p) + ", q=" + std::to_string(q) + ", got " +
                             std::to_string(x.rows()) + "x" + std::to_string(x.cols()));
    const auto pp = static_cast<Eigen::Index>(p);
    const auto qq = static_cast<Eigen::Index>(q);
    DenseValues out(pp * pp, qq * qq);
    for (Eigen::Index j = 0; j < pp; ++j) {
        for (Eigen::Index i = 0; i < pp; ++i) {
            const Eigen::Index row = i + j * pp;
            for (Eigen::Index l = 0; l < qq; ++l)
                for (Eigen::Index k = 0; k < qq; ++k) out(row, k + l * qq) = x.values()(i * qq + k, j * qq + l);
        }
    }
    return Matrix(std::move(out), x.field());
}

KronRankReport kron_rank(const Matrix& x, std::size_t p, std::size_t q, double tol) {
    if (!(tol > 0.0)) throw PreconditionError("kron_rank: tol must be positive");
    KronRankReport report;
    report.tol_used = tol;
    report.singular_values = singular_values(rearrange(x, p, q));
    const double top = report.singular_values.front();
    report.numeric_rank = static_cast<std::size_t>(std::count_if(
        report.singular_values.begin(), report.singular_values.end(), [&](double s) { return s > tol * top; }));
    return report;
}

PencilSpectrum pencil_spectrum(const Matrix& a, const Matrix& b, double gap_tol) {
    if (!a.is_square() || !b.is_square() || a.rows() != b.rows())
        throw DimensionError("pencil_spectrum: a and b must be square of the same order");
    Matrix b_inv = [&] {
        try {
            return inverse(b);
        } catch (const SingularMatrix& e) {
            throw SingularMatrix(std::string("pencil_spectrum: b is singular") + kPreprocessHint, e.sigma_min(),
                                 e.sigma_max());
        }
    }();
    const Matrix m = multiply(b_inv, a);
    auto decomposition = eigendecompose(m);
    return {std::move(decomposition.eigenvalues), std::move(decomposition.eigenvectors),
            simplicity_report(m, gap_tol)};
}

std::vector<Matrix> adjugate_poly(const Matrix& c, const Matrix& d) {
    if (!c.is_square() || !d.is_square() || c.rows() != d.rows())
        throw DimensionError("adjugate_poly: c and d must be square of the same order");
    const std::size_t q = c.rows();
    const Field field = join(c.field(), d.field());
    if (q == 1) return {Matrix::identity(1, field)};

    const double c_norm = frobenius_norm(c);
    const double d_norm = frobenius_norm(d);
    double radius = c_norm > 0.0 ? std::max(1.0, d_norm / c_norm) : std::max(1.0, d_norm);
    const double nudge = 1.0 + std::ldexp(1.0, -20);

    const auto qq = static_cast<Eigen::Index>(q);
    std::vector<Scalar> nodes(q);
    std::vector<DenseValues> adjugates(q);
    bool all_invertible = false;
    for (int retry = 0; retry <= kNodeRetries && !all_invertible; ++retry, radius *= nudge) {
        all_invertible = true;
        for (std::size_t s = 0; s < q; ++s) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(q);
            nodes[s] = std::polar(radius, angle);
            const Matrix node = nodes[s] * c + d;
            if (!passes_invertibility_gate(node)) {
                all_invertible = false;
                break;
            }
            adjugates[s] = determinant(node) * inverse(node).values();
        }
        if (all_invertible) break;
    }
    if (!all_invertible)
        throw NumericError("adjugate_poly: every interpolation node matrix stayed singular after " +
                           std::to_string(kNodeRetries) + " retries (degenerate pencil)");

    // Inverse DFT on the circle: M_j = (1/q) radius^{-j} sum_s w^{-js} V_s.
    std::vector<Matrix> coefficients;
    coefficients.reserve(q);
    for (std::size_t j = 0; j < q; ++j) {
        DenseValues sum = DenseValues::Zero(qq, qq);
        for (std::size_t s = 0; s < q; ++s) sum += std::pow(nodes[s], -static_cast<int>(j)) * adjugates[s];
        sum /= static_cast<double>(q);
        if (field == Field::Real) sum.imag().setZero();
        coefficients.emplace_back(std::move(sum), field);
    }
    return coefficients;
}

std::optional<std::string> inverse_precondition_failure(const KroneckerBinomial& binomial, double gap_tol) {
    binomial.validate();
    const auto oriented = orient(binomial);
    if (!oriented) return std::string("neither A nor B is invertible");
    const auto pencil = pencil_spectrum(*oriented->a, *oriented->b, gap_tol);
    if (!pencil.report.is_simple) return std::string("the pencil B^{-1}A does not have a simple spectrum");
    for (const Scalar& lambda : pencil.eigenvalues) {
        if (!passes_invertibility_gate(lambda * *oriented->c + *oriented->d))
            return std::string("lambda C + D is singular at an eigenvalue of the pencil");
    }
    return std::nullopt;
}

BinomialInverse binomial_inverse(const KroneckerBinomial& binomial, const InverseOptions& options) {
    binomial.validate();
    const std::size_t p = binomial.p();
    const std::size_t q = binomial.q();

    const auto oriented = orient(binomial);
    if (!oriented) throw PreconditionError(std::string("binomial_inverse: neither A nor B is invertible") + kPreprocessHint);
    const Matrix& a = *oriented->a;
    const Matrix& b = *oriented->b;
    const Matrix& c = *oriented->c;
    const Matrix& d = *oriented->d;

    const auto pencil = pencil_spectrum(a, b, options.gap_tol);
    if (!pencil.report.is_simple)
        throw PreconditionError(std::string("binomial_inverse: the pencil spectrum is not simple (min gap ") +
                                std::to_string(pencil.report.min_gap) + ")" + kPreprocessHint);

    const Matrix& s = pencil.eigenvectors;
    const Matrix s_inv = inverse(s);
    const Matrix b_inv = inverse(b);
    const Matrix s_inv_b_inv = multiply(s_inv, b_inv);
    const auto& lambdas = pencil.eigenvalues;

    std::vector<Matrix> node_inverses;
    std::vector<Scalar> node_dets;
    node_inverses.reserve(p);
    node_dets.reserve(p);
    for (const Scalar& lambda : lambdas) {
        const Matrix node = lambda * c + d;
        if (!passes_invertibility_gate(node))
            throw PreconditionError(std::string("binomial_inverse: lambda C + D is singular at lambda = (") +
                                    std::to_string(lambda.real()) + ", " + std::to_string(lambda.imag()) + ")" +
                                    kPreprocessHint);
        node_inverses.push_back(inverse(node));
        node_dets.push_back(determinant(node));
    }

    BinomialInverse result;
    result.swapped = oriented->swapped;
    result.branch_used = options.branch;
    if (result.branch_used == InverseBranch::Auto)
        result.branch_used = p <= q ? InverseBranch::PTerms : InverseBranch::QTerms;

    auto& decomposition = result.decomposition;
    decomposition.p = p;
    decomposition.q = q;
    const auto pp = static_cast<Eigen::Index>(p);

    if (result.branch_used == InverseBranch::PTerms) {
        decomposition.terms.reserve(p);
        for (Eigen::Index i = 0; i < pp; ++i) {
            // S E_ii S^{-1} B^{-1} is the outer product of column i of S and row i of S^{-1} B^{-1}.
            DenseValues left = s.values().col(i) * s_inv_b_inv.values().row(i);
            decomposition.terms.push_back(
                {Matrix(std::move(left), Field::Complex), node_inverses[static_cast<std::size_t>(i)].as_complex()});
        }
    } else {
        const auto coefficients = adjugate_poly(c, d);
        decomposition.terms.reserve(q);
        for (std::size_t j = 0; j < q; ++j) {
            Eigen::VectorXcd weights(pp);
            for (Eigen::Index i = 0; i < pp; ++i) {
                const auto idx = static_cast<std::size_t>(i);
                weights(i) = std::pow(lambdas[idx], static_cast<int>(j)) / node_dets[idx];
            }
            DenseValues left = s.values() * weights.asDiagonal() * s_inv_b_inv.values();
            decomposition.terms.push_back({Matrix(std::move(left), Field::Complex), coefficients[j].as_complex()});
        }
    }

    const Matrix x = evaluate_binomial(binomial);
    const Matrix rec = reconstruct(decomposition);
    const auto n = static_cast<Eigen::Index>(p * q);
    result.residual = (x.values() * rec.values() - DenseValues::Identity(n, n)).norm();
    result.condition = condition_number(x);
    if (!(result.residual <= options.tol_recon * result.condition)) {
        throw NumericError("binomial_inverse: reconstruction residual " + std::to_string(result.residual) +
                           " exceeds " + std::to_string(options.tol_recon) + " * cond(X) = " +
                           std::to_string(options.tol_recon * result.condition) +
                           " (cond(S) = " + std::to_string(condition_number(s)) + ")");
    }

    if (options.rank_check != RankCheck::Ignore) {
        result.binomial_rank = kron_rank(x, p, q, options.rank_tol).numeric_rank;
        if (result.binomial_rank != 2) {
            const std::string message =
                "numeric Kronecker rank of X is " + std::to_string(result.binomial_rank) + ", not 2";
            if (options.rank_check == RankCheck::Reject) throw PreconditionError("binomial_inverse: " + message);
            result.warnings.push_back(message);
        }
    }
    return result;
}

Matrix reconstruct(const KronSumDecomposition& decomposition) {
    if (decomposition.terms.empty()) throw PreconditionError("reconstruct: decomposition has no terms");
    Matrix sum = kron_product(decomposition.terms.front().left, decomposition.terms.front().right);
    for (std::size_t k = 1; k < decomposition.terms.size(); ++k)
        sum += kron_product(decomposition.terms[k].left, decomposition.terms[k].right);
    return sum;
}

PreprocessedBinomial preprocess_binomial(const KroneckerBinomial& binomial, double delta, const PerturbSpec& spec) {
    binomial.validate();
    if (!(delta > 0.0)) throw PreconditionError("preprocess_binomial: delta must be positive");

    PerturbSpec pair_spec = spec;
    pair_spec.eps = delta;
    pair_spec.field = spec.field.value_or(field_of(binomial));

    // The certificate covers A B^{-1}; B^{-1} A is similar to it but the
    // relative gap threshold is evaluated at a different norm, so the
    // transferred certificate is re-checked and the search re-seeded if needed.
    for (std::size_t round = 0; round < kPreprocessRounds; ++round) {
        if (round > 0) pair_spec.seed = RandomSource::derive(spec.seed, {kPreprocessStream, round});
        auto outcome = perturb_pair_inverse(binomial.a, binomial.b, pair_spec);
        KroneckerBinomial perturbed{outcome.perturbed[0], outcome.perturbed[1], binomial.c, binomial.d};
        if (!inverse_precondition_failure(perturbed, spec.gap_tol))
            return {std::move(perturbed), std::move(outcome)};
    }
    throw AttemptsExhausted("preprocess_binomial: no perturbation satisfied the inverse preconditions after " +
                                std::to_string(kPreprocessRounds) + " rounds",
                            PerturbTrace{});
}

} // namespace genspec
