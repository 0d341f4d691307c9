#include <gtest/gtest.h>

#include <algorithm>

#include <genspec/error.hpp>
#include <genspec/perturb.hpp>
#include <genspec/random.hpp>
#include <genspec/selfmap.hpp>
#include <genspec/serialize.hpp>

using namespace genspec;

namespace {

PerturbSpec with_eps(double eps, std::uint64_t seed = 0) {
    PerturbSpec spec;
    spec.eps = eps;
    spec.seed = seed;
    return spec;
}

Matrix jordan(std::size_t n) {
    DenseValues v = DenseValues::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i + 1 < static_cast<Eigen::Index>(n); ++i) v(i, i + 1) = 1.0;
    return Matrix(v, Field::Real);
}

// Re-derives every outcome invariant from the returned matrices alone.
void expect_certified(const std::vector<Matrix>& inputs, const PerturbOutcome& outcome, const PerturbSpec& spec) {
    ASSERT_EQ(outcome.perturbed.size(), inputs.size());
    Matrix product = apply_selfmap(outcome.maps[0], outcome.perturbed[0]);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        EXPECT_LT(frobenius_norm(inputs[i] - outcome.perturbed[i]), spec.eps);
        EXPECT_DOUBLE_EQ(outcome.deltas[i], frobenius_norm(inputs[i] - outcome.perturbed[i]));
        EXPECT_TRUE(is_generic(simplicity_report(outcome.perturbed[i], spec.gap_tol)));
        if (i > 0) product = multiply(product, apply_selfmap(outcome.maps[i], outcome.perturbed[i]));
    }
    EXPECT_EQ(product, outcome.product);
    EXPECT_TRUE(simplicity_report(product, spec.gap_tol).is_simple);
}

} // namespace

TEST(SelfMap, Examples) {
    const Matrix m = Matrix::real({{1, 2}, {3, 4}});
    EXPECT_EQ(apply_selfmap(SelfMap::identity(), m), m);
    EXPECT_EQ(apply_selfmap(SelfMap::transpose(), m), Matrix::real({{1, 3}, {2, 4}}));
    const Matrix inv = apply_selfmap(SelfMap::inverse(), Matrix::diagonal({2, 4}));
    EXPECT_NEAR(frobenius_norm(inv - Matrix::diagonal({0.5, 0.25})), 0.0, 1e-15);
    EXPECT_THROW((void)apply_selfmap(SelfMap::transpose(), Matrix::zeros(2, 2)), SingularMatrix);
    EXPECT_THROW((void)apply_selfmap(SelfMap::inverse(), Matrix::zeros(2, 2)), SingularMatrix);
}

TEST(SelfMap, InverseIsInverse) {
    RandomSource rng(8);
    const Matrix m = sample_gaussian(5, Field::Complex, rng);
    EXPECT_LT(frobenius_norm(multiply(apply_selfmap(SelfMap::inverse(), m), m) - Matrix::identity(5)),
              1e-12 * condition_number(m));
}

TEST(SelfMap, SimilarityPreservesSpectrum) {
    RandomSource rng(9);
    const Matrix s = sample_gaussian(4, Field::Complex, rng);
    const Matrix m = sample_gaussian(4, Field::Complex, rng);
    const auto before = eigendecompose(m).eigenvalues;
    const auto after = eigendecompose(apply_selfmap(SelfMap::similarity(s), m)).eigenvalues;
    for (std::size_t i = 0; i < before.size(); ++i) EXPECT_NEAR(std::abs(before[i] - after[i]), 0.0, 1e-9);
    EXPECT_THROW((void)SelfMap::left_mul(Matrix::zeros(2, 2)), SingularMatrix);
}

TEST(SelfMap, ParseNames) {
    EXPECT_EQ(SelfMap::parse("Inverse").name(), "inverse");
    EXPECT_EQ(SelfMap::parse("conjugate_transpose").name(), "conjugate-transpose");
    EXPECT_TRUE(SelfMap::parse("id").is_identity());
    EXPECT_THROW((void)SelfMap::parse("exp"), PreconditionError);
}

TEST(PerturbSpec, Validation) {
    EXPECT_THROW(with_eps(0.0).validate(), PreconditionError);
    PerturbSpec spec;
    spec.stage2_shrink = 1.0;
    EXPECT_THROW(spec.validate(), PreconditionError);
    spec = PerturbSpec{};
    spec.max_attempts = 0;
    EXPECT_THROW(spec.validate(), PreconditionError);
}

TEST(PerturbSingle, GenericInputUnchanged) {
    const Matrix a = Matrix::diagonal({1, 2, 3});
    const auto r = perturb_single(a, with_eps(1e-3));
    EXPECT_EQ(r.matrix, a);
    EXPECT_EQ(r.delta, 0.0);
    EXPECT_EQ(r.attempts, 1u);
}

TEST(PerturbSingle, IdentityAndZero) {
    const auto id = perturb_single(Matrix::identity(4), with_eps(0.1));
    EXPECT_TRUE(is_generic(simplicity_report(id.matrix)));
    EXPECT_LT(frobenius_norm(Matrix::identity(4) - id.matrix), 0.1);

    const auto zero = perturb_single(Matrix::zeros(3, 3), with_eps(1e-3));
    EXPECT_TRUE(is_generic(simplicity_report(zero.matrix)));
    EXPECT_LT(frobenius_norm(zero.matrix), 1e-3);
}

TEST(PerturbPair, DiagonalIdentityMapsUnchanged) {
    const Matrix a = Matrix::diagonal({1, 2});
    const Matrix b = Matrix::diagonal({3, 4});
    const auto o = perturb_pair(a, b, SelfMap::identity(), SelfMap::identity(), with_eps(1e-2));
    EXPECT_EQ(o.perturbed[0], a);
    EXPECT_EQ(o.perturbed[1], b);
    EXPECT_EQ(o.product, Matrix::diagonal({3, 8}));
    EXPECT_EQ(o.attempts_used, 1u);
}

TEST(PerturbPair, IdentityPairWithInverse) {
    const Matrix i = Matrix::identity(2);
    const PerturbSpec spec = with_eps(0.1);
    const auto o = perturb_pair(i, i, SelfMap::identity(), SelfMap::inverse(), spec);
    expect_certified({i, i}, o, spec);
}

TEST(PerturbPair, RejectsBadInputs) {
    const Matrix i2 = Matrix::identity(2);
    EXPECT_THROW((void)perturb_pair_inverse(i2, Matrix::identity(3), with_eps(0.1)), DimensionError);
    EXPECT_THROW((void)perturb_pair_inverse(i2, i2, with_eps(0.0)), PreconditionError);
}

TEST(PerturbPairInverse, NilpotentPair) {
    const Matrix a = Matrix::real({{0, 1}, {0, 0}});
    const Matrix b = Matrix::real({{0, 0}, {1, 0}});
    const PerturbSpec spec = with_eps(0.05);
    expect_certified({a, b}, perturb_pair_inverse(a, b, spec), spec);
}

TEST(PerturbPairInverse, AlreadyGenericFastPath) {
    const Matrix a = Matrix::diagonal({1, 2});
    const auto o = perturb_pair_inverse(a, Matrix::diagonal({1, 3}), with_eps(1e-2));
    EXPECT_EQ(o.deltas, (std::vector<double>{0.0, 0.0}));
    // B = I is not simple itself, so only A can stay put
    const auto moved = perturb_pair_inverse(a, Matrix::identity(2), with_eps(1e-2));
    EXPECT_EQ(moved.perturbed[0], a);
    EXPECT_GT(moved.deltas[1], 0.0);
}

TEST(PerturbPairInverse, RandomPairsMostlyUntouched) {
    std::size_t untouched = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        RandomSource rng(seed);
        const Matrix a = sample_gaussian(4, Field::Complex, rng);
        const Matrix b = sample_gaussian(4, Field::Complex, rng);
        const auto o = perturb_pair_inverse(a, b, with_eps(1e-2, seed));
        if (o.attempts_used == 1 && o.deltas[0] == 0.0 && o.deltas[1] == 0.0) ++untouched;
    }
    EXPECT_GE(untouched, 198u);
}

TEST(PerturbPairInverse, DegenerateSweep) {
    for (double eps : {1e-1, 1e-6}) {
        for (std::size_t n : {2u, 5u, 8u}) {
            for (const Matrix& m : {Matrix::identity(n), jordan(n)}) {
                const PerturbSpec spec = with_eps(eps, n);
                expect_certified({m, m}, perturb_pair_inverse(m, m, spec), spec);
            }
            RandomSource rng(n);
            const Matrix g = sample_gaussian(n, Field::Complex, rng);
            const Matrix z = Matrix::zeros(n, n);
            const PerturbSpec spec = with_eps(eps, n);
            expect_certified({z, g}, perturb_pair_inverse(z, g, spec), spec);
            expect_certified({g, z}, perturb_pair_inverse(g, z, spec), spec);
        }
    }
}

TEST(PerturbPair, TraceStagesStayWithinBudget) {
    const Matrix i = Matrix::identity(5);
    const PerturbSpec spec = with_eps(1e-3, 4);
    const auto o = perturb_pair_inverse(i, i, spec);
    ASSERT_FALSE(o.trace.rounds.empty());
    for (const auto& round : o.trace.rounds) {
        EXPECT_LT(round.stage1[0].delta, spec.eps / 2);
        EXPECT_LT(round.stage1[1].delta, spec.eps);
        EXPECT_LT(round.initial_radius, spec.eps / 2);
        for (const auto& draw : round.stage2) EXPECT_LE(draw.step, round.initial_radius);
    }
    EXPECT_EQ(o.trace.rounds.back().stage2.back().status, Stage2Attempt::Status::Accepted);
}

TEST(PerturbPair, DeterministicForFixedSeed) {
    const Matrix j = jordan(6);
    const auto first = dump(to_json(perturb_pair_inverse(j, j, with_eps(1e-6, 17))));
    EXPECT_EQ(dump(to_json(perturb_pair_inverse(j, j, with_eps(1e-6, 17)))), first);
    EXPECT_NE(dump(to_json(perturb_pair_inverse(j, j, with_eps(1e-6, 18)))), first);
}

TEST(PerturbPair, ExhaustionCarriesTrace) {
    const Matrix i = Matrix::identity(3);
    PerturbSpec spec = with_eps(1e-2);
    spec.max_attempts = 1;
    try {
        (void)perturb_pair(i, i, SelfMap::identity(), SelfMap::identity(), spec);
        FAIL() << "expected AttemptsExhausted";
    } catch (const AttemptsExhausted& e) {
        EXPECT_FALSE(e.trace().rounds.empty());
    }
}

TEST(PerturbTuple, PairEquivalence) {
    RandomSource rng(5);
    const Matrix a = Matrix::identity(4);
    const Matrix b = sample_gaussian(4, Field::Real, rng);
    const PerturbSpec spec = with_eps(1e-3, 21);
    const auto pair = perturb_pair(a, b, SelfMap::transpose(), SelfMap::inverse(), spec);
    const auto tuple = perturb_tuple({a, b}, {SelfMap::transpose(), SelfMap::inverse()}, spec);
    EXPECT_EQ(dump(to_json(pair)), dump(to_json(tuple)));
}

TEST(PerturbTuple, SingleIdentityIsPerturbSingle) {
    const Matrix i = Matrix::identity(3);
    const PerturbSpec spec = with_eps(1e-2, 3);
    const auto tuple = perturb_tuple({i}, {SelfMap::identity()}, spec);
    const auto single = perturb_single(i, spec);
    EXPECT_EQ(tuple.perturbed[0], single.matrix);
    EXPECT_EQ(tuple.attempts_used, single.attempts);
}

TEST(PerturbTuple, TransposeInverseIdentityTriples) {
    const std::vector<SelfMap> maps = {SelfMap::transpose(), SelfMap::inverse(), SelfMap::identity()};
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        RandomSource rng(seed);
        std::vector<Matrix> as;
        for (int i = 0; i < 3; ++i) as.push_back(sample_gaussian(4, Field::Complex, rng));
        const PerturbSpec spec = with_eps(1e-2, seed);
        expect_certified(as, perturb_tuple(as, maps, spec), spec);
    }
    const Matrix i = Matrix::identity(3);
    const PerturbSpec spec = with_eps(1e-2);
    expect_certified({i, i, i}, perturb_tuple({i, i, i}, maps, spec), spec);
}

TEST(PerturbTuple, DesignatedIndexIsSearched) {
    const Matrix i = Matrix::identity(3);
    PerturbSpec spec = with_eps(1e-2, 2);
    spec.designated = 2;
    const auto o = perturb_tuple({i, i, i}, {SelfMap::identity(), SelfMap::identity(), SelfMap::identity()}, spec);
    EXPECT_EQ(o.trace.designated, 2u);
    EXPECT_LT(o.trace.rounds.back().stage1[2].budget, spec.eps);
    expect_certified({i, i, i}, o, spec);
}

TEST(PerturbTuple, LengthMismatch) {
    const Matrix i = Matrix::identity(2);
    EXPECT_THROW((void)perturb_tuple({i, i}, {SelfMap::identity()}, with_eps(1e-2)), DimensionError);
    EXPECT_THROW((void)perturb_tuple({}, {}, with_eps(1e-2)), DimensionError);
}
