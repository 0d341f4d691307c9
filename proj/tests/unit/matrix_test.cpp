#include <gtest/gtest.h>

#include <cmath>

#include <genspec/error.hpp>
#include <genspec/matrix.hpp>
#include <genspec/random.hpp>

using namespace genspec;

namespace {

void expect_near(const Matrix& a, const Matrix& b, double tol) {
    ASSERT_EQ(a.rows(), b.rows());
    ASSERT_EQ(a.cols(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) EXPECT_NEAR(std::abs(a(i, j) - b(i, j)), 0.0, tol) << i << "," << j;
}

} // namespace

TEST(Matrix, RejectsEmptyAndMistaggedValues) {
    EXPECT_THROW(Matrix::zeros(0, 2), DimensionError);
    DenseValues v(1, 1);
    v(0, 0) = Scalar(1.0, 2.0);
    EXPECT_THROW(Matrix(v, Field::Real), PreconditionError);
    EXPECT_NO_THROW(Matrix(v, Field::Complex));
}

TEST(Matrix, MultiplyExamples) {
    const Matrix a = Matrix::real({{1, 2}, {3, 4}});
    const Matrix swap = Matrix::real({{0, 1}, {1, 0}});
    EXPECT_EQ(multiply(a, swap), Matrix::real({{2, 1}, {4, 3}}));
    EXPECT_EQ(multiply(Matrix::diagonal({2, 3}), Matrix::diagonal({5, 7})), Matrix::diagonal({10, 21}));
    EXPECT_THROW(multiply(a, Matrix::zeros(3, 3)), DimensionError);
}

TEST(Matrix, MixedFieldProductIsComplex) {
    const Matrix r = Matrix::identity(2);
    const Matrix c = Matrix::complex({{{0, 1}, {0, 0}}, {{0, 0}, {0, 1}}});
    const Matrix p = multiply(r, c);
    EXPECT_EQ(p.field(), Field::Complex);
    EXPECT_EQ(p, c);
}

TEST(Matrix, Norms) {
    const Matrix a = Matrix::real({{1, 2}, {3, 4}});
    EXPECT_DOUBLE_EQ(frobenius_norm(a), std::sqrt(30.0));
    // numpy.linalg.svd([[1,2],[3,4]])
    const auto s = singular_values(a);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_NEAR(s[0], 5.464985704219043, 1e-14);
    EXPECT_NEAR(s[1], 0.3659661906262575, 1e-14);
    EXPECT_NEAR(spectral_norm(a), 5.464985704219043, 1e-14);
    EXPECT_NEAR(condition_number(a), 5.464985704219043 / 0.3659661906262575, 1e-12);
    EXPECT_TRUE(std::isinf(condition_number(Matrix::zeros(2, 2))));
}

TEST(Matrix, InverseExamples) {
    expect_near(inverse(Matrix::diagonal({2, 4})), Matrix::diagonal({0.5, 0.25}), 1e-15);
    const Matrix a = Matrix::real({{1, 2}, {3, 4}});
    expect_near(inverse(a), Matrix::real({{-2, 1}, {1.5, -0.5}}), 1e-14);
    EXPECT_NEAR(std::abs(determinant(a) - Scalar(-2.0)), 0.0, 1e-14);
}

TEST(Matrix, SingularInverseCarriesSingularValues) {
    try {
        (void)inverse(Matrix::real({{1, 2}, {2, 4}}));
        FAIL() << "expected SingularMatrix";
    } catch (const SingularMatrix& e) {
        EXPECT_LT(e.sigma_min(), 1e-12 * e.sigma_max());
        EXPECT_NEAR(e.sigma_max(), 5.0, 1e-12);
    }
    EXPECT_FALSE(passes_invertibility_gate(Matrix::zeros(3, 3)));
    EXPECT_TRUE(passes_invertibility_gate(Matrix::identity(3)));
}

TEST(Matrix, InverseIsTwoSidedOnRandomMatrices) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RandomSource rng(seed);
        const Matrix a = sample_gaussian(2 + seed % 6, Field::Complex, rng);
        const Matrix ai = inverse(a);
        const double scale = condition_number(a) * 1e-13;
        expect_near(multiply(a, ai), Matrix::identity(a.rows()), scale);
        expect_near(multiply(ai, a), Matrix::identity(a.rows()), scale);
    }
}

TEST(Matrix, TransposeAndAdjoint) {
    const Matrix c = Matrix::complex({{{1, 1}, {2, 0}}, {{0, -3}, {4, 0}}});
    EXPECT_EQ(c.transpose()(0, 1), Scalar(0, -3));
    EXPECT_EQ(c.adjoint()(0, 1), Scalar(0, 3));
    EXPECT_EQ(c.adjoint().adjoint(), c);
}

TEST(Matrix, ArithmeticKeepsRealTag) {
    const Matrix a = Matrix::identity(2);
    const Matrix b = a + a * 2.0 - a;
    EXPECT_EQ(b.field(), Field::Real);
    EXPECT_EQ(b, Matrix::diagonal({2, 2}));
}

TEST(RandomSource, SameSeedSameStream) {
    RandomSource a(42), b(42);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(a.normal(), b.normal());
    RandomSource c(7);
    for (int i = 0; i < 1000; ++i) {
        const double u = c.uniform_open();
        EXPECT_GT(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}

TEST(RandomSource, DerivedSeedsDiffer) {
    EXPECT_NE(RandomSource::derive(0, {1}), RandomSource::derive(0, {2}));
    EXPECT_NE(RandomSource::derive(0, {1, 2}), RandomSource::derive(0, {2, 1}));
    EXPECT_EQ(RandomSource::derive(5, {3, 4}), RandomSource::derive(5, {3, 4}));
}

TEST(SampleGaussian, FieldTagging) {
    RandomSource rng(1);
    const Matrix r = sample_gaussian(3, Field::Real, rng);
    EXPECT_TRUE(r.is_real());
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(r(i, j).imag(), 0.0);
    EXPECT_EQ(sample_gaussian(3, Field::Complex, rng).field(), Field::Complex);
}
