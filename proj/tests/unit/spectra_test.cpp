#include <gtest/gtest.h>

#include <cmath>

#include <genspec/error.hpp>
#include <genspec/random.hpp>
#include <genspec/spectra.hpp>

using namespace genspec;

TEST(Eigendecompose, MatchesReferenceEigenvalues) {
    // numpy.linalg.eigvals, sorted by (re, im)
    const Matrix a = Matrix::real({{2, -1, 0}, {1, 3, 1}, {0, 1, 4}});
    const auto e = eigendecompose(a);
    ASSERT_EQ(e.eigenvalues.size(), 3u);
    EXPECT_NEAR(std::abs(e.eigenvalues[0] - Scalar(2.239310146597716, -0.8578736265951777)), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(e.eigenvalues[1] - Scalar(2.239310146597716, 0.8578736265951777)), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(e.eigenvalues[2] - Scalar(4.521379706804568, 0.0)), 0.0, 1e-13);
}

TEST(Eigendecompose, ResidualsAndUnitVectors) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        RandomSource rng(seed);
        const Matrix a = sample_gaussian(2 + seed % 7, Field::Complex, rng);
        const auto e = eigendecompose(a);
        const double scale = spectral_norm(a);
        for (std::size_t k = 0; k < a.rows(); ++k) {
            const auto v = e.eigenvectors.values().col(static_cast<Eigen::Index>(k));
            EXPECT_NEAR(v.norm(), 1.0, 1e-12);
            EXPECT_LE((a.values() * v - e.eigenvalues[k] * v).norm(), kTolEig * scale);
        }
    }
}

TEST(Eigendecompose, CompanionOfCubeRootsOfUnity) {
    // companion matrix of z^3 - 1
    const Matrix c = Matrix::real({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}});
    const auto e = eigendecompose(c);
    const double h = std::sqrt(3.0) / 2.0;
    EXPECT_NEAR(std::abs(e.eigenvalues[0] - Scalar(-0.5, -h)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(e.eigenvalues[1] - Scalar(-0.5, h)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(e.eigenvalues[2] - Scalar(1.0, 0.0)), 0.0, 1e-14);
}

TEST(SimplicityReport, DiagonalExample) {
    const auto r = simplicity_report(Matrix::diagonal({1, 2}));
    EXPECT_TRUE(r.is_simple);
    EXPECT_TRUE(r.is_invertible);
    EXPECT_DOUBLE_EQ(r.min_gap, 1.0);
    ASSERT_TRUE(r.eig_condition.has_value());
    EXPECT_NEAR(*r.eig_condition, 1.0, 1e-14);
    EXPECT_NEAR(r.safe_radius, 0.5, 1e-14);
}

TEST(SimplicityReport, NonNormalSafeRadius) {
    // numpy: eig of [[1,1],[0,2]], unit columns, cond_2 = 1 + sqrt(2)
    const auto r = simplicity_report(Matrix::real({{1, 1}, {0, 2}}));
    ASSERT_TRUE(r.eig_condition.has_value());
    EXPECT_NEAR(*r.eig_condition, 2.414213562373095, 1e-12);
    EXPECT_NEAR(r.safe_radius, 0.20710678118654754, 1e-12);
}

TEST(SimplicityReport, DegenerateMatrices) {
    const auto identity = simplicity_report(Matrix::identity(3));
    EXPECT_FALSE(identity.is_simple);
    EXPECT_TRUE(identity.is_invertible);
    EXPECT_FALSE(identity.eig_condition.has_value());

    const auto nilpotent = simplicity_report(Matrix::real({{0, 1}, {0, 0}}));
    EXPECT_FALSE(nilpotent.is_simple);
    EXPECT_FALSE(nilpotent.is_invertible);

    const auto singular = simplicity_report(Matrix::diagonal({0, 1}));
    EXPECT_TRUE(singular.is_simple);
    EXPECT_FALSE(singular.is_invertible);
}

TEST(SimplicityReport, OneByOne) {
    const auto r = simplicity_report(Matrix::diagonal({3}));
    EXPECT_TRUE(r.is_simple);
    EXPECT_TRUE(std::isinf(r.min_gap));
    EXPECT_TRUE(std::isinf(r.safe_radius));
}

TEST(SimplicityReport, ThresholdIsRelative) {
    const auto tight = simplicity_report(Matrix::diagonal({1, 1 + 1e-6}), 1e-8);
    EXPECT_TRUE(tight.is_simple);
    const auto loose = simplicity_report(Matrix::diagonal({1, 1 + 1e-6}), 1e-5);
    EXPECT_FALSE(loose.is_simple);
    EXPECT_THROW((void)simplicity_report(Matrix::zeros(2, 3)), DimensionError);
}

TEST(Discriminant, ExactValues) {
    EXPECT_NEAR(std::abs(char_poly_discriminant(Matrix::real({{1, 2}, {3, 4}})) - Scalar(33.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(char_poly_discriminant(Matrix::diagonal({0, 1, 2})) - Scalar(4.0)), 0.0, 1e-12);
    // sympy.discriminant of the characteristic polynomial
    EXPECT_NEAR(std::abs(char_poly_discriminant(Matrix::real({{2, -1, 0}, {1, 3, 1}, {0, 1, 4}})) - Scalar(-104.0)),
                0.0, 1e-10);
    EXPECT_NEAR(std::abs(char_poly_discriminant(Matrix::identity(3))), 0.0, 1e-20);
}

TEST(Discriminant, ClosedFormForTwoByTwo) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        RandomSource rng(seed);
        const Matrix a = sample_gaussian(2, Field::Complex, rng);
        const Scalar expected = discriminant_2x2(a);
        EXPECT_LE(std::abs(char_poly_discriminant(a) - expected), 1e-9 * std::max(1.0, std::abs(expected)));
    }
}

TEST(Discriminant, OrderGuard) { EXPECT_THROW((void)char_poly_discriminant(Matrix::identity(9)), DimensionError); }

TEST(CertifyOpenness, NormalAndRandomMatrices) {
    RandomSource rng(11);
    const Matrix d = Matrix::diagonal({1, 2});
    EXPECT_TRUE(certify_openness(d, simplicity_report(d), 100, rng));
    for (std::size_t n = 2; n <= 6; ++n) {
        const Matrix a = sample_gaussian(n, Field::Complex, rng);
        const auto r = simplicity_report(a);
        ASSERT_TRUE(r.is_simple);
        EXPECT_TRUE(certify_openness(a, r, 50, rng));
    }
}

TEST(CertifyOpenness, RequiresSimpleReport) {
    RandomSource rng(0);
    const Matrix i = Matrix::identity(2);
    EXPECT_THROW((void)certify_openness(i, simplicity_report(i), 10, rng), PreconditionError);
    const Matrix d = Matrix::diagonal({1, 2});
    EXPECT_TRUE(certify_openness(d, simplicity_report(d), 0, rng));
}
