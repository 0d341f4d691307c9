#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace genspec {

using Scalar = std::complex<double>;

/// Dense storage used by every matrix: column-major complex<double>.
using DenseValues = Eigen::MatrixXcd;

/// The ground field a matrix lives over. Real is a tag on complex storage
/// whose imaginary parts are exactly zero.
enum class Field { Real, Complex };

std::string_view to_string(Field field) noexcept;
Field parse_field(std::string_view text);

/// Complex when either operand is complex.
constexpr Field join(Field a, Field b) noexcept {
    return (a == Field::Complex || b == Field::Complex) ? Field::Complex : Field::Real;
}

/// Singular-value ratio below which a matrix is treated as singular.
inline constexpr double kTolSing = 1e-12;

class RandomSource;

/// Dense matrix over R or C with positive dimensions.
///
/// Entries are stored as complex<double> in column-major order. A matrix
/// tagged Field::Real carries exactly-zero imaginary parts; every operation
/// that produces a Real result re-establishes that invariant.
class Matrix {
public:
    Matrix(DenseValues values, Field field);

    static Matrix zeros(std::size_t rows, std::size_t cols, Field field = Field::Real);
    static Matrix identity(std::size_t n, Field field = Field::Real);
    static Matrix diagonal(const std::vector<Scalar>& entries, Field field);
    static Matrix diagonal(std::initializer_list<double> entries);

    /// Row-major literal with real entries.
    static Matrix real(std::initializer_list<std::initializer_list<double>> rows);
    /// Row-major literal with complex entries.
    static Matrix complex(std::initializer_list<std::initializer_list<Scalar>> rows);

    std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(values_.cols()); }
    bool is_square() const noexcept { return values_.rows() == values_.cols(); }
    /// Order of a square matrix; throws DimensionError otherwise.
    std::size_t order() const;

    Field field() const noexcept { return field_; }
    bool is_real() const noexcept { return field_ == Field::Real; }

    Scalar operator()(std::size_t row, std::size_t col) const {
        return values_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }
    const DenseValues& values() const noexcept { return values_; }

    Matrix transpose() const;
    Matrix adjoint() const;
    /// Same entries re-tagged as Complex.
    Matrix as_complex() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double factor);

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, double factor) { return a *= factor; }
    friend Matrix operator*(double factor, Matrix a) { return a *= factor; }
    friend Matrix operator*(Scalar factor, const Matrix& a);
    friend Matrix operator-(const Matrix& a);

    /// Exact entrywise comparison, field tag included.
    friend bool operator==(const Matrix& a, const Matrix& b);

private:
    DenseValues values_;
    Field field_;
};

Matrix multiply(const Matrix& a, const Matrix& b);
inline Matrix operator*(const Matrix& a, const Matrix& b) { return multiply(a, b); }

/// Singular values in descending order.
std::vector<double> singular_values(const Matrix& a);

double frobenius_norm(const Matrix& a);
double spectral_norm(const Matrix& a);

/// sigma_max / sigma_min; +inf when sigma_min is zero.
double condition_number(const Matrix& a);

Scalar determinant(const Matrix& a);

struct Inversion {
    Matrix inverse;
    double sigma_min;
    double sigma_max;
};

/// Inverse by partially pivoted LU, gated by the singular-value ratio.
/// Throws SingularMatrix when sigma_min <= tol_sing * sigma_max.
Inversion invert(const Matrix& a, double tol_sing = kTolSing);
Matrix inverse(const Matrix& a, double tol_sing = kTolSing);

/// True when the matrix passes the invertibility gate used by inverse().
bool passes_invertibility_gate(const Matrix& a, double tol_sing = kTolSing);

/// n x n matrix of i.i.d. standard normals; for Complex the real and
/// imaginary parts are drawn independently. Draw order is column-major.
Matrix sample_gaussian(std::size_t n, Field field, RandomSource& rng);

} // namespace genspec
