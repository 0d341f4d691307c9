#include <genspec/matrix.hpp>

#include <cmath>
#include <limits>
#include <string>

#include <genspec/error.hpp>
#include <genspec/random.hpp>

namespace genspec {

namespace {

std::string shape(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError(std::string(op) + ": shape mismatch " + shape(a) + " vs " + shape(b));
}

void require_square(const Matrix& a, const char* op) {
    if (!a.is_square()) throw DimensionError(std::string(op) + ": expected a square matrix, got " + shape(a));
}

// Builds a result and re-establishes the zero-imaginary invariant for Real.
Matrix make(DenseValues values, Field field) {
    if (field == Field::Real) values.imag().setZero();
    return Matrix(std::move(values), field);
}

} // namespace

std::string_view to_string(Field field) noexcept {
    return field == Field::Real ? "real" : "complex";
}

Field parse_field(std::string_view text) {
    if (text == "real") return Field::Real;
    if (text == "complex") return Field::Complex;
    throw PreconditionError("unknown field '" + std::string(text) + "' (expected real or complex)");
}

Matrix::Matrix(DenseValues values, Field field) : values_(std::move(values)), field_(field) {
    if (values_.rows() <= 0 || values_.cols() <= 0)
        throw DimensionError("matrix dimensions must be positive");
    if (field_ == Field::Real && !values_.imag().isZero(0.0))
        throw PreconditionError("real-tagged matrix has nonzero imaginary parts");
}

Matrix Matrix::zeros(std::size_t rows, std::size_t cols, Field field) {
    return Matrix(DenseValues::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols)), field);
}

Matrix Matrix::identity(std::size_t n, Field field) {
    const auto size = static_cast<Eigen::Index>(n);
    return Matrix(DenseValues::Identity(size, size), field);
}

Matrix Matrix::diagonal(const std::vector<Scalar>& entries, Field field) {
    const auto n = static_cast<Eigen::Index>(entries.size());
    DenseValues values = DenseValues::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) values(i, i) = entries[static_cast<std::size_t>(i)];
    return Matrix(std::move(values), field);
}

Matrix Matrix::diagonal(std::initializer_list<double> entries) {
    return diagonal(std::vector<Scalar>(entries.begin(), entries.end()), Field::Real);
}

Matrix Matrix::real(std::initializer_list<std::initializer_list<double>> rows) {
    const auto n_rows = static_cast<Eigen::Index>(rows.size());
    const auto n_cols = n_rows > 0 ? static_cast<Eigen::Index>(rows.begin()->size()) : 0;
    DenseValues values(n_rows, n_cols);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        if (static_cast<Eigen::Index>(row.size()) != n_cols) throw DimensionError("ragged matrix literal");
        Eigen::Index j = 0;
        for (double v : row) values(i, j++) = v;
        ++i;
    }
    return Matrix(std::move(values), Field::Real);
}

Matrix Matrix::complex(std::initializer_list<std::initializer_list<Scalar>> rows) {
    const auto n_rows = static_cast<Eigen::Index>(rows.size());
    const auto n_cols = n_rows > 0 ? static_cast<Eigen::Index>(rows.begin()->size()) : 0;
    DenseValues values(n_rows, n_cols);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        if (static_cast<Eigen::Index>(row.size()) != n_cols) throw DimensionError("ragged matrix literal");
        Eigen::Index j = 0;
        for (Scalar v : row) values(i, j++) = v;
        ++i;
    }
    return Matrix(std::move(values), Field::Complex);
}

std::size_t Matrix::order() const {
    require_square(*this, "order");
    return rows();
}

Matrix Matrix::transpose() const { return Matrix(values_.transpose(), field_); }

Matrix Matrix::adjoint() const { return make(values_.adjoint(), field_); }

Matrix Matrix::as_complex() const { return Matrix(values_, Field::Complex); }

Matrix& Matrix::operator+=(const Matrix& other) {
    require_same_shape(*this, other, "add");
    values_ += other.values_;
    field_ = join(field_, other.field_);
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    require_same_shape(*this, other, "subtract");
    values_ -= other.values_;
    field_ = join(field_, other.field_);
    return *this;
}

Matrix& Matrix::operator*=(double factor) {
    values_ *= factor;
    if (field_ == Field::Real) values_.imag().setZero();
    return *this;
}

Matrix operator*(Scalar factor, const Matrix& a) {
    const Field field = (a.field_ == Field::Real && factor.imag() == 0.0) ? Field::Real : Field::Complex;
    return make(factor * a.values_, field);
}

Matrix operator-(const Matrix& a) { return make(-a.values_, a.field_); }

bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.rows() == b.rows() && a.cols() == b.cols() && a.values_ == b.values_;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw DimensionError("multiply: inner dimensions differ (" + shape(a) + " * " + shape(b) + ")");
    return make(a.values() * b.values(), join(a.field(), b.field()));
}

std::vector<double> singular_values(const Matrix& a) {
    const Eigen::JacobiSVD<DenseValues> svd(a.values());
    const auto& s = svd.singularValues();
    return {s.data(), s.data() + s.size()};
}

double frobenius_norm(const Matrix& a) { return a.values().norm(); }

double spectral_norm(const Matrix& a) { return singular_values(a).front(); }

double condition_number(const Matrix& a) {
    const auto s = singular_values(a);
    if (s.back() == 0.0) return std::numeric_limits<double>::infinity();
    return s.front() / s.back();
}

Scalar determinant(const Matrix& a) {
    require_square(a, "determinant");
    const Scalar det = a.values().partialPivLu().determinant();
    return a.is_real() ? Scalar(det.real(), 0.0) : det;
}

bool passes_invertibility_gate(const Matrix& a, double tol_sing) {
    if (!a.is_square()) return false;
    const auto s = singular_values(a);
    return s.back() > tol_sing * s.front();
}

Inversion invert(const Matrix& a, double tol_sing) {
    require_square(a, "inverse");
    const auto s = singular_values(a);
    const double sigma_max = s.front();
    const double sigma_min = s.back();
    if (!(sigma_min > tol_sing * sigma_max)) {
        throw SingularMatrix("matrix is numerically singular (sigma_min=" + std::to_string(sigma_min) +
                                 ", sigma_max=" + std::to_string(sigma_max) + ")",
                             sigma_min, sigma_max);
    }
    const auto n = static_cast<Eigen::Index>(a.rows());
    DenseValues inv = a.values().partialPivLu().solve(DenseValues::Identity(n, n));
    return {make(std::move(inv), a.field()), sigma_min, sigma_max};
}

Matrix inverse(const Matrix& a, double tol_sing) { return invert(a, tol_sing).inverse; }

Matrix sample_gaussian(std::size_t n, Field field, RandomSource& rng) {
    if (n == 0) throw DimensionError("sample_gaussian: n must be positive");
    const auto size = static_cast<Eigen::Index>(n);
    DenseValues values(size, size);
    for (Eigen::Index j = 0; j < size; ++j) {
        for (Eigen::Index i = 0; i < size; ++i) {
            const double re = rng.normal();
            const double im = field == Field::Complex ? rng.normal() : 0.0;
            values(i, j) = Scalar(re, im);
        }
    }
    return Matrix(std::move(values), field);
}

} // namespace genspec
