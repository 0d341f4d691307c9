#pragma once

#include <string>
#include <string_view>
#include <variant>

#include <genspec/matrix.hpp>

namespace genspec {

/// Homeomorphisms of GL_n onto itself. Each one maps open sets to open
/// sets, which is all the perturbation search relies on.
class SelfMap {
public:
    struct Identity {};
    struct Inverse {};
    struct Transpose {};
    struct ConjugateTranspose {};
    /// X -> M X
    struct LeftMul { Matrix factor; };
    /// X -> X M
    struct RightMul { Matrix factor; };
    /// X -> S X S^{-1}; the inverse is cached at construction.
    struct Similarity {
        Matrix transform;
        Matrix transform_inverse;
    };

    using Variant = std::variant<Identity, Inverse, Transpose, ConjugateTranspose, LeftMul, RightMul, Similarity>;

    static SelfMap identity() { return SelfMap(Identity{}); }
    static SelfMap inverse() { return SelfMap(Inverse{}); }
    static SelfMap transpose() { return SelfMap(Transpose{}); }
    static SelfMap conjugate_transpose() { return SelfMap(ConjugateTranspose{}); }
    /// The attached matrices must pass the invertibility gate (SingularMatrix otherwise).
    static SelfMap left_mul(Matrix factor);
    static SelfMap right_mul(Matrix factor);
    static SelfMap similarity(Matrix transform);

    /// Parses identity, inverse, transpose, conjugate-transpose (aliases:
    /// id, inv, t, adjoint, conjtranspose). Matrix-carrying maps cannot be
    /// parsed from a name alone.
    static SelfMap parse(std::string_view name);

    const Variant& variant() const noexcept { return variant_; }
    std::string name() const;
    bool is_identity() const noexcept { return std::holds_alternative<Identity>(variant_); }

private:
    explicit SelfMap(Variant v) : variant_(std::move(v)) {}
    Variant variant_;
};

/// Applies the map to an invertible matrix. Throws SingularMatrix when m
/// fails the invertibility gate and DimensionError on size mismatch with an
/// attached matrix.
Matrix apply_selfmap(const SelfMap& f, const Matrix& m);

} // namespace genspec
