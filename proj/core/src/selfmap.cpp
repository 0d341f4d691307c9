#include <genspec/selfmap.hpp>

#include <algorithm>
#include <cctype>

#include <genspec/error.hpp>

namespace genspec {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_gate(const Matrix& m, const char* what) {
    if (!m.is_square()) throw DimensionError(std::string(what) + ": attached matrix must be square");
    // invert() throws SingularMatrix with the singular values attached.
    (void)invert(m);
}

} // namespace

SelfMap SelfMap::left_mul(Matrix factor) {
    require_gate(factor, "left_mul");
    return SelfMap(LeftMul{std::move(factor)});
}

SelfMap SelfMap::right_mul(Matrix factor) {
    require_gate(factor, "right_mul");
    return SelfMap(RightMul{std::move(factor)});
}

SelfMap SelfMap::similarity(Matrix transform) {
    if (!transform.is_square()) throw DimensionError("similarity: attached matrix must be square");
    Matrix transform_inverse = genspec::inverse(transform);
    return SelfMap(Similarity{std::move(transform), std::move(transform_inverse)});
}

SelfMap SelfMap::parse(std::string_view name) {
    std::string key(name);
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "identity" || key == "id") return identity();
    if (key == "inverse" || key == "inv") return inverse();
    if (key == "transpose" || key == "t") return transpose();
    if (key == "conjugate-transpose" || key == "conjtranspose" || key == "adjoint" || key == "h")
        return conjugate_transpose();
    throw PreconditionError("unknown self-map '" + std::string(name) + "'");
}

std::string SelfMap::name() const {
    return std::visit(Overloaded{
                          [](const Identity&) { return std::string("identity"); },
                          [](const Inverse&) { return std::string("inverse"); },
                          [](const Transpose&) { return std::string("transpose"); },
                          [](const ConjugateTranspose&) { return std::string("conjugate-transpose"); },
                          [](const LeftMul&) { return std::string("left-mul"); },
                          [](const RightMul&) { return std::string("right-mul"); },
                          [](const Similarity&) { return std::string("similarity"); },
                      },
                      variant_);
}

Matrix apply_selfmap(const SelfMap& f, const Matrix& m) {
    if (!m.is_square()) throw DimensionError("apply_selfmap: expected a square matrix");
    if (std::holds_alternative<SelfMap::Inverse>(f.variant())) return inverse(m);
    if (!passes_invertibility_gate(m)) {
        const auto s = singular_values(m);
        throw SingularMatrix("apply_selfmap: argument is not invertible", s.back(), s.front());
    }
    return std::visit(Overloaded{
                          [&](const SelfMap::Identity&) { return m; },
                          [&](const SelfMap::Inverse&) { return genspec::inverse(m); },
                          [&](const SelfMap::Transpose&) { return m.transpose(); },
                          [&](const SelfMap::ConjugateTranspose&) { return m.adjoint(); },
                          [&](const SelfMap::LeftMul& map) { return multiply(map.factor, m); },
                          [&](const SelfMap::RightMul& map) { return multiply(m, map.factor); },
                          [&](const SelfMap::Similarity& map) {
                              return multiply(multiply(map.transform, m), map.transform_inverse);
                          },
                      },
                      f.variant());
}

} // namespace genspec
