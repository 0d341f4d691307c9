#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <genspec/matrix.hpp>

namespace genspec {

/// On-disk matrix formats.
///
/// MatrixMarket: dense "array" layout, header
///   %%MatrixMarket matrix array {real|complex} general
/// followed by "rows cols" and the entries in column-major order, one entry
/// per line ("re" or "re im").
///
/// Json: {"field":"real"|"complex","rows":m,"cols":n,"data":[[re,im],...]}
/// with data in row-major order.
enum class MatrixFormat { MatrixMarket, Json };

std::string_view to_string(MatrixFormat format) noexcept;
/// Accepts "mm" / "matrixmarket" and "json".
MatrixFormat parse_format(std::string_view text);

Matrix parse_matrix_market(std::istream& in);
void write_matrix_market(const Matrix& m, std::ostream& out);

Matrix parse_matrix_json(std::string_view text);
std::string matrix_json_string(const Matrix& m);

Matrix read_matrix(const std::filesystem::path& path, MatrixFormat format);
void write_matrix(const Matrix& m, const std::filesystem::path& path, MatrixFormat format);

} // namespace genspec
