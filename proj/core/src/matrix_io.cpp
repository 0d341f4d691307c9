#include <genspec/matrix_io.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <vector>

#include <genspec/error.hpp>
#include <genspec/serialize.hpp>

namespace genspec {

namespace {

struct Token {
    std::string_view text;
    std::size_t column; // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size()) break;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        tokens.push_back({line.substr(start, i - start), start + 1});
    }
    return tokens;
}

std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

double parse_double(const Token& token, std::size_t line) {
    double value = 0.0;
    const char* first = token.text.data();
    const char* last = first + token.text.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ParseError("invalid number '" + std::string(token.text) + "'", line, token.column);
    return value;
}

std::size_t parse_dimension(const Token& token, std::size_t line) {
    std::size_t value = 0;
    const char* first = token.text.data();
    const char* last = first + token.text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || value == 0)
        throw ParseError("invalid dimension '" + std::string(token.text) + "'", line, token.column);
    return value;
}

std::string format_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

// Maps a byte offset in `text` to a 1-based line/column pair.
std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

} // namespace

std::string_view to_string(MatrixFormat format) noexcept {
    return format == MatrixFormat::MatrixMarket ? "mm" : "json";
}

MatrixFormat parse_format(std::string_view text) {
    const std::string key = lower(text);
    if (key == "mm" || key == "matrixmarket" || key == "mtx") return MatrixFormat::MatrixMarket;
    if (key == "json") return MatrixFormat::Json;
    throw PreconditionError("unknown matrix format '" + std::string(text) + "' (expected mm or json)");
}

Matrix parse_matrix_market(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw ParseError("empty input, expected %%MatrixMarket header", 1, 1);
    ++line_no;
    const auto header = tokenize(line);
    if (header.empty() || header[0].text != "%%MatrixMarket")
        throw ParseError("expected %%MatrixMarket banner", line_no, 1);
    if (header.size() != 5) throw ParseError("banner must have 5 fields", line_no, header.back().column);
    if (lower(header[1].text) != "matrix")
        throw ParseError("unsupported object '" + std::string(header[1].text) + "'", line_no, header[1].column);
    if (lower(header[2].text) != "array")
        throw ParseError("only dense 'array' format is supported", line_no, header[2].column);

    const std::string field_name = lower(header[3].text);
    Field field = Field::Real;
    if (field_name == "complex") {
        field = Field::Complex;
    } else if (field_name != "real" && field_name != "integer" && field_name != "double") {
        throw ParseError("unsupported field '" + std::string(header[3].text) + "'", line_no, header[3].column);
    }
    if (lower(header[4].text) != "general")
        throw ParseError("only 'general' symmetry is supported", line_no, header[4].column);

    const std::size_t per_entry = field == Field::Complex ? 2 : 1;

    std::size_t rows = 0;
    std::size_t cols = 0;
    bool have_size = false;
    std::vector<Scalar> entries;
    std::size_t expected = 0;

    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = tokenize(line);
        if (tokens.empty() || tokens[0].text.front() == '%') continue;

        if (!have_size) {
            if (tokens.size() != 2)
                throw ParseError("size line must be 'rows cols'", line_no, tokens.front().column);
            rows = parse_dimension(tokens[0], line_no);
            cols = parse_dimension(tokens[1], line_no);
            expected = rows * cols;
            entries.reserve(expected);
            have_size = true;
            continue;
        }

        if (entries.size() == expected)
            throw ParseError("more entries than the " + std::to_string(rows) + "x" + std::to_string(cols) +
                                 " size header allows",
                             line_no, tokens.front().column);
        if (tokens.size() != per_entry)
            throw ParseError("expected " + std::to_string(per_entry) + " value(s) per entry", line_no,
                             tokens.front().column);
        const double re = parse_double(tokens[0], line_no);
        const double im = per_entry == 2 ? parse_double(tokens[1], line_no) : 0.0;
        entries.emplace_back(re, im);
    }

    if (!have_size) throw ParseError("missing size line", line_no + 1, 1);
    if (entries.size() != expected)
        throw ParseError("size header declares " + std::to_string(expected) + " entries, found " +
                             std::to_string(entries.size()),
                         line_no + 1, 1);

    DenseValues values(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    std::size_t k = 0;
    for (Eigen::Index j = 0; j < values.cols(); ++j)
        for (Eigen::Index i = 0; i < values.rows(); ++i) values(i, j) = entries[k++];
    return Matrix(std::move(values), field);
}

void write_matrix_market(const Matrix& m, std::ostream& out) {
    out << "%%MatrixMarket matrix array " << to_string(m.field()) << " general\n";
    out << m.rows() << ' ' << m.cols() << '\n';
    const auto& values = m.values();
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
        for (Eigen::Index i = 0; i < values.rows(); ++i) {
            out << format_double(values(i, j).real());
            if (!m.is_real()) out << ' ' << format_double(values(i, j).imag());
            out << '\n';
        }
    }
}

Matrix parse_matrix_json(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
        const auto [line, column] = locate(text, offset);
        throw ParseError("malformed JSON", line, column);
    }
    return matrix_from_json(doc);
}

std::string matrix_json_string(const Matrix& m) { return dump(to_json(m)); }

Matrix read_matrix(const std::filesystem::path& path, MatrixFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open matrix file '" + path.string() + "'");
    if (format == MatrixFormat::MatrixMarket) return parse_matrix_market(in);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_matrix_json(buffer.str());
}

void write_matrix(const Matrix& m, const std::filesystem::path& path, MatrixFormat format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
    if (format == MatrixFormat::MatrixMarket) {
        write_matrix_market(m, out);
    } else {
        out << matrix_json_string(m);
    }
    if (!out) throw InputError("failed writing '" + path.string() + "'");
}

} // namespace genspec
