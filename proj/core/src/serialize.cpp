#include <genspec/serialize.hpp>

#include <cmath>

#include <genspec/error.hpp>

namespace genspec {

Json to_json(double value) {
    if (!std::isfinite(value)) return nullptr;
    return value;
}

Json to_json(Scalar value) { return Json::array({to_json(value.real()), to_json(value.imag())}); }

Json to_json(const Matrix& m) {
    Json data = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) data.push_back(to_json(m(i, j)));
    Json doc;
    doc["field"] = std::string(to_string(m.field()));
    doc["rows"] = m.rows();
    doc["cols"] = m.cols();
    doc["data"] = std::move(data);
    return doc;
}

Json to_json(const SpectrumReport& report) {
    Json eigenvalues = Json::array();
    for (const Scalar& lambda : report.eigenvalues) eigenvalues.push_back(to_json(lambda));
    Json doc;
    doc["eigenvalues"] = std::move(eigenvalues);
    doc["min_gap"] = to_json(report.min_gap);
    doc["is_simple"] = report.is_simple;
    doc["is_invertible"] = report.is_invertible;
    doc["eig_condition"] = report.eig_condition ? to_json(*report.eig_condition) : Json(nullptr);
    doc["safe_radius"] = to_json(report.safe_radius);
    doc["gap_tol_used"] = to_json(report.gap_tol_used);
    return doc;
}

Json to_json(const SelfMap& map) {
    Json doc;
    doc["kind"] = map.name();
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SelfMap::LeftMul> || std::is_same_v<T, SelfMap::RightMul>) {
                doc["matrix"] = to_json(v.factor);
            } else if constexpr (std::is_same_v<T, SelfMap::Similarity>) {
                doc["matrix"] = to_json(v.transform);
            }
        },
        map.variant());
    return doc;
}

Json to_json(const PerturbTrace& trace) {
    Json rounds = Json::array();
    for (const auto& round : trace.rounds) {
        Json stage1 = Json::array();
        for (const auto& record : round.stage1) {
            Json item;
            item["index"] = record.index;
            item["budget"] = to_json(record.budget);
            item["attempts"] = record.attempts;
            item["delta"] = to_json(record.delta);
            item["result"] = record.result ? to_json(*record.result) : Json(nullptr);
            stage1.push_back(std::move(item));
        }
        Json stage2 = Json::array();
        for (const auto& attempt : round.stage2) {
            Json item;
            item["attempt"] = attempt.attempt;
            item["radius"] = to_json(attempt.radius);
            item["step"] = to_json(attempt.step);
            item["status"] = std::string(to_string(attempt.status));
            stage2.push_back(std::move(item));
        }
        Json item;
        item["round"] = round.round;
        item["stage1"] = std::move(stage1);
        item["initial_radius"] = to_json(round.initial_radius);
        item["stage2"] = std::move(stage2);
        rounds.push_back(std::move(item));
    }
    Json doc;
    doc["designated"] = trace.designated;
    doc["rounds"] = std::move(rounds);
    return doc;
}

Json to_json(const PerturbOutcome& outcome) {
    Json doc;
    Json perturbed = Json::array();
    for (const auto& m : outcome.perturbed) perturbed.push_back(to_json(m));
    Json deltas = Json::array();
    for (double delta : outcome.deltas) deltas.push_back(to_json(delta));
    Json maps = Json::array();
    for (const auto& f : outcome.maps) maps.push_back(to_json(f));
    Json reports = Json::array();
    for (const auto& report : outcome.per_matrix_reports) reports.push_back(to_json(report));

    doc["perturbed"] = std::move(perturbed);
    doc["deltas"] = std::move(deltas);
    doc["maps"] = std::move(maps);
    doc["product"] = to_json(outcome.product);
    doc["product_report"] = to_json(outcome.product_report);
    doc["per_matrix_reports"] = std::move(reports);
    doc["attempts_used"] = outcome.attempts_used;
    doc["trace"] = to_json(outcome.trace);
    return doc;
}

Json to_json(const KronSumDecomposition& decomposition) {
    Json terms = Json::array();
    for (const auto& term : decomposition.terms) {
        Json item;
        item["L"] = to_json(term.left);
        item["R"] = to_json(term.right);
        terms.push_back(std::move(item));
    }
    Json doc;
    doc["p"] = decomposition.p;
    doc["q"] = decomposition.q;
    doc["terms"] = std::move(terms);
    return doc;
}

Json to_json(const KronRankReport& report) {
    Json values = Json::array();
    for (double s : report.singular_values) values.push_back(to_json(s));
    Json doc;
    doc["singular_values"] = std::move(values);
    doc["numeric_rank"] = report.numeric_rank;
    doc["tol_used"] = to_json(report.tol_used);
    return doc;
}

namespace {

double number_at(const Json& value, const std::string& where) {
    if (!value.is_number()) throw ParseError(where + ": expected a number", 0, 0);
    return value.get<double>();
}

std::size_t dimension_at(const Json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_number_unsigned() || doc[key].get<std::size_t>() == 0)
        throw ParseError(std::string("matrix JSON: '") + key + "' must be a positive integer", 0, 0);
    return doc[key].get<std::size_t>();
}

} // namespace

Matrix matrix_from_json(const Json& doc) {
    if (!doc.is_object()) throw ParseError("matrix JSON: expected an object", 0, 0);
    if (!doc.contains("field") || !doc["field"].is_string())
        throw ParseError("matrix JSON: 'field' must be \"real\" or \"complex\"", 0, 0);
    const std::string field_name = doc["field"].get<std::string>();
    if (field_name != "real" && field_name != "complex")
        throw ParseError("matrix JSON: 'field' must be \"real\" or \"complex\"", 0, 0);
    const Field field = parse_field(field_name);
    const std::size_t rows = dimension_at(doc, "rows");
    const std::size_t cols = dimension_at(doc, "cols");

    if (!doc.contains("data") || !doc["data"].is_array()) throw ParseError("matrix JSON: 'data' must be an array", 0, 0);
    const auto& data = doc["data"];
    if (data.size() != rows * cols)
        throw ParseError("matrix JSON: header declares " + std::to_string(rows * cols) + " entries, data has " +
                             std::to_string(data.size()),
                         0, 0);

    DenseValues values(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t k = 0; k < data.size(); ++k) {
        const auto& entry = data[k];
        const std::string where = "matrix JSON: data[" + std::to_string(k) + "]";
        if (!entry.is_array() || entry.size() != 2) throw ParseError(where + ": expected [re, im]", 0, 0);
        const double re = number_at(entry[0], where);
        const double im = number_at(entry[1], where);
        if (field == Field::Real && im != 0.0)
            throw ParseError(where + ": nonzero imaginary part in a real matrix", 0, 0);
        values(static_cast<Eigen::Index>(k / cols), static_cast<Eigen::Index>(k % cols)) = Scalar(re, im);
    }
    return Matrix(std::move(values), field);
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

} // namespace genspec
