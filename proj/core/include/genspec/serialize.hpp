#pragma once

#include <nlohmann/json.hpp>

#include <genspec/kron.hpp>
#include <genspec/matrix.hpp>
#include <genspec/perturb.hpp>
#include <genspec/spectra.hpp>

namespace genspec {

/// JSON documents keep the documented key order.
using Json = nlohmann::ordered_json;

/// Non-finite values serialize as null.
Json to_json(double value);
Json to_json(Scalar value);
Json to_json(const Matrix& m);
Json to_json(const SpectrumReport& report);
Json to_json(const SelfMap& map);
Json to_json(const PerturbTrace& trace);
Json to_json(const PerturbOutcome& outcome);
Json to_json(const KronSumDecomposition& decomposition);
Json to_json(const KronRankReport& report);

Matrix matrix_from_json(const Json& doc);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& doc);

} // namespace genspec
