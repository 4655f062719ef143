#pragma once

#include "msl/algebra.hpp"
#include "msl/block_matrix.hpp"
#include "msl/embed.hpp"
#include "msl/geometry.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace msl::io {

using nlohmann::json;

/// Weights serialize as exact fraction strings ("1/3"), never decimals.
json to_json(const algebra::HyperfiniteSpec& spec);
algebra::HyperfiniteSpec hyperfinite_spec_from_json(const json& j);

json to_json(const algebra::FiniteDimAlgebra& a);
algebra::FiniteDimAlgebra finite_dim_algebra_from_json(const json& j);

/// Reads either document shape: a plain block list is a finite dimensional
/// algebra, a document with a diffuse weight is truncated to its matrix
/// blocks (rejecting nonzero diffuse mass).
algebra::FiniteDimAlgebra algebra_from_file(const std::string& path);
algebra::HyperfiniteSpec hyperfinite_spec_from_file(const std::string& path);

/// Matrix wire format: {"k": 4, "entries": [[[re, im], ...], ...]}.
json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

json to_json(const std::vector<Matrix>& tuple);
std::vector<Matrix> tuple_from_json(const json& j);

json to_json(const embed::EmbeddingReport& report);

std::string to_csv(const geometry::PackingResult& result);

json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace msl::io
