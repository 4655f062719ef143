#include "msl/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace msl::io {

json to_json(const algebra::HyperfiniteSpec& spec) {
  json blocks = json::array();
  for (const auto& b : spec.blocks) {
    blocks.push_back({{"dim", b.dim}, {"weight", to_fraction_string(b.weight)}});
  }
  return {{"diffuse_weight", to_fraction_string(spec.diffuse_weight)},
          {"blocks", blocks},
          {"infinite_part", spec.has_infinite_part}};
}

algebra::HyperfiniteSpec hyperfinite_spec_from_json(const json& j) {
  Rational diffuse = j.contains("diffuse_weight")
                         ? rational_from_string(j.at("diffuse_weight").get<std::string>())
                         : Rational(0);
  std::vector<algebra::HyperfiniteSpec::Block> blocks;
  for (const auto& b : j.at("blocks")) {
    blocks.push_back({b.at("dim").get<int>(),
                      rational_from_string(b.at("weight").get<std::string>())});
  }
  bool infinite = j.value("infinite_part", false);
  return algebra::HyperfiniteSpec(diffuse, std::move(blocks), infinite);
}

json to_json(const algebra::FiniteDimAlgebra& a) {
  json blocks = json::array();
  for (int j = 0; j < a.num_blocks(); ++j) {
    blocks.push_back(
        {{"dim", a.block_dims[j]}, {"weight", to_fraction_string(a.block_weights[j])}});
  }
  return {{"blocks", blocks}};
}

algebra::FiniteDimAlgebra finite_dim_algebra_from_json(const json& j) {
  std::vector<int> dims;
  std::vector<Rational> weights;
  for (const auto& b : j.at("blocks")) {
    dims.push_back(b.at("dim").get<int>());
    weights.push_back(rational_from_string(b.at("weight").get<std::string>()));
  }
  return algebra::FiniteDimAlgebra(std::move(dims), std::move(weights));
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  json j;
  in >> j;
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << content;
}

algebra::FiniteDimAlgebra algebra_from_file(const std::string& path) {
  json j = load_json_file(path);
  if (j.contains("diffuse_weight")) {
    Rational diffuse = rational_from_string(j.at("diffuse_weight").get<std::string>());
    if (diffuse != 0) {
      throw std::runtime_error(path + ": diffuse mass present, not a finite dimensional algebra");
    }
  }
  return finite_dim_algebra_from_json(j);
}

algebra::HyperfiniteSpec hyperfinite_spec_from_file(const std::string& path) {
  return hyperfinite_spec_from_json(load_json_file(path));
}

json to_json(const Matrix& m) {
  json rows = json::array();
  for (long r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (long c = 0; c < m.cols(); ++c) {
      row.push_back({m(r, c).real(), m(r, c).imag()});
    }
    rows.push_back(row);
  }
  return {{"k", m.rows()}, {"entries", rows}};
}

Matrix matrix_from_json(const json& j) {
  long k = j.at("k").get<long>();
  const auto& entries = j.at("entries");
  if (static_cast<long>(entries.size()) != k) throw std::runtime_error("bad matrix row count");
  Matrix m(k, k);
  for (long r = 0; r < k; ++r) {
    const auto& row = entries.at(r);
    if (static_cast<long>(row.size()) != k) throw std::runtime_error("bad matrix column count");
    for (long c = 0; c < k; ++c) {
      m(r, c) = Complex(row.at(c).at(0).get<double>(), row.at(c).at(1).get<double>());
    }
  }
  return m;
}

json to_json(const std::vector<Matrix>& tuple) {
  json out = json::array();
  for (const auto& m : tuple) out.push_back(to_json(m));
  return out;
}

std::vector<Matrix> tuple_from_json(const json& j) {
  std::vector<Matrix> out;
  for (const auto& m : j) out.push_back(matrix_from_json(m));
  return out;
}

json to_json(const embed::EmbeddingReport& report) {
  json subgroup = json::array();
  for (const auto& f : report.subgroup.factors) {
    subgroup.push_back({{"mult", f.mult}, {"size", f.size}});
  }
  return {{"k", report.representation.k()},
          {"multiplicities", report.representation.multiplicities},
          {"null_dim", report.representation.null_dim},
          {"trace_error", report.trace_error},
          {"subgroup_factors", subgroup},
          {"subgroup_dim", report.subgroup.dim()},
          {"quotient_dim", report.quotient_dim},
          {"lower_bound", report.lower_bound},
          {"upper_bound", report.upper_bound},
          {"k0", report.k0},
          {"below_threshold", report.below_threshold}};
}

std::string to_csv(const geometry::PackingResult& result) {
  std::ostringstream out;
  out << "epsilon,pack_count,cover_count\n";
  char buf[64];
  for (std::size_t i = 0; i < result.epsilons.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.12g", result.epsilons[i]);
    out << buf << "," << result.packing_counts[i] << "," << result.covering_counts[i] << "\n";
  }
  return out.str();
}

}  // namespace msl::io
