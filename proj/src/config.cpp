/*
Copyright 2026 The guhjbi Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

     https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "guhjbi/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace guhjbi {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.contains(it.key())) {
      throw Error(ErrorCode::InvalidConfig, "unknown key '" + it.key() + "' in " + where);
    }
  }
}

double number_from_json(const json& j, const char* name) {
  if (!j.is_number()) {
    throw Error(ErrorCode::InvalidConfig, std::string(name) + " must be a number");
  }
  return j.get<double>();
}

const json& required(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw Error(ErrorCode::InvalidConfig, std::string("missing required key '") + key + "'");
  }
  return j.at(key);
}

}  // namespace

json matrix_to_json(const Matrix& X) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < X.cols(); ++j) row.push_back(X(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, const char* name) {
  if (j.is_number()) return Matrix::Constant(1, 1, j.get<double>());
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorCode::InvalidConfig, std::string(name) + " must be a nested row-major array");
  }
  const std::size_t rows = j.size();
  if (!j.front().is_array() || j.front().empty()) {
    throw Error(ErrorCode::InvalidConfig, std::string(name) + " rows must be arrays");
  }
  const std::size_t cols = j.front().size();
  Matrix X(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.size() != cols) {
      throw Error(ErrorCode::DimensionMismatch, std::string(name) + " has ragged rows");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = number_from_json(row[c], name);
    }
  }
  return X;
}

json to_json(const LQProblem& p) {
  return json{{"A", matrix_to_json(p.A)},     {"B", matrix_to_json(p.B)},
              {"Sigma", matrix_to_json(p.Sigma)}, {"Q", matrix_to_json(p.Q)},
              {"R", matrix_to_json(p.R)},     {"rho", p.rho},
              {"eta", p.eta}};
}

json to_json(const UncertaintyGeometry& g) {
  json j{{"kind", std::string(to_string(g.kind))}, {"epsilon", g.epsilon}};
  if (g.kind == GeometryKind::Ellipsoid) j["M"] = matrix_to_json(g.M);
  return j;
}

json to_json(const Grid& grid) {
  json bounds = json::array();
  json counts = json::array();
  for (const Axis& ax : grid.axes()) {
    bounds.push_back(json::array({ax.lo, ax.hi}));
    counts.push_back(ax.n_points);
  }
  return json{{"bounds", bounds}, {"n_points", counts}};
}

json to_json(const ProblemConfig& config) {
  json j = to_json(config.problem);
  if (config.geometry) j["geometry"] = to_json(*config.geometry);
  if (config.grid) j["grid"] = to_json(*config.grid);
  return j;
}

json to_json(const RiccatiSolution& s) {
  return json{{"P0", matrix_to_json(s.P0)},
              {"c0", s.c0},
              {"A_cl", matrix_to_json(s.A_cl)},
              {"A_eff", matrix_to_json(s.A_eff)},
              {"residual", s.residual}};
}

Grid grid_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "grid must be an object");
  reject_unknown_keys(j, {"bounds", "n_points"}, "grid");
  const json& bounds = required(j, "bounds");
  const json& counts = required(j, "n_points");
  if (!bounds.is_array() || !counts.is_array() || bounds.size() != counts.size()) {
    throw Error(ErrorCode::InvalidConfig, "grid.bounds and grid.n_points must be arrays of equal length");
  }
  std::vector<Axis> axes;
  for (std::size_t d = 0; d < bounds.size(); ++d) {
    const json& b = bounds[d];
    if (!b.is_array() || b.size() != 2) {
      throw Error(ErrorCode::InvalidConfig, "each grid bound must be [lo, hi]");
    }
    if (!counts[d].is_number_integer() || counts[d].get<long long>() < 0) {
      throw Error(ErrorCode::InvalidConfig, "grid.n_points entries must be positive integers");
    }
    axes.push_back(Axis{number_from_json(b[0], "grid.bounds"), number_from_json(b[1], "grid.bounds"),
                        counts[d].get<std::size_t>()});
  }
  try {
    return Grid(std::move(axes));
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("grid: ") + e.what());
  }
}

UncertaintyGeometry geometry_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "geometry must be an object");
  reject_unknown_keys(j, {"kind", "epsilon", "M"}, "geometry");
  const json& kind = required(j, "kind");
  if (!kind.is_string()) throw Error(ErrorCode::InvalidConfig, "geometry.kind must be a string");
  UncertaintyGeometry g;
  g.kind = parse_geometry_kind(kind.get<std::string>());
  g.epsilon = number_from_json(required(j, "epsilon"), "geometry.epsilon");
  if (g.kind == GeometryKind::Ellipsoid) {
    g.M = matrix_from_json(required(j, "M"), "geometry.M");
  } else if (j.contains("M")) {
    throw Error(ErrorCode::InvalidConfig, "geometry.M is only valid for kind 'ellipsoid'");
  }
  return g;
}

ProblemConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
  reject_unknown_keys(j, {"A", "B", "Sigma", "Q", "R", "rho", "eta", "geometry", "grid"},
                      "config");

  ProblemConfig config;
  LQProblem& p = config.problem;
  p.A = matrix_from_json(required(j, "A"), "A");
  p.B = matrix_from_json(required(j, "B"), "B");
  p.Sigma = matrix_from_json(required(j, "Sigma"), "Sigma");
  p.Q = matrix_from_json(required(j, "Q"), "Q");
  p.R = matrix_from_json(required(j, "R"), "R");
  p.rho = number_from_json(required(j, "rho"), "rho");
  p.eta = number_from_json(required(j, "eta"), "eta");
  if (j.contains("geometry")) config.geometry = geometry_from_json(j.at("geometry"));
  if (j.contains("grid")) config.grid = grid_from_json(j.at("grid"));
  return config;
}

ProblemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::InvalidConfig, "cannot open config file '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace guhjbi
