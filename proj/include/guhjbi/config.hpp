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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "guhjbi/core_types.hpp"

namespace guhjbi {

/// Contents of a problem config document.
///
///   {
///     "A": [[...]], "B": [[...]], "Sigma": [[...]], "Q": [[...]], "R": [[...]],
///     "rho": 0.1, "eta": 0.2,
///     "geometry": {"kind": "ball2", "epsilon": 0.5, "M": [[...]]},
///     "grid": {"bounds": [[-10, 10]], "n_points": [2001]}
///   }
///
/// Matrices are nested row-major arrays; a bare number is accepted for 1x1.
/// The geometry and grid blocks are optional. Unknown keys are rejected.
struct ProblemConfig {
  LQProblem problem;
  std::optional<UncertaintyGeometry> geometry;
  std::optional<Grid> grid;
};

ProblemConfig parse_config(std::string_view text);
ProblemConfig load_config(const std::filesystem::path& path);

nlohmann::json matrix_to_json(const Matrix& X);
Matrix matrix_from_json(const nlohmann::json& j, const char* name);

nlohmann::json to_json(const LQProblem& problem);
nlohmann::json to_json(const UncertaintyGeometry& geometry);
nlohmann::json to_json(const Grid& grid);
nlohmann::json to_json(const ProblemConfig& config);
nlohmann::json to_json(const RiccatiSolution& solution);

Grid grid_from_json(const nlohmann::json& j);
UncertaintyGeometry geometry_from_json(const nlohmann::json& j);

}  // namespace guhjbi
