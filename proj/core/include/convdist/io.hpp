// Copyright 2026 The convdist Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// JSON forms of measures and results.
//
// Measure files are either a grid
//   {"dim": 1|2, "step": [h...], "offset": [o...], "masses": [[...]]}
// (1D masses may also be a flat array; 2D rows run along axis 0) or a point
// set {"points": [[x...]...], "masses": [...]}. Masses must sum to one
// within 1e-9.

#include <istream>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "convdist/measure.hpp"
#include "convdist/metrics.hpp"
#include "convdist/prokhorov.hpp"

namespace convdist {

using MeasureFile = std::variant<LatticeMeasure, FiniteMeasure>;

MeasureFile measure_from_json(const nlohmann::json& j);
MeasureFile read_measure_file(const std::string& path);

// Places a point set on the coarsest uniform grid containing it. Fails when
// the coordinates are not commensurable or the grid would exceed the budget.
LatticeMeasure lattice_from_points(const FiniteMeasure& f,
                                   std::size_t cell_budget = kDefaultCellBudget);

nlohmann::json to_json(const LatticeMeasure& m);
nlohmann::json to_json(const FiniteMeasure& m);
nlohmann::json to_json(const Witness& w);
nlohmann::json to_json(const DistanceReport& r);
nlohmann::json to_json(const CouplingPlan& p);
nlohmann::json to_json(const ProkhorovResult& r);

}  // namespace convdist
