// Copyright 2026 The FockForge Authors
//
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

#include "fockforge/core.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace fockforge {

/// Outcome of one verification run.
///
/// `residuals` and `fidelities` decide `passed`. `diagnostics` carries
/// informational values (negative-control magnitudes, padding sizes) that
/// never affect the verdict, and `warnings` carries cutoff-adequacy notes.
struct Report {
  std::string name;
  std::vector<PolarParam> params;
  std::size_t n_max = 0;
  std::size_t margin = 0;
  std::map<std::string, double> residuals;
  std::map<std::string, double> fidelities;
  std::map<std::string, double> diagnostics;
  std::vector<std::string> warnings;
  double tolerance = kDefaultTolerances.fidelity_deficit;
  bool passed = false;

  /// passed <=> every residual <= tolerance and every 1 - fidelity <= tolerance.
  Report& finalize() {
    passed = true;
    for (const auto& [_, r] : residuals) {
      if (!(r <= tolerance)) passed = false;
    }
    for (const auto& [_, f] : fidelities) {
      if (!(1.0 - f <= tolerance)) passed = false;
    }
    return *this;
  }
};

inline nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  auto params = nlohmann::ordered_json::array();
  for (const auto& p : r.params) {
    params.push_back({{"re", p.value().real()}, {"im", p.value().imag()}});
  }
  j["params"] = std::move(params);
  j["n_max"] = r.n_max;
  j["margin"] = r.margin;
  j["residuals"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.residuals) j["residuals"][k] = v;
  j["fidelities"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.fidelities) j["fidelities"][k] = v;
  j["tolerance"] = r.tolerance;
  j["passed"] = r.passed;
  return j;
}

inline Report report_from_json(const nlohmann::ordered_json& j) {
  Report r;
  r.name = j.at("name").get<std::string>();
  for (const auto& p : j.at("params")) {
    r.params.push_back(
        PolarParam::from_complex(cplx{p.at("re").get<double>(), p.at("im").get<double>()}));
  }
  r.n_max = j.at("n_max").get<std::size_t>();
  r.margin = j.at("margin").get<std::size_t>();
  for (const auto& [k, v] : j.at("residuals").items()) r.residuals[k] = v.get<double>();
  for (const auto& [k, v] : j.at("fidelities").items()) r.fidelities[k] = v.get<double>();
  r.tolerance = j.at("tolerance").get<double>();
  r.passed = j.at("passed").get<bool>();
  return r;
}

}  // namespace fockforge
