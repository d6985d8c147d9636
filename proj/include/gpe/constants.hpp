// Copyright 2026 The gpe Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// SI constants used at the models boundary. Everything inside the dynamics
// runs in natural units (hbar = 1, detector frequency of order 1).

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "gpe/error.hpp"

namespace gpe {

struct PhysicalConstants {
  double c;     // speed of light, m/s
  double G;     // Newtonian constant, m^3 kg^-1 s^-2
  double hbar;  // reduced Planck constant, J s
  std::string version;

  // Canonical text used for hashing and manifests. Stable across platforms
  // because every value is printed with 17 significant digits.
  std::string canonical_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "version=" << version << ";c=" << c << ";G=" << G << ";hbar=" << hbar;
    return os.str();
  }

  void validate() const {
    detail::require(c > 0 && G > 0 && hbar > 0 && std::isfinite(c) && std::isfinite(G) &&
                        std::isfinite(hbar),
                    "physical constants must be finite and positive");
  }
};

/// CODATA 2018 recommended values.
inline PhysicalConstants codata2018() {
  return {299792458.0, 6.67430e-11, 1.054571817e-34, "CODATA-2018"};
}

inline constexpr const char* kConstantsOverrideEnv = "GPE_CONSTANTS_FILE";

// Loads the override table named by GPE_CONSTANTS_FILE if it is set; testing
// only. The file is a JSON object with keys "c", "G", "hbar".
inline PhysicalConstants active_constants() {
  const char* path = std::getenv(kConstantsOverrideEnv);
  if (path == nullptr || *path == '\0') return codata2018();
  std::ifstream in(path);
  if (!in) throw DomainError(std::string("cannot open constants override ") + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("constants override is not valid JSON: ") + e.what());
  }
  PhysicalConstants k = codata2018();
  detail::require(j.is_object(), "constants override must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    detail::require(value.is_number(), "constants override value for " + key + " must be a number");
    if (key == "c") k.c = value.get<double>();
    else if (key == "G") k.G = value.get<double>();
    else if (key == "hbar") k.hbar = value.get<double>();
    else throw DomainError("unknown key in constants override: " + key);
  }
  k.version = std::string("override:") + path;
  k.validate();
  return k;
}

}  // namespace gpe
