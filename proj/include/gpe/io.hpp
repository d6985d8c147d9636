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

// CSV and JSON serialization of run outputs. Column orders
// are fixed and documented in docs/formats.md; floats are written with 17
// significant digits so that output round-trips and is byte-reproducible.

#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpe/analysis.hpp"
#include "gpe/dynamics.hpp"
#include "gpe/models.hpp"

namespace gpe::io {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return {buf, res.ptr};
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + '"';
}

// JSON numbers cannot be NaN; map them to null.
inline nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

inline constexpr const char* kLedgerHeader =
    "t,e_classical,e_quantum_free,e_interaction,e_total,energy_std,norm,excitation,"
    "transition_probability,x,p,power_residual";

inline void write_ledger_csv(std::ostream& os, const EnergyLedger& led, const Trajectory& traj,
                             const ModelSpec& model, const TransitionTarget& target) {
  const ModelSpec m = resolved_model(model);
  std::optional<Operator> excitation;
  if (m.is_full_quantum()) excitation = excitation_number(m);
  const auto probs = transition_probability(traj, target);
  os << kLedgerHeader << '\n';
  for (std::size_t k = 0; k < led.size(); ++k) {
    const auto& s = traj.states[k];
    const double exc = excitation ? expectation(*excitation, s).real() : kNaN;
    const double x = traj.classical ? (*traj.classical)[k].x : kNaN;
    const double p = traj.classical ? (*traj.classical)[k].p : kNaN;
    const double res = led.power_residual.empty() ? kNaN : led.power_residual[k];
    os << format_double(led.times[k]) << ',' << format_double(led.e_classical[k]) << ','
       << format_double(led.e_quantum_free[k]) << ',' << format_double(led.e_interaction[k]) << ','
       << format_double(led.e_total[k]) << ',' << format_double(led.energy_std[k]) << ','
       << format_double(s.norm()) << ',' << format_double(exc) << ',' << format_double(probs[k])
       << ',' << format_double(x) << ',' << format_double(p) << ',' << format_double(res) << '\n';
  }
}

inline constexpr const char* kScanHeader = "axis_value,probability,reference,detector_gap,status";

inline void write_scan_csv(std::ostream& os, const ScanResult& s) {
  os << "# axis=" << s.axis << " model=" << s.model_tag;
  for (const auto& [k, v] : s.fixed_parameters) os << ' ' << k << '=' << format_double(v);
  os << '\n' << kScanHeader << '\n';
  for (std::size_t i = 0; i < s.size(); ++i) {
    os << format_double(s.axis_values[i]) << ',' << format_double(s.probability[i]) << ','
       << format_double(s.reference[i]) << ',' << format_double(s.detector_gap[i]) << ','
       << (s.ok(i) ? std::string("ok") : csv_escape(s.errors[i])) << '\n';
  }
}

inline constexpr const char* kDysonHeader = "t,closed_form,double_integral,exact";

struct DysonRow {
  double t;
  DysonResult dyson;
  double exact;
};

inline void write_dyson_csv(std::ostream& os, const std::vector<DysonRow>& rows) {
  os << kDysonHeader << '\n';
  for (const auto& r : rows) {
    os << format_double(r.t) << ',' << format_double(r.dyson.closed_form) << ','
       << format_double(r.dyson.double_integral) << ',' << format_double(r.exact) << '\n';
  }
}

inline nlohmann::json to_json(const SignatureCheck& c) {
  return {{"verdict", to_string(c.verdict)},
          {"statistic", json_number(c.statistic)},
          {"tolerance", json_number(c.tolerance)},
          {"detail", c.detail}};
}

inline nlohmann::json to_json(const SignatureReport& r) {
  return {{"model", r.model_tag},
          {"threshold", to_json(r.threshold)},
          {"intensity_independence", to_json(r.intensity_independence)},
          {"short_time", to_json(r.short_time)},
          {"all_passed", r.all_passed()}};
}

inline nlohmann::json to_json(const DeficitReport& d) {
  return {{"transition_probability", json_number(d.transition_probability)},
          {"energy_before", json_number(d.energy_before)},
          {"energy_after", json_number(d.energy_after)},
          {"deficit", json_number(d.deficit)},
          {"field_quantum", json_number(d.field_quantum)},
          {"detector_quantum", json_number(d.detector_quantum)},
          {"e_diff", json_number(d.e_diff)}};
}

inline nlohmann::json to_json(const PowerLawFit& f) {
  return {{"slope", json_number(f.slope)},
          {"intercept", json_number(f.intercept)},
          {"slope_stderr", json_number(f.slope_stderr)},
          {"points", f.points}};
}

}  // namespace gpe::io
