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

// Config-driven scenario runner. A scenario is a JSON document (schema in
// docs/scenario.schema.json) that pairs one model and its evolution setup
// with optional scans and analyses. Parsing rejects unknown keys; validation
// also runs the physics-domain checks of every constructor so that `validate`
// fails exactly where `run` would.

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpe/analysis.hpp"
#include "gpe/constants.hpp"
#include "gpe/dynamics.hpp"
#include "gpe/error.hpp"
#include "gpe/io.hpp"
#include "gpe/models.hpp"

#ifndef GPE_VERSION
#define GPE_VERSION "0.0.0"
#endif

namespace gpe::scenario {

using nlohmann::json;

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i)
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return os.str();
}

struct ScanSpec {
  std::string axis;  // detuning | intensity | time | peak_detuning
  Axis range;
  std::size_t samples_per_period = 400;
};

struct Analyses {
  bool ledger = false;
  bool deficit = false;
  std::vector<double> dyson_times;
  bool signature_report = false;
  bool golden_rule_fit = false;
  bool gravito_constants = false;
};

struct Scenario {
  std::string name;
  std::string description;
  Experiment experiment;
  std::vector<ScanSpec> scans;
  Analyses analyses;
  std::string prefix;
  bool write_csv = true;
  bool write_json = true;
};

namespace detail {

using gpe::detail::require;

inline void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed,
                       std::initializer_list<const char*> required = {}) {
  require(obj.is_object(), where + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    require(ok.count(key) == 1, "unknown key '" + key + "' in " + where);
  }
  for (const char* key : required) {
    require(obj.contains(key), "missing required key '" + std::string(key) + "' in " + where);
  }
}

inline double number(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  require(v.is_number(), where + "." + key + " must be a number");
  return v.get<double>();
}

inline double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

inline Index integer(const json& obj, const char* key, const std::string& where) {
  const auto& v = obj.at(key);
  require(v.is_number_integer(), where + "." + key + " must be an integer");
  return v.get<Index>();
}

inline bool boolean_or(const json& obj, const char* key, bool fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  require(obj.at(key).is_boolean(), where + "." + key + " must be a boolean");
  return obj.at(key).get<bool>();
}

inline ModelSpec parse_model(const json& j) {
  check_keys(j, "model", {"family", "back_reaction", "params"}, {"family", "params"});
  require(j.at("family").is_string(), "model.family must be a string");
  const std::string family = j.at("family").get<std::string>();
  const json& p = j.at("params");
  const std::string w = "model.params";
  ModelSpec m;
  m.neo_classical = boolean_or(j, "back_reaction", false, "model");
  if (family == "driven_qubit") {
    check_keys(p, w, {"omega", "nu", "lambda", "x0"}, {"omega", "nu", "lambda", "x0"});
    m.params = QubitSemiClassicalParams{number(p, "omega", w), number(p, "nu", w),
                                        number(p, "lambda", w), number(p, "x0", w)};
  } else if (family == "jaynes_cummings") {
    check_keys(p, w, {"nu", "omega", "g", "field_cutoff", "counter_rotating_form"},
               {"nu", "omega", "g", "field_cutoff"});
    m.params = JaynesCummingsParams{number(p, "nu", w), number(p, "omega", w), number(p, "g", w),
                                    integer(p, "field_cutoff", w),
                                    boolean_or(p, "counter_rotating_form", false, w)};
  } else if (family == "beam_splitter") {
    check_keys(p, w, {"nu", "omega", "g", "field_cutoff", "detector_cutoff", "alpha", "tail_tolerance"},
               {"nu", "omega", "g", "field_cutoff", "detector_cutoff", "alpha"});
    BeamSplitterParams bs{number(p, "nu", w), number(p, "omega", w), number(p, "g", w),
                          integer(p, "field_cutoff", w), integer(p, "detector_cutoff", w)};
    const json& a = p.at("alpha");
    if (a.is_number()) {
      bs.alpha = a.get<double>();
    } else {
      require(a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number(),
              w + ".alpha must be a number or [re, im]");
      bs.alpha = Complex(a[0].get<double>(), a[1].get<double>());
    }
    bs.tail_tolerance = number_or(p, "tail_tolerance", 1e-12, w);
    m.params = bs;
  } else if (family == "driven_oscillator") {
    check_keys(p, w, {"omega", "nu", "lambda", "x0", "detector_cutoff"},
               {"omega", "nu", "lambda", "x0", "detector_cutoff"});
    m.params = DrivenOscillatorParams{number(p, "omega", w), number(p, "nu", w),
                                      number(p, "lambda", w), number(p, "x0", w),
                                      integer(p, "detector_cutoff", w)};
  } else if (family == "gravito") {
    check_keys(p, w, {"mass", "length", "nu", "omega0", "h0", "volume", "detector_cutoff"},
               {"mass", "length", "nu", "omega0", "h0", "volume"});
    GravitoParams g{number(p, "mass", w), number(p, "length", w), number(p, "nu", w),
                    number(p, "omega0", w), number(p, "h0", w), number(p, "volume", w)};
    if (p.contains("detector_cutoff")) g.detector_cutoff = integer(p, "detector_cutoff", w);
    m.params = g;
  } else {
    throw DomainError("unknown model.family '" + family + "'");
  }
  m.validate();
  return m;
}

inline Method parse_method(const std::string& s) {
  if (s == "matrix_exponential") return Method::MatrixExponential;
  if (s == "rk4") return Method::RK4;
  if (s == "midpoint") return Method::MidpointPiecewise;
  throw DomainError("unknown evolution.method '" + s + "'");
}

inline EvolutionConfig parse_evolution(const json& j) {
  check_keys(j, "evolution", {"dt", "t_max", "method", "norm_drift_tol", "top_level_tol", "record_stride"},
             {"dt", "t_max", "method"});
  EvolutionConfig c;
  c.dt = number(j, "dt", "evolution");
  c.t_max = number(j, "t_max", "evolution");
  require(j.at("method").is_string(), "evolution.method must be a string");
  c.method = parse_method(j.at("method").get<std::string>());
  c.norm_drift_tol = number_or(j, "norm_drift_tol", c.norm_drift_tol, "evolution");
  c.top_level_tol = number_or(j, "top_level_tol", c.top_level_tol, "evolution");
  if (j.contains("record_stride")) {
    const Index stride = integer(j, "record_stride", "evolution");
    require(stride >= 1, "evolution.record_stride must be >= 1");
    c.record_stride = static_cast<std::size_t>(stride);
  }
  c.validate();
  return c;
}

inline ScanSpec parse_scan(const json& j, std::size_t index) {
  const std::string w = "scans[" + std::to_string(index) + "]";
  check_keys(j, w, {"axis", "start", "stop", "points", "spacing", "samples_per_period"},
             {"axis", "start", "stop", "points"});
  ScanSpec s;
  require(j.at("axis").is_string(), w + ".axis must be a string");
  s.axis = j.at("axis").get<std::string>();
  require(s.axis == "detuning" || s.axis == "intensity" || s.axis == "time" || s.axis == "peak_detuning",
          "unknown " + w + ".axis '" + s.axis + "'");
  s.range.start = number(j, "start", w);
  s.range.stop = number(j, "stop", w);
  const Index points = integer(j, "points", w);
  require(points >= 2, w + ".points must be >= 2");
  s.range.points = static_cast<std::size_t>(points);
  if (j.contains("spacing")) {
    require(j.at("spacing").is_string(), w + ".spacing must be a string");
    const auto sp = j.at("spacing").get<std::string>();
    require(sp == "linear" || sp == "log", w + ".spacing must be 'linear' or 'log'");
    s.range.log_spacing = sp == "log";
  }
  if (j.contains("samples_per_period")) {
    require(s.axis == "peak_detuning", w + ".samples_per_period applies to peak_detuning only");
    const Index sp = integer(j, "samples_per_period", w);
    require(sp >= 16, w + ".samples_per_period must be >= 16");
    s.samples_per_period = static_cast<std::size_t>(sp);
  }
  s.range.validate();
  if (s.axis == "time" || s.axis == "intensity") {
    require(s.range.start > 0.0 && s.range.stop > 0.0, w + " needs positive bounds");
  }
  return s;
}

inline Analyses parse_analyses(const json& j) {
  check_keys(j, "analyses", {"ledger", "deficit", "dyson", "signature_report", "golden_rule_fit",
                             "gravito_constants"});
  Analyses a;
  a.ledger = boolean_or(j, "ledger", false, "analyses");
  a.deficit = boolean_or(j, "deficit", false, "analyses");
  a.signature_report = boolean_or(j, "signature_report", false, "analyses");
  a.golden_rule_fit = boolean_or(j, "golden_rule_fit", false, "analyses");
  a.gravito_constants = boolean_or(j, "gravito_constants", false, "analyses");
  if (j.contains("dyson")) {
    const json& d = j.at("dyson");
    check_keys(d, "analyses.dyson", {"times"}, {"times"});
    require(d.at("times").is_array() && !d.at("times").empty(), "analyses.dyson.times must be a non-empty array");
    for (const auto& t : d.at("times")) {
      require(t.is_number() && t.get<double>() > 0.0, "analyses.dyson.times entries must be > 0");
      a.dyson_times.push_back(t.get<double>());
    }
  }
  return a;
}

inline bool has_scan(const Scenario& s, const std::string& axis) {
  return std::any_of(s.scans.begin(), s.scans.end(), [&](const ScanSpec& x) { return x.axis == axis; });
}

}  // namespace detail

/// Parses and validates a scenario document. Throws DomainError on any schema
/// or physics-domain violation.
inline Scenario parse(const json& j) {
  using namespace detail;
  check_keys(j, "scenario", {"name", "description", "model", "initial_state", "evolution", "scans",
                             "analyses", "output"},
             {"name", "model", "evolution"});
  Scenario s;
  require(j.at("name").is_string() && !j.at("name").get<std::string>().empty(), "name must be a non-empty string");
  s.name = j.at("name").get<std::string>();
  require(s.name.find_first_of("/\\ ") == std::string::npos, "name must not contain spaces or slashes");
  if (j.contains("description")) {
    require(j.at("description").is_string(), "description must be a string");
    s.description = j.at("description").get<std::string>();
  }
  s.experiment.model = parse_model(j.at("model"));
  s.experiment.evolution = parse_evolution(j.at("evolution"));
  if (j.contains("initial_state")) {
    const json& is = j.at("initial_state");
    check_keys(is, "initial_state", {"field_fock"});
    if (is.contains("field_fock")) {
      const Index n = integer(is, "field_fock", "initial_state");
      require(n >= 0, "initial_state.field_fock must be >= 0");
      s.experiment.field_fock = n;
    }
  }
  if (j.contains("scans")) {
    require(j.at("scans").is_array(), "scans must be an array");
    for (std::size_t i = 0; i < j.at("scans").size(); ++i) s.scans.push_back(parse_scan(j.at("scans")[i], i));
  }
  if (j.contains("analyses")) s.analyses = parse_analyses(j.at("analyses"));
  s.prefix = s.name;
  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, "output", {"prefix", "formats"});
    if (o.contains("prefix")) {
      require(o.at("prefix").is_string() && !o.at("prefix").get<std::string>().empty(),
              "output.prefix must be a non-empty string");
      s.prefix = o.at("prefix").get<std::string>();
      require(s.prefix.find_first_of("/\\") == std::string::npos, "output.prefix must not contain slashes");
    }
    if (o.contains("formats")) {
      require(o.at("formats").is_array(), "output.formats must be an array");
      s.write_csv = s.write_json = false;
      for (const auto& f : o.at("formats")) {
        require(f.is_string(), "output.formats entries must be strings");
        const auto v = f.get<std::string>();
        if (v == "csv") s.write_csv = true;
        else if (v == "json") s.write_json = true;
        else throw DomainError("unknown output format '" + v + "'");
      }
    }
  }

  // Cross-field checks.
  const ModelSpec resolved = resolved_model(s.experiment.model);
  initial_state(s.experiment);
  if (s.analyses.signature_report) {
    require(has_scan(s, "detuning") && has_scan(s, "intensity") && has_scan(s, "time"),
            "signature_report needs detuning, intensity and time scans");
  }
  if (s.analyses.golden_rule_fit) {
    require(has_scan(s, "peak_detuning"), "golden_rule_fit needs a peak_detuning scan");
  }
  if (!s.analyses.dyson_times.empty()) {
    require(std::holds_alternative<BeamSplitterParams>(resolved.params) && !s.experiment.field_fock,
            "analyses.dyson needs a beam_splitter model with a coherent field");
  }
  if (s.analyses.gravito_constants) {
    require(std::holds_alternative<GravitoParams>(s.experiment.model.params),
            "analyses.gravito_constants needs the gravito family");
  }
  if (s.analyses.deficit) {
    require(!resolved.neo_classical, "deficit analysis is defined for models without back-reaction");
  }
  if (has_scan(s, "intensity")) {
    require(!std::holds_alternative<JaynesCummingsParams>(resolved.params) && !s.experiment.field_fock,
            "intensity scans need a coherent or classical field");
  }
  return s;
}

inline json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DomainError("config " + path.string() + " is not valid JSON: " + e.what());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct RunOptions {
  std::filesystem::path output_dir;
  unsigned workers = 1;
  std::optional<double> dt;
  std::optional<double> t_max;
};

struct Artifact {
  std::string file;
  std::string sha256;
};

struct RunSummary {
  std::filesystem::path output_dir;
  std::vector<Artifact> artifacts;
  json report;  // contents of the manifest
};

inline void apply_overrides(Scenario& s, const RunOptions& opt) {
  if (opt.dt) s.experiment.evolution.dt = *opt.dt;
  if (opt.t_max) s.experiment.evolution.t_max = *opt.t_max;
  s.experiment.evolution.validate();
}

namespace detail {

class Staging {
 public:
  explicit Staging(std::filesystem::path final_dir) : final_(std::move(final_dir)) {
    std::filesystem::create_directories(final_);
    dir_ = final_ / ".gpe-staging";
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  Staging(const Staging&) = delete;
  Staging& operator=(const Staging&) = delete;
  ~Staging() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }

  void add(const std::string& file, const std::string& contents) {
    std::ofstream out(dir_ / file, std::ios::binary);
    out << contents;
    if (!out) throw Error("failed writing " + (dir_ / file).string());
    files_.push_back({file, sha256_hex(contents)});
  }

  // Moves every staged file into place; nothing is visible before this call.
  std::vector<Artifact> commit() {
    for (const auto& a : files_) std::filesystem::rename(dir_ / a.file, final_ / a.file);
    return files_;
  }

 private:
  std::filesystem::path final_;
  std::filesystem::path dir_;
  std::vector<Artifact> files_;
};

// Largest excursion from the initial value, relative to `scale`.
inline double relative_drift(const std::vector<double>& series, double scale) {
  double worst = 0.0;
  for (double v : series) worst = std::max(worst, std::abs(v - series.front()));
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace detail

/// Runs a validated scenario and writes its artifacts atomically into
/// opt.output_dir. Numerical tolerance aborts of the main trajectory
/// propagate as ToleranceError before anything is written.
inline RunSummary run(Scenario s, const std::string& config_text, const RunOptions& opt,
                      const PhysicalConstants& constants = active_constants()) {
  apply_overrides(s, opt);
  const Experiment& e = s.experiment;
  std::vector<std::pair<std::string, std::string>> outputs;  // file, contents
  json manifest;

  if (s.analyses.ledger || s.analyses.deficit) {
    const Trajectory traj = run_experiment(e);
    const EnergyLedger led = energy_ledger(traj, e.model);
    if (s.analyses.ledger) {
      std::ostringstream csv;
      io::write_ledger_csv(csv, led, traj, e.model, e.transition_target());
      outputs.emplace_back(s.prefix + "_ledger.csv", csv.str());
      json audit;
      std::vector<double> norms;
      for (const auto& st : traj.states) norms.push_back(st.norm());
      double norm_drift = 0.0;
      for (double n : norms) norm_drift = std::max(norm_drift, std::abs(n - 1.0));
      audit["samples"] = led.size();
      audit["norm_drift"] = norm_drift;
      audit["e_total_relative_drift"] = io::json_number(detail::relative_drift(
          led.e_total, std::abs(led.e_classical[0]) + std::abs(led.e_quantum_free[0]) + std::abs(led.e_interaction[0])));
      audit["e_total_max_abs_drift"] = io::json_number(led.max_total_drift());
      audit["e_classical_max_abs_change"] = io::json_number(
          *std::max_element(led.e_classical.begin(), led.e_classical.end()) -
          *std::min_element(led.e_classical.begin(), led.e_classical.end()));
      const ModelSpec m = resolved_model(e.model);
      if (m.is_full_quantum()) {
        const Operator exc = excitation_number(m);
        std::vector<double> ex;
        for (const auto& st : traj.states) ex.push_back(expectation(exc, st).real());
        audit["excitation_relative_drift"] = io::json_number(detail::relative_drift(ex, std::abs(ex.front())));
      }
      if (!led.power_residual.empty()) audit["max_power_residual"] = io::json_number(led.max_power_residual());
      if (s.write_json) outputs.emplace_back(s.prefix + "_ledger.json", audit.dump(2) + "\n");
      manifest["ledger"] = audit;
    }
    if (s.analyses.deficit) {
      const DeficitReport d = conditioned_energy_deficit(traj, e.model);
      if (s.write_json) outputs.emplace_back(s.prefix + "_deficit.json", io::to_json(d).dump(2) + "\n");
    }
  }

  if (!s.analyses.dyson_times.empty()) {
    const auto& bs = std::get<BeamSplitterParams>(e.model.params);
    std::vector<io::DysonRow> rows;
    for (double t : s.analyses.dyson_times) {
      Experiment point = e;
      point.evolution.method = Method::MatrixExponential;
      point.evolution.t_max = t;
      point.evolution.dt = t;
      const Trajectory traj = run_experiment(point);
      rows.push_back({t, dyson_first_order(bs, t), transition_probability(traj, e.transition_target()).back()});
    }
    std::ostringstream csv;
    io::write_dyson_csv(csv, rows);
    outputs.emplace_back(s.prefix + "_dyson.csv", csv.str());
  }

  std::map<std::string, ScanResult> scans;
  for (const auto& spec : s.scans) {
    ScanResult r;
    if (spec.axis == "detuning") r = detuning_scan(e, spec.range, opt.workers);
    else if (spec.axis == "intensity") r = intensity_scan(e, spec.range, opt.workers);
    else if (spec.axis == "time") r = time_scan(e, spec.range, opt.workers);
    else r = peak_detuning_scan(e, spec.range, opt.workers, spec.samples_per_period);
    std::ostringstream csv;
    io::write_scan_csv(csv, r);
    outputs.emplace_back(s.prefix + "_scan_" + spec.axis + ".csv", csv.str());
    scans[spec.axis] = std::move(r);
  }

  if (s.analyses.signature_report) {
    const SignatureReport rep =
        signature_report(SignatureInputs{&scans.at("detuning"), &scans.at("intensity"), &scans.at("time")});
    const json j = io::to_json(rep);
    if (s.write_json) outputs.emplace_back(s.prefix + "_signature.json", j.dump(2) + "\n");
    manifest["signature_all_passed"] = rep.all_passed();
  }
  if (s.analyses.golden_rule_fit) {
    const PowerLawFit fit = golden_rule_fit(scans.at("peak_detuning"));
    if (s.write_json) outputs.emplace_back(s.prefix + "_golden_rule.json", io::to_json(fit).dump(2) + "\n");
  }
  if (s.analyses.gravito_constants) {
    const auto& g = std::get<GravitoParams>(e.model.params);
    const GravitoMapping map = gravito_classical_params(g, constants);
    json j{{"vacuum_coupling", gravito_vacuum_coupling(g, constants)},
           {"energy_density_J_per_m3", gw_energy_density(g, constants)},
           {"lambda_N", map.lambda_si},
           {"x0_m", map.x0_si},
           {"drive_coefficient_J", map.drive_coefficient},
           {"lambda_times_x0_J", map.lambda_si * map.x0_si},
           {"natural",
            {{"omega", map.natural.omega},
             {"nu", map.natural.nu},
             {"lambda", map.natural.lambda},
             {"x0", map.natural.x0}}}};
    if (s.write_json) outputs.emplace_back(s.prefix + "_gravito.json", j.dump(2) + "\n");
  }

  // CSV artifacts are dropped when the config excludes them.
  std::vector<std::pair<std::string, std::string>> kept;
  for (auto& [file, contents] : outputs) {
    const bool is_csv = file.size() > 4 && file.substr(file.size() - 4) == ".csv";
    if (is_csv ? s.write_csv : s.write_json) kept.emplace_back(file, std::move(contents));
  }

  detail::Staging staging(opt.output_dir);
  for (const auto& [file, contents] : kept) staging.add(file, contents);

  manifest["name"] = s.name;
  manifest["tool_version"] = GPE_VERSION;
  manifest["config_sha256"] = sha256_hex(config_text);
  manifest["constants"] = {{"version", constants.version},
                           {"sha256", sha256_hex(constants.canonical_text())},
                           {"c", constants.c},
                           {"G", constants.G},
                           {"hbar", constants.hbar}};
  const auto& ev = e.evolution;
  manifest["evolution"] = {{"dt", ev.dt},
                           {"effective_dt", ev.step()},
                           {"t_max", ev.t_max},
                           {"method", to_string(ev.method)},
                           {"norm_drift_tol", ev.norm_drift_tol},
                           {"top_level_tol", ev.top_level_tol}};
  manifest["overrides"] = {{"dt", opt.dt ? json(*opt.dt) : json(nullptr)},
                           {"t_max", opt.t_max ? json(*opt.t_max) : json(nullptr)}};
  json files = json::array();
  for (const auto& [file, contents] : kept) files.push_back({{"file", file}, {"sha256", sha256_hex(contents)}});
  manifest["artifacts"] = files;
  staging.add("manifest.json", manifest.dump(2) + "\n");

  RunSummary summary;
  summary.output_dir = opt.output_dir;
  summary.artifacts = staging.commit();
  summary.report = manifest;
  return summary;
}

/// Directory holding the bundled scenario files.
inline std::filesystem::path default_scenario_dir() {
  if (const char* env = std::getenv("GPE_SCENARIO_DIR"); env && *env) return env;
#ifdef GPE_DEFAULT_SCENARIO_DIR
  return GPE_DEFAULT_SCENARIO_DIR;
#else
  return "scenarios";
#endif
}

struct BundledScenario {
  std::string name;
  std::string description;
  std::filesystem::path path;
};

inline std::vector<BundledScenario> list_bundled(const std::filesystem::path& dir) {
  std::vector<BundledScenario> out;
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    const json j = load_json(entry.path());
    out.push_back({j.value("name", entry.path().stem().string()), j.value("description", ""), entry.path()});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

// A config argument is either a path or the name of a bundled scenario.
inline std::filesystem::path resolve_config(const std::string& arg, const std::filesystem::path& dir) {
  const std::filesystem::path p(arg);
  if (std::filesystem::exists(p)) return p;
  const auto bundled = dir / (arg + ".json");
  if (std::filesystem::exists(bundled)) return bundled;
  throw DomainError("no config file or bundled scenario named '" + arg + "'");
}

}  // namespace gpe::scenario
