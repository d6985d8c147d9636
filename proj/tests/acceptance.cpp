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

// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "gpe/analysis.hpp"
#include "gpe/dynamics.hpp"
#include "gpe/io.hpp"
#include "gpe/models.hpp"
#include "gpe/scenario.hpp"

namespace {

using namespace gpe;
namespace fs = std::filesystem;

struct Outcome {
  bool pass;
  std::string detail;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

fs::path scenario_dir() { return scenario::default_scenario_dir(); }

scenario::Scenario load(const std::string& name) {
  return scenario::parse(scenario::load_json(scenario_dir() / (name + ".json")));
}

// --- 1 ----------------------------------------------------------------------------
Outcome oracle_triangle() {
  const auto start = std::chrono::steady_clock::now();
  BeamSplitterParams p{1.0, 1.0, 1e-3, 30, 4, Complex(2.0, 0.0)};
  ModelSpec m{p};
  Experiment e{m, EvolutionConfig{0.5, 10.0, Method::MatrixExponential}, {}, {}};
  const Trajectory traj = run_experiment(e);
  const auto exact = transition_probability(traj, e.transition_target());
  double worst = 0.0;
  double p_max = 0.0;
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const double t = traj.times[k];
    const DysonResult d = dyson_first_order(p, t);
    worst = std::max({worst, rel(d.closed_form, d.double_integral), rel(d.closed_form, exact[k]),
                      rel(d.double_integral, exact[k])});
    p_max = std::max(p_max, exact[k]);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 0.02 && p_max < 0.01 && secs < 5.0,
          fmt("max pairwise rel diff %.3g (tol 0.02), max P %.3g, %.2f s", worst, p_max, secs)};
}

// --- 2 ----------------------------------------------------------------------------
Outcome conservation_audit() {
  double worst_norm = 0.0, worst_energy = 0.0, worst_exc = 0.0;
  int count = 0;
  for (const auto& b : scenario::list_bundled(scenario_dir())) {
    const auto s = scenario::parse(scenario::load_json(b.path));
    const ModelSpec m = resolved_model(s.experiment.model);
    if (!m.is_full_quantum()) continue;
    ++count;
    const Trajectory traj = run_experiment(s.experiment);
    const EnergyLedger led = energy_ledger(traj, s.experiment.model);
    const Operator exc = excitation_number(m);
    const double e0 = led.e_total.front();
    const double n0 = expectation(exc, traj.states.front()).real();
    for (std::size_t k = 0; k < traj.size(); ++k) {
      worst_norm = std::max(worst_norm, std::abs(traj.states[k].norm() - 1.0));
      worst_energy = std::max(worst_energy, std::abs(led.e_total[k] - e0) / std::abs(e0));
      worst_exc = std::max(worst_exc, std::abs(expectation(exc, traj.states[k]).real() - n0) / std::abs(n0));
    }
  }
  const double worst = std::max({worst_norm, worst_energy, worst_exc});
  return {count > 0 && worst <= 1e-8,
          fmt("norm %.2g, <H> %.2g, excitation %.2g relative (tol 1e-8)", worst_norm, worst_energy, worst_exc) +
              " over " + std::to_string(count) + " scenarios"};
}

// --- 3 ----------------------------------------------------------------------------
Outcome semiclassical_deficit() {
  const auto run = [](const std::string& name, double& deficit, double& e_diff, double& e_cl_change,
                      double& omega) {
    const auto s = load(name);
    const Trajectory traj = run_experiment(s.experiment);
    const EnergyLedger led = energy_ledger(traj, s.experiment.model);
    const DeficitReport d = conditioned_energy_deficit(traj, s.experiment.model);
    deficit = d.deficit;
    e_diff = d.e_diff;
    omega = d.detector_quantum;
    const auto [lo, hi] = std::minmax_element(led.e_classical.begin(), led.e_classical.end());
    e_cl_change = *hi - *lo;
  };
  double def = 0, ediff = 0, change = 0, omega = 0;
  run("energy_audit_semiclassical", def, ediff, change, omega);
  double def_d = 0, ediff_d = 0, change_d = 0, omega_d = 0;
  run("energy_audit_detuned", def_d, ediff_d, change_d, omega_d);
  const auto detuned = load("energy_audit_detuned");
  const auto& dp = std::get<DrivenOscillatorParams>(detuned.experiment.model.params);
  const double delta = dp.nu - dp.omega;
  const bool pass = std::abs(def - omega) <= 1e-9 && change == 0.0 && change_d == 0.0 &&
                    std::abs(ediff_d - delta) <= 1e-9;
  return {pass, fmt("deficit - omega = %.2g, e_classical change %.2g, E_diff - delta = %.2g (tol 1e-9)",
                    def - omega, std::max(change, change_d), ediff_d - delta)};
}

// --- 4 ----------------------------------------------------------------------------
double max_residual(const ModelSpec& m, double dt, double t_max) {
  Experiment e{m, EvolutionConfig{dt, t_max, Method::MidpointPiecewise}, {}, {}};
  const Trajectory traj = run_experiment(e);
  return energy_ledger(traj, m).max_power_residual();
}

Outcome neoclassical_restoration() {
  const ModelSpec qubit{QubitSemiClassicalParams{1.0, 1.0, 0.05, 1.0}, true};
  const ModelSpec osc{DrivenOscillatorParams{1.0, 1.0, 0.02, 1.0, 12}, true};
  double min_order = 1e300;
  std::string orders;
  for (const ModelSpec* m : {&qubit, &osc}) {
    double prev = max_residual(*m, 0.02, 10.0);
    for (double dt : {0.01, 0.005}) {
      const double r = max_residual(*m, dt, 10.0);
      const double order = std::log2(prev / r);
      min_order = std::min(min_order, order);
      orders += fmt("%.3f ", order);
      prev = r;
    }
  }
  // Hybrid energy drift against the semi-classical deficit at the same parameters.
  double ratio_min = 1e300;
  for (const ModelSpec* m : {&qubit, &osc}) {
    Experiment hybrid{*m, EvolutionConfig{1e-3, 50.0, Method::MidpointPiecewise}, {}, {}};
    hybrid.evolution.record_stride = 10;
    const double drift = energy_ledger(run_experiment(hybrid), *m).max_total_drift();
    ModelSpec sc = *m;
    sc.neo_classical = false;
    Experiment semi{sc, hybrid.evolution, {}, {}};
    const double deficit = conditioned_energy_deficit(run_experiment(semi), sc).deficit;
    ratio_min = std::min(ratio_min, std::abs(deficit) / drift);
  }
  return {min_order >= 1.9 && ratio_min >= 100.0,
          "residual orders " + orders + fmt("(min 1.9); deficit/drift >= %.3g (min 100)", ratio_min)};
}

// --- 5 ----------------------------------------------------------------------------
Outcome signatures() {
  std::string detail;
  bool pass = true;
  for (const char* name : {"signatures_beam_splitter", "signatures_semiclassical"}) {
    const auto s = load(name);
    std::map<std::string, ScanResult> scans;
    for (const auto& spec : s.scans) {
      if (spec.axis == "detuning") scans[spec.axis] = detuning_scan(s.experiment, spec.range);
      if (spec.axis == "intensity") scans[spec.axis] = intensity_scan(s.experiment, spec.range);
      if (spec.axis == "time") scans[spec.axis] = time_scan(s.experiment, spec.range);
    }
    const auto& in = scans.at("intensity");
    const auto& tm = scans.at("time");
    const bool covers = in.axis_values.front() <= 1.0 && in.axis_values.back() >= 16.0 &&
                        tm.axis_values.front() <= 1e-3;
    const SignatureReport r =
        signature_report(SignatureInputs{&scans.at("detuning"), &in, &tm});
    pass = pass && r.all_passed() && covers;
    detail += std::string(name) + ": threshold " + to_string(r.threshold.verdict) + ", intensity " +
              to_string(r.intensity_independence.verdict) +
              fmt(" (slope %.4f)", r.intensity_independence.statistic) + ", short-time " +
              to_string(r.short_time.verdict) + "; ";
  }
  return {pass, detail};
}

// --- 6 ----------------------------------------------------------------------------
Outcome golden_rule() {
  const auto s = load("rabi_golden_rule");
  const auto& spec = s.scans.front();
  const ScanResult scan = peak_detuning_scan(s.experiment, spec.range, 1, spec.samples_per_period);
  const double g = scan.fixed_parameters.at("g");
  const PowerLawFit fit = golden_rule_fit(scan);
  const double lo = spec.range.start / g;
  const double hi = spec.range.stop / g;
  const bool covers = lo <= 10.0 * (1 + 1e-9) && hi >= 1000.0 * (1 - 1e-9);
  return {std::abs(fit.slope + 2.0) <= 0.02 && covers && scan.all_ok(),
          fmt("slope %.5f (tol -2 +- 0.02) over delta/g in [%.4g, %.4g]", fit.slope, lo, hi)};
}

// --- 7 ----------------------------------------------------------------------------
Outcome gravito() {
  const PhysicalConstants k = codata2018();
  const double two_pi = 2.0 * std::numbers::pi;
  GravitoParams p{1000.0, 1.0, two_pi * 1000.0, two_pi * 1000.0, 1e-21, 1.0};
  double worst = 0.0;
  GravitoParams q = p;
  q.nu = 4.0 * p.nu;
  worst = std::max(worst, rel(gravito_vacuum_coupling(q, k), 0.5 * gravito_vacuum_coupling(p, k)));
  q = p;
  q.volume = 9.0 * p.volume;
  worst = std::max(worst, rel(gravito_vacuum_coupling(q, k), gravito_vacuum_coupling(p, k) / 3.0));
  const GravitoMapping map = gravito_classical_params(p, k);
  const double identity = p.length / (std::numbers::pi * std::numbers::pi) *
                          std::sqrt(p.mass * std::pow(p.nu, 4) * k.hbar / p.omega0);
  worst = std::max(worst, rel(map.lambda_si * map.x0_si, identity));
  q = p;
  q.h0 = 3.0 * p.h0;
  worst = std::max(worst, rel(gw_energy_density(q, k), 9.0 * gw_energy_density(p, k)));

  // Values frozen from the independent 50-digit oracle (tests/oracles).
  GravitoParams v = p;
  v.nu = two_pi * 5000.0;
  double oracle = 0.0;
  oracle = std::max(oracle, rel(gravito_vacuum_coupling(v, k), 7.915260869150267023e-33));
  oracle = std::max(oracle, rel(map.lambda_si, 4.0e9));
  oracle = std::max(oracle, rel(map.x0_si, 4.0968319165051385131e-21));
  oracle = std::max(oracle, rel(map.drive_coefficient, 1.6387327666020554053e-11));
  oracle = std::max(oracle, rel(gw_energy_density(p, k), 5.2880501829693148455e-10));
  return {worst <= 1e-12 && oracle <= 1e-12,
          fmt("scaling/identity rel err %.2g, oracle rel err %.2g (tol 1e-12)", worst, oracle)};
}

// --- 8 ----------------------------------------------------------------------------
Outcome one_phonon_triple() {
  const DrivenOscillatorParams p{1.0, 1.0, 1e-3, 1.0, 6};
  const double t = 100.0;
  const double formula = one_phonon_probability(p, t);
  const double quad = std::norm(coherent_amplitude_beta(p, t));
  Experiment e{ModelSpec{p}, EvolutionConfig{0.01, t, Method::MidpointPiecewise}, {}, {}};
  const Trajectory traj = run_experiment(e);
  const double exact = transition_probability(traj, e.transition_target()).back();
  const double worst = std::max({rel(formula, quad), rel(formula, exact), rel(quad, exact)});
  return {worst <= 0.05 && std::max({formula, quad, exact}) < 0.01,
          fmt("formula %.6g, |beta|^2 %.6g, exact %.6g", formula, quad, exact) +
              fmt("; max rel diff %.3g (tol 0.05)", worst)};
}

// --- 9 ----------------------------------------------------------------------------
Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / ("gpe_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  int compared = 0;
  std::string mismatch;
  for (const auto& b : scenario::list_bundled(scenario_dir())) {
    const std::string text = scenario::read_file(b.path);
    const auto s = scenario::parse(nlohmann::json::parse(text));
    scenario::run(s, text, {root / "a" / b.name, 1, {}, {}});
    scenario::run(s, text, {root / "b" / b.name, 2, {}, {}});
    for (const auto& entry : fs::directory_iterator(root / "a" / b.name)) {
      if (entry.path().extension() != ".csv") continue;
      ++compared;
      const auto other = root / "b" / b.name / entry.path().filename();
      if (!fs::exists(other) || scenario::read_file(entry.path()) != scenario::read_file(other)) {
        mismatch += entry.path().filename().string() + " ";
      }
    }
  }
  fs::remove_all(root);
  return {compared > 0 && mismatch.empty(),
          std::to_string(compared) + " CSV files compared across reruns (1 vs 2 workers)" +
              (mismatch.empty() ? "" : "; differing: " + mismatch)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 oracle triangle", oracle_triangle},
      {"AC2 unitarity and conservation", conservation_audit},
      {"AC3 semi-classical deficit", semiclassical_deficit},
      {"AC4 neo-classical restoration", neoclassical_restoration},
      {"AC5 photo-electric signatures", signatures},
      {"AC6 golden-rule scaling", golden_rule},
      {"AC7 gravito constants", gravito},
      {"AC8 one-phonon triple check", one_phonon_triple},
      {"AC9 determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
