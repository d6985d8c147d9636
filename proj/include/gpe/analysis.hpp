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

// Post-processing of trajectories. Energy ledgers and conditioned deficits
// describe one run; parameter scans feed the fits and signature checks.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "gpe/dynamics.hpp"
#include "gpe/error.hpp"
#include "gpe/hilbert.hpp"
#include "gpe/models.hpp"

namespace gpe {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// --- experiments ----------------------------------------------------------------

/// Population of `level` on one factor: qubit excited is {qubit factor, 1},
/// detector Fock n is {detector factor, n}.
struct TransitionTarget {
  std::size_t factor = 0;
  Index level = 1;

  static TransitionTarget qubit_excited(std::size_t factor) { return {factor, 1}; }
  static TransitionTarget fock(std::size_t factor, Index n) { return {factor, n}; }
};

inline TransitionTarget default_target(const ModelSpec& model) {
  if (std::holds_alternative<JaynesCummingsParams>(model.params)) return TransitionTarget::qubit_excited(1);
  if (std::holds_alternative<BeamSplitterParams>(model.params)) return TransitionTarget::fock(1, 1);
  if (std::holds_alternative<QubitSemiClassicalParams>(model.params)) return TransitionTarget::qubit_excited(0);
  return TransitionTarget::fock(0, 1);
}

// Factor that holds the detector (the system whose transitions are counted).
inline std::size_t detector_factor(const ModelSpec& model) { return default_target(model).factor; }

/// A fully specified run: model, integrator settings and initial condition.
/// Initial states: the field starts coherent (beam splitter, alpha) or in Fock
/// `field_fock` (Jaynes-Cummings, default 1; beam splitter if set); the
/// detector starts in its ground level. Classical modes start on the free
/// orbit x(t) = x0 sin(nu t), i.e. x = 0, p = nu x0.
struct Experiment {
  ModelSpec model;
  EvolutionConfig evolution;
  std::optional<Index> field_fock;
  std::optional<TransitionTarget> target;

  TransitionTarget transition_target() const { return target ? *target : default_target(model); }
};

// Gravito models run as the driven oscillator they map onto.
inline ModelSpec resolved_model(const ModelSpec& model, const PhysicalConstants& k = codata2018()) {
  if (const auto* g = std::get_if<GravitoParams>(&model.params)) {
    return {gravito_classical_params(*g, k).natural, model.neo_classical};
  }
  return model;
}

inline SpaceDescriptor model_space(const ModelSpec& model) {
  const ModelSpec m = resolved_model(model);
  if (const auto* p = std::get_if<JaynesCummingsParams>(&m.params)) return jc_space(*p);
  if (const auto* p = std::get_if<BeamSplitterParams>(&m.params)) return beam_splitter_space(*p);
  if (std::holds_alternative<QubitSemiClassicalParams>(m.params)) return qubit_space();
  return oscillator_space(std::get<DrivenOscillatorParams>(m.params));
}

inline StateVector initial_state(const Experiment& e) {
  const ModelSpec m = resolved_model(e.model);
  m.validate();
  const auto space = model_space(m);
  if (const auto* bs = std::get_if<BeamSplitterParams>(&m.params)) {
    if (e.field_fock) return fock_state(space, 0, *e.field_fock);
    return coherent_state(space, 0, bs->coherent());
  }
  if (std::holds_alternative<JaynesCummingsParams>(m.params)) {
    return fock_state(space, 0, e.field_fock.value_or(1));
  }
  detail::require(!e.field_fock, "field_fock applies only to quantized-field models");
  return StateVector::basis(space, {0});
}

// Classical drive parameters (nu, x0) of semi-classical and hybrid models.
inline std::pair<double, double> classical_drive(const ModelSpec& model) {
  const ModelSpec m = resolved_model(model);
  if (const auto* q = std::get_if<QubitSemiClassicalParams>(&m.params)) return {q->nu, q->x0};
  if (const auto* o = std::get_if<DrivenOscillatorParams>(&m.params)) return {o->nu, o->x0};
  throw DomainError("model " + model.family() + " has no classical field");
}

inline Trajectory run_experiment(const Experiment& e) {
  const ModelSpec m = resolved_model(e.model);
  m.validate();
  const StateVector psi0 = initial_state(e);
  if (const auto* jc = std::get_if<JaynesCummingsParams>(&m.params)) {
    return evolve_unitary(build_jc_hamiltonian(*jc), psi0, e.evolution);
  }
  if (const auto* bs = std::get_if<BeamSplitterParams>(&m.params)) {
    return evolve_unitary(build_beam_splitter_hamiltonian(*bs), psi0, e.evolution);
  }
  if (m.neo_classical) {
    const auto [nu, x0] = classical_drive(m);
    return evolve_hybrid(m, HybridState{0.0, nu * x0, psi0}, e.evolution);
  }
  if (const auto* q = std::get_if<QubitSemiClassicalParams>(&m.params)) {
    return evolve_driven(*q, psi0, e.evolution);
  }
  return evolve_driven(std::get<DrivenOscillatorParams>(m.params), psi0, e.evolution);
}

// --- transition probabilities -------------------------------------------------------

inline std::vector<double> transition_probability(const Trajectory& traj, TransitionTarget target) {
  detail::require(!traj.states.empty(), "empty trajectory");
  const auto& space = traj.states.front().space();
  const auto& f = space.factor(target.factor);
  detail::require(target.level >= 0 && target.level < f.dim,
                  "target level " + std::to_string(target.level) + " does not exist on factor " +
                      std::to_string(target.factor));
  std::vector<double> out;
  out.reserve(traj.size());
  for (const auto& s : traj.states) out.push_back(s.marginal_population(target.factor, target.level));
  return out;
}

// --- energy ledger -----------------------------------------------------------------

struct EnergyLedger {
  std::vector<double> times;
  // Field energy: the classical oscillator energy p^2/2 + nu^2 x^2/2 for
  // semi-classical and hybrid models, <nu a^dag a> for quantized fields.
  std::vector<double> e_classical;
  std::vector<double> e_quantum_free;
  std::vector<double> e_interaction;
  std::vector<double> e_total;
  // sqrt(Var H) of the operator part of the Hamiltonian.
  std::vector<double> energy_std;
  // Hybrid runs only: central-difference dE_F/dt minus (-lambda p <V>), NaN
  // at the two end points.
  std::vector<double> power_residual;

  std::size_t size() const { return times.size(); }

  double max_total_drift() const {
    double worst = 0.0;
    for (double e : e_total) worst = std::max(worst, std::abs(e - e_total.front()));
    return worst;
  }

  double max_power_residual() const {
    double worst = 0.0;
    for (double r : power_residual)
      if (std::isfinite(r)) worst = std::max(worst, std::abs(r));
    return worst;
  }
};

namespace detail {

inline double expect_real(const Operator& op, const StateVector& psi) {
  return expectation(op, psi).real();
}

inline void require_matching(const Trajectory& traj, const ModelSpec& model) {
  require(!traj.states.empty(), "empty trajectory");
  require(traj.states.front().space() == model_space(model),
          "trajectory space " + traj.states.front().space().describe() +
              " does not match model " + model.family());
  if (!resolved_model(model).is_full_quantum()) {
    require(traj.classical && traj.classical->size() == traj.size(),
            "semi-classical ledger needs the classical orbit in the trajectory");
  }
}

inline HamiltonianParts parts_at(const ModelSpec& m, double x) {
  if (const auto* jc = std::get_if<JaynesCummingsParams>(&m.params)) return jc_parts(*jc);
  if (const auto* bs = std::get_if<BeamSplitterParams>(&m.params)) return beam_splitter_parts(*bs);
  if (const auto* q = std::get_if<QubitSemiClassicalParams>(&m.params)) return driven_qubit_parts(*q, x);
  return driven_oscillator_parts(std::get<DrivenOscillatorParams>(m.params), x);
}

}  // namespace detail

inline EnergyLedger energy_ledger(const Trajectory& traj, const ModelSpec& model) {
  detail::require_matching(traj, model);
  const ModelSpec m = resolved_model(model);
  EnergyLedger led;
  led.times = traj.times;
  const std::size_t n = traj.size();
  led.e_classical.resize(n);
  led.e_quantum_free.resize(n);
  led.e_interaction.resize(n);
  led.e_total.resize(n);
  led.energy_std.resize(n);

  if (m.is_full_quantum()) {
    const HamiltonianParts parts = detail::parts_at(m, 0.0);
    const Operator h = parts.total();
    for (std::size_t k = 0; k < n; ++k) {
      const auto& s = traj.states[k];
      led.e_classical[k] = detail::expect_real(*parts.field, s);
      led.e_quantum_free[k] = detail::expect_real(parts.detector, s);
      led.e_interaction[k] = detail::expect_real(parts.interaction, s);
      led.e_total[k] = led.e_classical[k] + led.e_quantum_free[k] + led.e_interaction[k];
      led.energy_std[k] = std::sqrt(variance(h, s));
    }
    return led;
  }

  const auto [nu, x0] = classical_drive(m);
  // Without back-reaction the field stays on its free orbit, whose energy is
  // fixed by the amplitude alone.
  const double e_free_orbit = 0.5 * nu * nu * x0 * x0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto [x, p] = (*traj.classical)[k];
    const HamiltonianParts parts = detail::parts_at(m, x);
    const auto& s = traj.states[k];
    led.e_classical[k] = m.neo_classical ? 0.5 * p * p + 0.5 * nu * nu * x * x : e_free_orbit;
    led.e_quantum_free[k] = detail::expect_real(parts.detector, s);
    led.e_interaction[k] = detail::expect_real(parts.interaction, s);
    led.e_total[k] = led.e_classical[k] + led.e_quantum_free[k] + led.e_interaction[k];
    led.energy_std[k] = std::sqrt(variance(parts.total(), s));
  }

  if (m.neo_classical) {
    // Interaction operator at x = 1 is lambda V, so dE_F/dt should equal -p <lambda V>.
    const Operator lambda_v = detail::parts_at(m, 1.0).interaction;
    led.power_residual.assign(n, kNaN);
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double rate = (led.e_classical[k + 1] - led.e_classical[k - 1]) /
                          (led.times[k + 1] - led.times[k - 1]);
      const double p = (*traj.classical)[k].p;
      led.power_residual[k] = rate + p * detail::expect_real(lambda_v, traj.states[k]);
    }
  }
  return led;
}

// --- conditioned energy deficit -------------------------------------------------------

struct DeficitReport {
  double transition_probability;  // probability of the conditioned outcome at readout
  double energy_before;           // field + detector free energy of the initial state
  double energy_after;            // same, conditioned on the detector transition
  double deficit;                 // energy_after - energy_before
  double field_quantum;           // nu
  double detector_quantum;        // omega
  double e_diff;                  // nu - omega: mismatch between field and detector quanta
};

inline constexpr double kMinConditioningProbability = 1e-12;

/// Energy bookkeeping of a single transition. The readout state is projected
/// onto the target level of the detector (a free-Hamiltonian eigenstate) and
/// renormalized. The field keeps its classical energy in semi-classical
/// models; for quantized fields its energy is read off the conditioned state.
/// Interaction energy is not part of the free-energy bookkeeping.
inline DeficitReport conditioned_energy_deficit(const Trajectory& traj, const ModelSpec& model,
                                                std::optional<TransitionTarget> target = {}) {
  detail::require_matching(traj, model);
  const ModelSpec m = resolved_model(model);
  const TransitionTarget tgt = target ? *target : default_target(m);
  const StateVector& first = traj.states.front();
  const StateVector& last = traj.states.back();

  const double prob = last.marginal_population(tgt.factor, tgt.level);
  if (prob < kMinConditioningProbability) {
    throw DomainError("transition probability " + gpe::detail::num(prob) +
                      " is too small to condition on");
  }
  const StateVector conditioned = StateVector::normalized(last.space(), last.project(tgt.factor, tgt.level));

  const HamiltonianParts parts = detail::parts_at(m, 0.0);
  double field_before = 0.0;
  double field_after = 0.0;
  double field_quantum = 0.0;
  double detector_quantum = 0.0;
  if (const auto* jc = std::get_if<JaynesCummingsParams>(&m.params)) {
    field_quantum = jc->nu;
    detector_quantum = jc->omega;
  } else if (const auto* bs = std::get_if<BeamSplitterParams>(&m.params)) {
    field_quantum = bs->nu;
    detector_quantum = bs->omega;
  } else if (const auto* q = std::get_if<QubitSemiClassicalParams>(&m.params)) {
    field_quantum = q->nu;
    detector_quantum = q->omega;
  } else {
    const auto& o = std::get<DrivenOscillatorParams>(m.params);
    field_quantum = o.nu;
    detector_quantum = o.omega;
  }

  if (parts.field) {
    field_before = detail::expect_real(*parts.field, first);
    field_after = detail::expect_real(*parts.field, conditioned);
  } else {
    const auto& orbit = *traj.classical;
    auto energy = [&](const PhaseSpacePoint& s) {
      return 0.5 * s.p * s.p + 0.5 * field_quantum * field_quantum * s.x * s.x;
    };
    if (m.neo_classical) {
      field_before = energy(orbit.front());
      field_after = energy(orbit.back());
    } else {
      const auto [nu, x0] = classical_drive(m);
      field_before = field_after = 0.5 * nu * nu * x0 * x0;
    }
  }

  DeficitReport r{};
  r.transition_probability = prob;
  r.energy_before = field_before + detail::expect_real(parts.detector, first);
  r.energy_after = field_after + detail::expect_real(parts.detector, conditioned);
  r.deficit = r.energy_after - r.energy_before;
  r.field_quantum = field_quantum;
  r.detector_quantum = detector_quantum;
  r.e_diff = field_quantum - detector_quantum;
  return r;
}

// --- scans ----------------------------------------------------------------------------

struct Axis {
  double start = 0.0;
  double stop = 1.0;
  std::size_t points = 2;
  bool log_spacing = false;

  void validate() const {
    detail::require(std::isfinite(start) && std::isfinite(stop), "axis bounds must be finite");
    detail::require(points >= 2, "axis needs at least 2 points");
    detail::require(start != stop, "axis bounds must differ");
    if (log_spacing) detail::require(start > 0.0 && stop > 0.0, "log axis needs positive bounds");
  }

  std::vector<double> values() const {
    validate();
    std::vector<double> v(points);
    for (std::size_t i = 0; i < points; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(points - 1);
      v[i] = log_spacing ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start)))
                         : start + f * (stop - start);
    }
    v.front() = start;
    v.back() = stop;
    return v;
  }
};

struct ScanResult {
  std::string axis;
  std::vector<double> axis_values;
  std::vector<double> probability;
  // Closed-form prediction for the same point (NaN where none applies).
  std::vector<double> reference;
  // Detector free-energy gain conditioned on the transition.
  std::vector<double> detector_gap;
  // Empty string for a successful point, otherwise "<kind>: <message>".
  std::vector<std::string> errors;
  std::string model_tag;
  std::map<std::string, double> fixed_parameters;

  std::size_t size() const { return axis_values.size(); }
  bool ok(std::size_t i) const { return errors[i].empty(); }
  bool all_ok() const {
    return std::all_of(errors.begin(), errors.end(), [](const auto& e) { return e.empty(); });
  }
};

namespace detail {

inline double rabi_coupling(const ModelSpec& m, const Experiment& e) {
  if (const auto* jc = std::get_if<JaynesCummingsParams>(&m.params)) {
    return 2.0 * jc->g * std::sqrt(static_cast<double>(e.field_fock.value_or(1)));
  }
  if (const auto* bs = std::get_if<BeamSplitterParams>(&m.params)) {
    return 2.0 * bs->g * (e.field_fock ? std::sqrt(static_cast<double>(*e.field_fock)) : std::abs(bs->alpha));
  }
  if (const auto* q = std::get_if<QubitSemiClassicalParams>(&m.params)) return q->lambda * std::abs(q->x0);
  const auto& o = std::get<DrivenOscillatorParams>(m.params);
  return o.lambda * std::abs(o.x0);
}

inline double detuning_of(const ModelSpec& m) {
  return std::visit(
      [](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GravitoParams>) return p.nu / p.omega0 - 1.0;
        else return p.nu - p.omega;
      },
      m.params);
}

inline void set_detuning(ModelSpec& m, double delta) {
  std::visit(
      [delta](auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, GravitoParams>) p.nu = p.omega0 * (1.0 + delta);
        else p.nu = p.omega + delta;
      },
      m.params);
}

inline void set_intensity(Experiment& e, double intensity) {
  require(intensity > 0.0, "intensity must be > 0");
  const double amp = std::sqrt(intensity);
  std::visit(
      [&](auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BeamSplitterParams>) {
          require(!e.field_fock, "intensity scans of the beam splitter need a coherent field");
          const double phase = std::arg(p.alpha);
          p.alpha = std::polar(amp, phase);
        } else if constexpr (std::is_same_v<T, JaynesCummingsParams>) {
          throw DomainError("intensity scans are not defined for a Fock-state field");
        } else if constexpr (std::is_same_v<T, GravitoParams>) {
          p.h0 = amp;
        } else {
          p.x0 = amp;
        }
      },
      e.model.params);
}

inline void set_time(Experiment& e, double t) {
  require(std::isfinite(t) && t > 0.0, "scan time must be > 0");
  e.evolution.dt = std::min(e.evolution.dt, t);
  e.evolution.t_max = t;
}

// Closed-form prediction for the target population at time t.
inline double reference_probability(const Experiment& e, double t) {
  const ModelSpec m = resolved_model(e.model);
  if (m.neo_classical) return kNaN;
  if (const auto* jc = std::get_if<JaynesCummingsParams>(&m.params)) {
    if (jc->counter_rotating_form) return kNaN;
    return rabi_probability(rabi_coupling(m, e), jc->omega - jc->nu, t);
  }
  if (const auto* bs = std::get_if<BeamSplitterParams>(&m.params)) {
    if (e.field_fock) return kNaN;
    return dyson_first_order(*bs, t).closed_form;
  }
  if (const auto* q = std::get_if<QubitSemiClassicalParams>(&m.params)) {
    return perturbative_pe(q->lambda * q->x0, q->omega, q->nu, t);
  }
  return one_phonon_probability(std::get<DrivenOscillatorParams>(m.params), t);
}

struct PointOutcome {
  double probability = kNaN;
  double reference = kNaN;
  double gap = kNaN;
};

inline double detector_energy_gain(const Experiment& e, const Trajectory& traj) {
  const ModelSpec m = resolved_model(e.model);
  const auto tgt = e.transition_target();
  const StateVector& last = traj.final_state();
  if (last.marginal_population(tgt.factor, tgt.level) < 1e-300) return kNaN;
  const auto cond = StateVector::normalized(last.space(), last.project(tgt.factor, tgt.level));
  const HamiltonianParts parts = parts_at(m, 0.0);
  return expect_real(parts.detector, cond) - expect_real(parts.detector, traj.states.front());
}

inline PointOutcome run_point(const Experiment& e) {
  const Trajectory traj = run_experiment(e);
  PointOutcome out;
  out.probability = transition_probability(traj, e.transition_target()).back();
  out.reference = reference_probability(e, traj.times.back());
  out.gap = detector_energy_gain(e, traj);
  return out;
}

// Maximum of the target population over one golden-rule period 2 pi / Omega.
inline PointOutcome run_peak_point(Experiment e, std::size_t samples_per_period) {
  const ModelSpec m = resolved_model(e.model);
  const double omega_rabi = std::hypot(detuning_of(m), rabi_coupling(m, e));
  require(omega_rabi > 0.0, "peak scan needs a non-zero detuning or coupling");
  e.evolution.t_max = 2.0 * std::numbers::pi / omega_rabi;
  e.evolution.dt = e.evolution.t_max / static_cast<double>(samples_per_period);
  e.evolution.record_stride = 1;
  const Trajectory traj = run_experiment(e);
  const auto probs = transition_probability(traj, e.transition_target());
  PointOutcome out;
  out.probability = *std::max_element(probs.begin(), probs.end());
  if (const auto* jc = std::get_if<JaynesCummingsParams>(&m.params)) {
    const double g = rabi_coupling(m, e);
    const double d = jc->omega - jc->nu;
    out.reference = jc->counter_rotating_form ? kNaN : g * g / (g * g + d * d);
  }
  return out;
}

template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

template <class Mutate, class Runner>
ScanResult run_scan(const Experiment& base, const std::string& axis_name, const Axis& axis,
                    unsigned workers, Mutate&& mutate, Runner&& runner) {
  ScanResult r;
  r.axis = axis_name;
  r.axis_values = axis.values();
  const std::size_t n = r.axis_values.size();
  r.probability.assign(n, kNaN);
  r.reference.assign(n, kNaN);
  r.detector_gap.assign(n, kNaN);
  r.errors.assign(n, "");
  r.model_tag = base.model.family() + (base.model.neo_classical ? "+back_reaction" : "");
  const ModelSpec m = resolved_model(base.model);
  r.fixed_parameters["t"] = base.evolution.t_max;
  r.fixed_parameters["dt"] = base.evolution.dt;
  r.fixed_parameters["g"] = rabi_coupling(m, base);
  r.fixed_parameters["detuning"] = detuning_of(m);

  parallel_for(n, workers, [&](std::size_t i) {
    try {
      Experiment e = base;
      mutate(e, r.axis_values[i]);
      const PointOutcome o = runner(e);
      r.probability[i] = o.probability;
      r.reference[i] = o.reference;
      r.detector_gap[i] = o.gap;
    } catch (const ToleranceError& ex) {
      r.errors[i] = std::string("tolerance: ") + ex.what();
    } catch (const DomainError& ex) {
      r.errors[i] = std::string("domain: ") + ex.what();
    }
  });
  return r;
}

}  // namespace detail

/// Transition probability at t_max for each detuning delta = nu - omega.
inline ScanResult detuning_scan(const Experiment& base, const Axis& axis, unsigned workers = 1) {
  return detail::run_scan(
      base, "detuning", axis, workers, [](Experiment& e, double d) { detail::set_detuning(e.model, d); },
      detail::run_point);
}

/// Transition probability at t_max against field intensity (|alpha|^2, or
/// x0^2 for a classical field).
inline ScanResult intensity_scan(const Experiment& base, const Axis& axis, unsigned workers = 1) {
  return detail::run_scan(base, "intensity", axis, workers, detail::set_intensity, detail::run_point);
}

/// Transition probability at each time on the axis, one evolution per point.
inline ScanResult time_scan(const Experiment& base, const Axis& axis, unsigned workers = 1) {
  return detail::run_scan(base, "time", axis, workers, detail::set_time, detail::run_point);
}

/// Peak transition probability within one period 2 pi / sqrt(delta^2 + g^2)
/// for each detuning; the input for golden-rule fits. The axis holds delta.
inline ScanResult peak_detuning_scan(const Experiment& base, const Axis& axis, unsigned workers = 1,
                                     std::size_t samples_per_period = 400) {
  detail::require(samples_per_period >= 16, "samples_per_period must be >= 16");
  auto r = detail::run_scan(
      base, "peak_detuning", axis, workers, [](Experiment& e, double d) { detail::set_detuning(e.model, d); },
      [samples_per_period](const Experiment& e) { return detail::run_peak_point(e, samples_per_period); });
  r.fixed_parameters.erase("t");
  r.fixed_parameters.erase("dt");
  r.fixed_parameters["samples_per_period"] = static_cast<double>(samples_per_period);
  return r;
}

// --- fits -------------------------------------------------------------------------------

struct PowerLawFit {
  double slope;
  double intercept;     // log(y) at log(x) = 0
  double slope_stderr;  // standard error of the slope
  std::size_t points;
};

/// Least-squares line through (log x, log y).
inline PowerLawFit power_law_fit(const std::vector<double>& x, const std::vector<double>& y) {
  detail::require(x.size() == y.size(), "fit needs equal-length series");
  detail::require(x.size() >= 2, "fit needs at least 2 points");
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    detail::require(x[i] > 0.0 && y[i] > 0.0 && std::isfinite(x[i]) && std::isfinite(y[i]),
                    "power-law fit needs positive finite data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  detail::require(sxx > 0.0, "fit abscissae are degenerate");
  PowerLawFit f{};
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.points = n;
  if (n > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ly[i] - (f.intercept + f.slope * lx[i]);
      ssr += r * r;
    }
    f.slope_stderr = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  }
  return f;
}

namespace detail {

inline void successful_points(const ScanResult& s, std::vector<double>& x, std::vector<double>& y,
                              bool abs_axis) {
  require(s.all_ok(), "scan '" + s.axis + "' has failed points");
  x.clear();
  y.clear();
  for (std::size_t i = 0; i < s.size(); ++i) {
    x.push_back(abs_axis ? std::abs(s.axis_values[i]) : s.axis_values[i]);
    y.push_back(s.probability[i]);
  }
}

}  // namespace detail

/// Log-log slope of peak probability against |delta|; expected -2 in the
/// golden-rule regime |delta|/g >= 10, enforced for every point.
inline PowerLawFit golden_rule_fit(const ScanResult& scan) {
  detail::require(scan.axis == "peak_detuning" || scan.axis == "detuning",
                  "golden-rule fit needs a detuning scan, got '" + scan.axis + "'");
  const auto it = scan.fixed_parameters.find("g");
  detail::require(it != scan.fixed_parameters.end(), "scan does not record the coupling g");
  const double g = it->second;
  for (double d : scan.axis_values) {
    detail::require(std::abs(d) >= kGoldenRuleRatio * g,
                    "detuning " + gpe::detail::num(d) + " violates |delta|/g >= 10 (g=" +
                        gpe::detail::num(g) + ")");
  }
  std::vector<double> x, y;
  detail::successful_points(scan, x, y, true);
  return power_law_fit(x, y);
}

// --- signature report --------------------------------------------------------------------

enum class Verdict { Pass, Fail, Inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

struct SignatureCheck {
  Verdict verdict = Verdict::Inconclusive;
  double statistic = kNaN;
  double tolerance = kNaN;
  std::string detail;

  bool passed() const { return verdict == Verdict::Pass; }
};

struct SignatureReport {
  std::string model_tag;
  SignatureCheck threshold;               // argmax over detuning at delta = 0
  SignatureCheck intensity_independence;  // slope 1 in intensity, invariant detector gap
  SignatureCheck short_time;              // P(t) > 0 down to the smallest time tested

  bool all_passed() const {
    return threshold.passed() && intensity_independence.passed() && short_time.passed();
  }
};

struct SignatureTolerances {
  double intensity_slope = 0.01;
  double gap_relative = 1e-9;
};

struct SignatureInputs {
  const ScanResult* detuning = nullptr;
  const ScanResult* intensity = nullptr;
  const ScanResult* time = nullptr;
};

inline SignatureCheck threshold_check(const ScanResult& s) {
  detail::require(s.axis == "detuning", "threshold check needs a detuning scan");
  SignatureCheck c;
  if (!s.all_ok()) {
    c.verdict = Verdict::Fail;
    c.detail = "scan has failed points";
    return c;
  }
  double step = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i)
    step = std::max(step, std::abs(s.axis_values[i] - s.axis_values[i - 1]));
  const auto best = std::max_element(s.probability.begin(), s.probability.end()) - s.probability.begin();
  c.statistic = s.axis_values[static_cast<std::size_t>(best)];
  c.tolerance = step;

  // The resonance is only resolved when the scan reaches the first sinc zero
  // 2 pi / t on both sides and samples the central lobe.
  const auto t_it = s.fixed_parameters.find("t");
  const double t = t_it == s.fixed_parameters.end() ? kNaN : t_it->second;
  const double first_zero = 2.0 * std::numbers::pi / t;
  const double lo = *std::min_element(s.axis_values.begin(), s.axis_values.end());
  const double hi = *std::max_element(s.axis_values.begin(), s.axis_values.end());
  if (!std::isfinite(first_zero) || lo > -first_zero || hi < first_zero || step > 0.5 * first_zero) {
    c.verdict = Verdict::Inconclusive;
    c.detail = "scan does not resolve the sinc zeros at +/-2pi/t";
    return c;
  }
  c.verdict = std::abs(c.statistic) <= step * (1.0 + 1e-9) ? Verdict::Pass : Verdict::Fail;
  c.detail = "argmax detuning within one grid step of resonance";
  return c;
}

inline SignatureCheck intensity_check(const ScanResult& s, const SignatureTolerances& tol = {}) {
  detail::require(s.axis == "intensity", "intensity check needs an intensity scan");
  SignatureCheck c;
  c.tolerance = tol.intensity_slope;
  if (!s.all_ok()) {
    c.verdict = Verdict::Fail;
    c.detail = "scan has failed points";
    return c;
  }
  std::vector<double> x, y;
  detail::successful_points(s, x, y, false);
  const PowerLawFit fit = power_law_fit(x, y);
  c.statistic = fit.slope;
  double gap_spread = 0.0;
  bool gaps_finite = true;
  for (double gap : s.detector_gap) {
    if (!std::isfinite(gap)) gaps_finite = false;
    else gap_spread = std::max(gap_spread, std::abs(gap - s.detector_gap.front()));
  }
  const double gap_scale = std::max(1.0, std::abs(s.detector_gap.front()));
  const bool slope_ok = std::abs(fit.slope - 1.0) <= tol.intensity_slope;
  const bool gap_ok = gaps_finite && gap_spread <= tol.gap_relative * gap_scale;
  c.verdict = slope_ok && gap_ok ? Verdict::Pass : Verdict::Fail;
  c.detail = "detector gap " + gpe::detail::num(s.detector_gap.front()) + ", spread " +
             gpe::detail::num(gap_spread);
  return c;
}

inline SignatureCheck short_time_check(const ScanResult& s) {
  detail::require(s.axis == "time", "short-time check needs a time scan");
  SignatureCheck c;
  c.tolerance = 0.0;
  if (!s.all_ok()) {
    c.verdict = Verdict::Fail;
    c.detail = "scan has failed points";
    return c;
  }
  c.statistic = *std::min_element(s.probability.begin(), s.probability.end());
  const double t_min = *std::min_element(s.axis_values.begin(), s.axis_values.end());
  c.verdict = c.statistic > 0.0 ? Verdict::Pass : Verdict::Fail;
  c.detail = "minimum probability over t >= " + gpe::detail::num(t_min);
  // Short-time growth exponent from the two earliest points, for context.
  if (s.size() >= 2 && s.probability[0] > 0.0 && s.probability[1] > 0.0) {
    const double slope = std::log(s.probability[1] / s.probability[0]) /
                         std::log(s.axis_values[1] / s.axis_values[0]);
    c.detail += "; early log-log slope " + gpe::detail::num(slope);
  }
  return c;
}

/// Evaluates the three photo-electric signatures for any model family.
inline SignatureReport signature_report(const SignatureInputs& in, const SignatureTolerances& tol = {}) {
  detail::require(in.detuning && in.intensity && in.time,
                  "signature report needs detuning, intensity and time scans");
  SignatureReport r;
  r.model_tag = in.detuning->model_tag;
  r.threshold = threshold_check(*in.detuning);
  r.intensity_independence = intensity_check(*in.intensity, tol);
  r.short_time = short_time_check(*in.time);
  return r;
}

}  // namespace gpe
