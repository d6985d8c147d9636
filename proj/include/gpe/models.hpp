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

// Hamiltonians for the five model families and the gravito-phononic
// parameter mappings. Natural units (hbar = 1) throughout; the SI layer is
// confined to GravitoParams and the functions that consume it.
//
// Factor layout:
//   Jaynes-Cummings   Boson(field_cutoff) x TwoLevel      (field, qubit)
//   beam splitter     Boson(field_cutoff) x Boson(det)    (field a, detector b)
//   driven qubit      TwoLevel
//   driven oscillator Boson(detector_cutoff)

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>

#include "gpe/constants.hpp"
#include "gpe/error.hpp"
#include "gpe/hilbert.hpp"

namespace gpe {

namespace detail {

inline void require_positive(double v, const char* name) {
  require(std::isfinite(v) && v > 0.0, std::string(name) + " must be finite and > 0");
}

inline void require_nonnegative(double v, const char* name) {
  require(std::isfinite(v) && v >= 0.0, std::string(name) + " must be finite and >= 0");
}

inline void require_finite(double v, const char* name) {
  require(std::isfinite(v), std::string(name) + " must be finite");
}

}  // namespace detail

/// Classical field mode of frequency nu driving a qubit of gap omega through
/// lambda * x * sigma_x, with x(t) = x0 sin(nu t) when there is no back-reaction.
struct QubitSemiClassicalParams {
  double omega = 1.0;
  double nu = 1.0;
  double lambda = 0.0;
  double x0 = 1.0;

  void validate() const {
    detail::require_positive(omega, "omega");
    detail::require_positive(nu, "nu");
    detail::require_nonnegative(lambda, "lambda");
    detail::require_finite(x0, "x0");
  }
};

struct JaynesCummingsParams {
  double nu = 1.0;
  double omega = 1.0;
  double g = 0.0;
  Index field_cutoff = 3;
  // Builds g(a sigma_- + a^dag sigma_+) instead of the rotating-wave form
  // g(a sigma_+ + a^dag sigma_-). Kept only for side-by-side comparison.
  bool counter_rotating_form = false;

  void validate() const {
    detail::require_positive(nu, "nu");
    detail::require_positive(omega, "omega");
    detail::require_nonnegative(g, "g");
    detail::require(field_cutoff >= 2, "field_cutoff must be >= 2");
  }
};

struct BeamSplitterParams {
  double nu = 1.0;
  double omega = 1.0;
  double g = 0.0;
  Index field_cutoff = 2;
  Index detector_cutoff = 2;
  Complex alpha{0.0, 0.0};
  double tail_tolerance = 1e-12;

  CoherentSpec coherent() const { return {alpha, tail_tolerance}; }

  void validate() const {
    detail::require_positive(nu, "nu");
    detail::require_positive(omega, "omega");
    detail::require_nonnegative(g, "g");
    detail::require(field_cutoff >= 2 && detector_cutoff >= 2, "cutoffs must be >= 2");
    coherent().validate();
    const double tail = poisson_tail(std::norm(alpha), field_cutoff);
    detail::require(tail <= tail_tolerance,
                    "field_cutoff " + std::to_string(field_cutoff) + " discards coherent tail " +
                        detail::num(tail) + " > " + detail::num(tail_tolerance));
  }
};

/// Classical drive x(t) = x0 sin(nu t) coupled to a quantum detector mode
/// of frequency omega through lambda * x * (b + b^dag).
struct DrivenOscillatorParams {
  double omega = 1.0;
  double nu = 1.0;
  double lambda = 0.0;
  double x0 = 1.0;
  Index detector_cutoff = 4;

  void validate() const {
    detail::require_positive(omega, "omega");
    detail::require_positive(nu, "nu");
    detail::require_nonnegative(lambda, "lambda");
    detail::require_finite(x0, "x0");
    detail::require(detector_cutoff >= 2, "detector_cutoff must be >= 2");
  }
};

/// Resonant-mass detector in SI units.
struct GravitoParams {
  double mass = 1.0;     // kg
  double length = 1.0;   // m
  double nu = 1.0;       // gravitational-wave angular frequency, rad/s
  double omega0 = 1.0;   // detector mode angular frequency, rad/s
  double h0 = 0.0;       // strain amplitude
  double volume = 1.0;   // quantization volume, m^3
  Index detector_cutoff = 4;

  void validate() const {
    detail::require_positive(mass, "mass");
    detail::require_positive(length, "length");
    detail::require_positive(nu, "nu");
    detail::require_positive(omega0, "omega0");
    detail::require_positive(h0, "h0");
    detail::require_positive(volume, "volume");
    detail::require(detector_cutoff >= 2, "detector_cutoff must be >= 2");
  }
};

using ModelParams = std::variant<QubitSemiClassicalParams, JaynesCummingsParams,
                                 BeamSplitterParams, DrivenOscillatorParams, GravitoParams>;

struct ModelSpec {
  ModelParams params;
  // Classical variables follow the mean-field force of the quantum detector.
  bool neo_classical = false;

  void validate() const {
    std::visit([](const auto& p) { p.validate(); }, params);
    if (neo_classical) {
      detail::require(std::holds_alternative<QubitSemiClassicalParams>(params) ||
                          std::holds_alternative<DrivenOscillatorParams>(params),
                      "back-reaction is only defined for driven qubit and driven oscillator "
                      "models");
    }
  }

  bool is_full_quantum() const {
    return std::holds_alternative<JaynesCummingsParams>(params) ||
           std::holds_alternative<BeamSplitterParams>(params);
  }

  std::string family() const {
    struct Namer {
      std::string operator()(const QubitSemiClassicalParams&) const { return "driven_qubit"; }
      std::string operator()(const JaynesCummingsParams&) const { return "jaynes_cummings"; }
      std::string operator()(const BeamSplitterParams&) const { return "beam_splitter"; }
      std::string operator()(const DrivenOscillatorParams&) const { return "driven_oscillator"; }
      std::string operator()(const GravitoParams&) const { return "gravito"; }
    };
    return std::visit(Namer{}, params);
  }
};

// --- spaces -----------------------------------------------------------------

inline SpaceDescriptor jc_space(const JaynesCummingsParams& p) {
  return SpaceDescriptor({Factor::boson(p.field_cutoff), Factor::two_level()});
}

inline SpaceDescriptor beam_splitter_space(const BeamSplitterParams& p) {
  return SpaceDescriptor({Factor::boson(p.field_cutoff), Factor::boson(p.detector_cutoff)});
}

inline SpaceDescriptor qubit_space() { return SpaceDescriptor::two_level(); }

inline SpaceDescriptor oscillator_space(const DrivenOscillatorParams& p) {
  return SpaceDescriptor::boson(p.detector_cutoff);
}

// --- Hamiltonians -------------------------------------------------------------

// Hamiltonian split by subsystem plus the coupling. `field` is
// empty when the field is classical; its energy then lives outside the
// operator algebra.
struct HamiltonianParts {
  std::optional<Operator> field;
  Operator detector;
  Operator interaction;

  Operator total() const {
    Operator h = detector + interaction;
    if (field) h += *field;
    return h;
  }
};

inline HamiltonianParts jc_parts(const JaynesCummingsParams& p) {
  p.validate();
  const auto space = jc_space(p);
  const Operator a = annihilation(space, 0);
  const Operator ad = creation(space, 0);
  const Operator sp = pauli(space, 1, Pauli::Plus);
  const Operator sm = pauli(space, 1, Pauli::Minus);
  const Operator coupling = p.counter_rotating_form ? a * sm + ad * sp : a * sp + ad * sm;
  return {p.nu * number(space, 0), (0.5 * p.omega) * pauli(space, 1, Pauli::Z),
          Operator(space, p.g * coupling.matrix(), true)};
}

/// H = nu a^dag a + (omega/2) sigma_z + g (a sigma_+ + a^dag sigma_-).
inline Operator build_jc_hamiltonian(const JaynesCummingsParams& p) { return jc_parts(p).total(); }

inline HamiltonianParts beam_splitter_parts(const BeamSplitterParams& p) {
  p.validate();
  const auto space = beam_splitter_space(p);
  const Operator a = annihilation(space, 0);
  const Operator b = annihilation(space, 1);
  const Operator hop = a * b.adjoint() + b * a.adjoint();
  return {p.nu * number(space, 0), p.omega * number(space, 1),
          Operator(space, p.g * hop.matrix(), true)};
}

/// H = nu a^dag a + omega b^dag b + g (a b^dag + b a^dag).
inline Operator build_beam_splitter_hamiltonian(const BeamSplitterParams& p) {
  return beam_splitter_parts(p).total();
}

/// Total excitation number of the full-quantum models; conserved under the
/// rotating-wave couplings.
inline Operator excitation_number(const ModelSpec& model) {
  if (const auto* jc = std::get_if<JaynesCummingsParams>(&model.params)) {
    const auto space = jc_space(*jc);
    const Operator sp = pauli(space, 1, Pauli::Plus);
    return number(space, 0) + Operator(space, (sp * sp.adjoint()).matrix(), true);
  }
  if (const auto* bs = std::get_if<BeamSplitterParams>(&model.params)) {
    const auto space = beam_splitter_space(*bs);
    return number(space, 0) + number(space, 1);
  }
  throw DomainError("excitation number is only defined for full-quantum models");
}

inline HamiltonianParts driven_qubit_parts(const QubitSemiClassicalParams& p, double x) {
  p.validate();
  const auto space = qubit_space();
  return {std::nullopt, (0.5 * p.omega) * pauli(space, 0, Pauli::Z),
          (p.lambda * x) * pauli(space, 0, Pauli::X)};
}

/// Quantum part (omega/2) sigma_z + lambda x sigma_x at classical coordinate x.
inline Operator build_driven_qubit_hamiltonian(const QubitSemiClassicalParams& p, double x) {
  return driven_qubit_parts(p, x).total();
}

inline HamiltonianParts driven_oscillator_parts(const DrivenOscillatorParams& p, double x) {
  p.validate();
  const auto space = oscillator_space(p);
  const Operator b = annihilation(space, 0);
  return {std::nullopt, p.omega * number(space, 0),
          Operator(space, p.lambda * x * (b.matrix() + b.matrix().adjoint()), true)};
}

/// Quantum part omega b^dag b + lambda x (b + b^dag) at classical coordinate x.
inline Operator build_driven_oscillator_hamiltonian(const DrivenOscillatorParams& p, double x) {
  return driven_oscillator_parts(p, x).total();
}

/// Two-level Rabi problem in the frame rotating with the drive:
/// H = (delta/2) sigma_z + (g/2) sigma_x, with delta = omega_0 - nu.
inline Operator build_rabi_hamiltonian(double g, double delta) {
  detail::require_finite(g, "g");
  detail::require_finite(delta, "delta");
  const auto space = qubit_space();
  return (0.5 * delta) * pauli(space, 0, Pauli::Z) + (0.5 * g) * pauli(space, 0, Pauli::X);
}

// --- gravito-phononic constants --------------------------------------------------

/// Vacuum coupling g_{q,nu} = (1/c) sqrt(8 pi G hbar / (V nu)), evaluated
/// literally in SI units.
inline double gravito_vacuum_coupling(const GravitoParams& p,
                                      const PhysicalConstants& k = codata2018()) {
  detail::require_positive(p.volume, "volume");
  detail::require_positive(p.nu, "nu");
  k.validate();
  return std::sqrt(8.0 * std::numbers::pi * k.G * k.hbar / (p.volume * p.nu)) / k.c;
}

/// Energy density of the classical wave, c^2/(32 pi G) nu^2 h0^2, in J/m^3.
inline double gw_energy_density(const GravitoParams& p, const PhysicalConstants& k = codata2018()) {
  detail::require_finite(p.h0, "h0");
  detail::require_finite(p.nu, "nu");
  k.validate();
  return k.c * k.c / (32.0 * std::numbers::pi * k.G) * p.nu * p.nu * p.h0 * p.h0;
}

struct GravitoMapping {
  double lambda_si;           // M L nu^2 / pi^2, N (energy per displacement)
  double x0_si;               // sqrt(hbar / (M omega0)), m
  double drive_coefficient;   // (L/pi^2) sqrt(M nu^4 hbar / omega0), J per unit strain
  // Driven-oscillator model in units of the detector frequency: omega = 1,
  // nu = nu/omega0, x(t) = h(t) = h0 sin(nu t), lambda = drive_coefficient/(hbar omega0).
  DrivenOscillatorParams natural;
};

inline GravitoMapping gravito_classical_params(const GravitoParams& p,
                                               const PhysicalConstants& k = codata2018()) {
  p.validate();
  k.validate();
  const double pi2 = std::numbers::pi * std::numbers::pi;
  GravitoMapping m{};
  m.lambda_si = p.mass * p.length * p.nu * p.nu / pi2;
  m.x0_si = std::sqrt(k.hbar / (p.mass * p.omega0));
  m.drive_coefficient =
      p.length / pi2 * std::sqrt(p.mass * p.nu * p.nu * p.nu * p.nu * k.hbar / p.omega0);
  m.natural.omega = 1.0;
  m.natural.nu = p.nu / p.omega0;
  m.natural.lambda = m.drive_coefficient / (k.hbar * p.omega0);
  m.natural.x0 = p.h0;
  m.natural.detector_cutoff = p.detector_cutoff;
  return m;
}

}  // namespace gpe
