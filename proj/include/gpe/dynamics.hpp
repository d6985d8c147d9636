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

// Time evolution engines and the closed-form transition probabilities they
// are checked against.
//
//   evolve_unitary  time-independent H, exact spectral propagation (or RK4)
//   evolve_driven   prescribed classical drive x(t) = x0 sin(nu t), no back-reaction
//   evolve_hybrid   mean-field classical/quantum dynamics with back-reaction
//
// The closed forms below share one sinc-family kernel with a series branch
// at vanishing detuning.

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gpe/error.hpp"
#include "gpe/hilbert.hpp"
#include "gpe/models.hpp"

namespace gpe {

enum class Method { MatrixExponential, RK4, MidpointPiecewise };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::MatrixExponential: return "matrix_exponential";
    case Method::RK4: return "rk4";
    case Method::MidpointPiecewise: return "midpoint";
  }
  return "unknown";
}

struct EvolutionConfig {
  double dt = 0.01;
  double t_max = 1.0;
  Method method = Method::MatrixExponential;
  double norm_drift_tol = kNormTol;
  double top_level_tol = 1e-8;
  // Keep every n-th step in the trajectory; the final step is always kept.
  std::size_t record_stride = 1;

  void validate() const {
    detail::require(std::isfinite(dt) && dt > 0.0, "dt must be > 0");
    detail::require(std::isfinite(t_max) && t_max >= dt * (1.0 - 1e-12), "t_max must be >= dt");
    detail::require(norm_drift_tol > 0.0 && norm_drift_tol < 1.0,
                    "norm_drift_tol must lie in (0, 1)");
    detail::require(top_level_tol > 0.0 && top_level_tol < 1.0, "top_level_tol must lie in (0, 1)");
    detail::require(record_stride >= 1, "record_stride must be >= 1");
  }

  // dt is an upper bound: the horizon is split into an integer number of
  // equal steps.
  std::size_t steps() const {
    return static_cast<std::size_t>(std::max(1.0, std::ceil(t_max / dt - 1e-9)));
  }
  double step() const { return t_max / static_cast<double>(steps()); }
};

struct PhaseSpacePoint {
  double x = 0.0;
  double p = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::optional<std::vector<PhaseSpacePoint>> classical;

  std::size_t size() const { return times.size(); }
  const StateVector& final_state() const { return states.back(); }
};

struct HybridState {
  double x = 0.0;
  double p = 0.0;
  StateVector psi;
};

namespace detail {

// Largest population found on the top level of any boson factor.
inline double top_level_population(const SpaceDescriptor& space, const Vector& v) {
  double worst = 0.0;
  for (std::size_t k = 0; k < space.factor_count(); ++k) {
    const auto& f = space.factor(k);
    if (!f.is_boson()) continue;
    double p = 0.0;
    for (Index i = 0; i < v.size(); ++i)
      if (space.level(i, k) == f.dim - 1) p += std::norm(v(i));
    worst = std::max(worst, p);
  }
  return worst;
}

inline void check_envelope(const SpaceDescriptor& space, const Vector& v,
                           const EvolutionConfig& cfg, double t) {
  const double drift = std::abs(v.norm() - 1.0);
  if (!(drift <= cfg.norm_drift_tol)) {
    throw ToleranceError("norm drift " + detail::num(drift) + " exceeds " +
                         detail::num(cfg.norm_drift_tol) + " at t=" + detail::num(t));
  }
  const double top = top_level_population(space, v);
  if (top > cfg.top_level_tol) {
    throw ToleranceError("top Fock level population " + detail::num(top) + " exceeds " +
                         detail::num(cfg.top_level_tol) + " at t=" + detail::num(t) +
                         "; raise the cutoff");
  }
}

struct Spectral {
  Eigen::VectorXd energies;
  Matrix vectors;

  explicit Spectral(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success) throw ToleranceError("eigendecomposition failed");
    energies = solver.eigenvalues();
    vectors = solver.eigenvectors();
  }

  Vector phases(double t) const {
    Vector ph(energies.size());
    for (Index i = 0; i < energies.size(); ++i) ph(i) = std::polar(1.0, -energies(i) * t);
    return ph;
  }

  Vector propagate(const Vector& psi, double t) const {
    return vectors * phases(t).cwiseProduct(vectors.adjoint() * psi);
  }

  Matrix propagator(double t) const { return vectors * phases(t).asDiagonal() * vectors.adjoint(); }
};

inline Vector rk4_step(const Matrix& h0, const Matrix* coupling, double f0, double fmid,
                       double f1, const Vector& psi, double h) {
  const Complex mi{0.0, -1.0};
  auto rhs = [&](double f, const Vector& v) -> Vector {
    Vector out = h0 * v;
    if (coupling) out += f * ((*coupling) * v);
    return mi * out;
  };
  const Vector k1 = rhs(f0, psi);
  const Vector k2 = rhs(fmid, psi + 0.5 * h * k1);
  const Vector k3 = rhs(fmid, psi + 0.5 * h * k2);
  const Vector k4 = rhs(f1, psi + h * k3);
  return psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline bool should_record(std::size_t k, std::size_t n, std::size_t stride) {
  return k % stride == 0 || k == n;
}

// Quantum detector driven by a classical coordinate: H(x) = H0 + lambda x V.
struct DrivenSystem {
  SpaceDescriptor space;
  Matrix h0;
  Matrix coupling;  // V, hermitian
  double lambda;
  double nu;
  double x0;
};

inline DrivenSystem driven_system(const QubitSemiClassicalParams& p) {
  p.validate();
  const auto parts = driven_qubit_parts(p, 1.0);
  return {qubit_space(), parts.detector.matrix(), pauli(qubit_space(), 0, Pauli::X).matrix(),
          p.lambda, p.nu, p.x0};
}

inline DrivenSystem driven_system(const DrivenOscillatorParams& p) {
  p.validate();
  const auto space = oscillator_space(p);
  const Matrix b = annihilation(space, 0).matrix();
  return {space, p.omega * number(space, 0).matrix(), b + b.adjoint(), p.lambda, p.nu, p.x0};
}

// Integral over [0, h] of exp(i w s).
inline Complex phase_integral(double w, double h) {
  const double u = w * h;
  if (std::abs(u) < 1e-6) return {h * (1.0 - u * u / 6.0), h * (0.5 * u - u * u * u / 24.0)};
  return (std::polar(1.0, u) - 1.0) / Complex(0.0, w);
}

}  // namespace detail

/// Propagates psi0 under a time-independent hermitian H on the dt grid.
/// MatrixExponential and MidpointPiecewise are exact; RK4 is fourth order.
inline Trajectory evolve_unitary(const Operator& h, const StateVector& psi0,
                                 const EvolutionConfig& cfg) {
  cfg.validate();
  detail::require(h.hermitian_hint(), "evolve_unitary needs a hermitian Hamiltonian");
  detail::require(h.space() == psi0.space(), "Hamiltonian and state live on different spaces");
  const std::size_t n = cfg.steps();
  const double step = cfg.step();
  const auto& space = psi0.space();

  Trajectory traj;
  auto record = [&](std::size_t k, const Vector& v) {
    const double t = static_cast<double>(k) * step;
    detail::check_envelope(space, v, cfg, t);
    if (detail::should_record(k, n, cfg.record_stride)) {
      traj.times.push_back(t);
      traj.states.emplace_back(space, v, cfg.norm_drift_tol);
    }
  };

  const Vector& v0 = psi0.amplitudes();
  if (cfg.method == Method::RK4) {
    Vector v = v0;
    record(0, v);
    for (std::size_t k = 1; k <= n; ++k) {
      v = detail::rk4_step(h.matrix(), nullptr, 0, 0, 0, v, step);
      record(k, v);
    }
    return traj;
  }

  const detail::Spectral spectral(h.matrix());
  if (cfg.method == Method::MatrixExponential) {
    const Vector c0 = spectral.vectors.adjoint() * v0;
    for (std::size_t k = 0; k <= n; ++k) {
      const double t = static_cast<double>(k) * step;
      record(k, spectral.vectors * spectral.phases(t).cwiseProduct(c0));
    }
    return traj;
  }

  const Matrix u = spectral.propagator(step);
  Vector v = v0;
  record(0, v);
  for (std::size_t k = 1; k <= n; ++k) {
    v = u * v;
    record(k, v);
  }
  return traj;
}

namespace detail {

inline Trajectory evolve_driven_system(const DrivenSystem& sys, const StateVector& psi0,
                                       const EvolutionConfig& cfg) {
  cfg.validate();
  require(cfg.method != Method::MatrixExponential,
          "driven evolution has a time-dependent Hamiltonian; use midpoint or rk4");
  require(psi0.space() == sys.space, "initial state does not match the detector space");
  const std::size_t n = cfg.steps();
  const double step = cfg.step();
  auto x_at = [&](double t) { return sys.x0 * std::sin(sys.nu * t); };
  auto p_at = [&](double t) { return sys.x0 * sys.nu * std::cos(sys.nu * t); };

  Trajectory traj;
  traj.classical.emplace();
  auto record = [&](std::size_t k, const Vector& v) {
    const double t = static_cast<double>(k) * step;
    check_envelope(sys.space, v, cfg, t);
    if (should_record(k, n, cfg.record_stride)) {
      traj.times.push_back(t);
      traj.states.emplace_back(sys.space, v, cfg.norm_drift_tol);
      traj.classical->push_back({x_at(t), p_at(t)});
    }
  };

  Vector v = psi0.amplitudes();
  record(0, v);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * step;
    if (cfg.method == Method::RK4) {
      v = rk4_step(sys.h0, &sys.coupling, sys.lambda * x_at(t), sys.lambda * x_at(t + 0.5 * step),
                   sys.lambda * x_at(t + step), v, step);
    } else {
      const Matrix hmid = sys.h0 + (sys.lambda * x_at(t + 0.5 * step)) * sys.coupling;
      v = Spectral(hmid).propagate(v, step);
    }
    record(k + 1, v);
  }
  return traj;
}

}  // namespace detail

/// Detector driven by the prescribed classical field x(t) = x0 sin(nu t).
/// The trajectory carries the classical orbit (x, p = x0 nu cos(nu t)).
inline Trajectory evolve_driven(const DrivenOscillatorParams& p, const StateVector& psi0,
                                const EvolutionConfig& cfg) {
  return detail::evolve_driven_system(detail::driven_system(p), psi0, cfg);
}

inline Trajectory evolve_driven(const QubitSemiClassicalParams& p, const StateVector& psi0,
                                const EvolutionConfig& cfg) {
  return detail::evolve_driven_system(detail::driven_system(p), psi0, cfg);
}

/// Mean-field hybrid dynamics. The classical mode has energy
/// E_F = p^2/2 + nu^2 x^2/2 and feels the force -lambda <V>, V = sigma_x or
/// b + b^dag; the quantum detector evolves under H(x).
///
/// Strang splitting per step: half a step of the free classical oscillator,
/// one quantum step at the midpoint x (which also applies the exact impulse
/// -lambda * integral <V> ds to p), half a step of the free oscillator.
/// Every substep is the exact flow of a piece of the mean-field energy.
inline Trajectory evolve_hybrid(const ModelSpec& model, const HybridState& s0,
                                const EvolutionConfig& cfg) {
  model.validate();
  cfg.validate();
  detail::require(model.neo_classical, "evolve_hybrid needs a model with back-reaction enabled");
  detail::DrivenSystem sys = std::visit(
      [](const auto& p) -> detail::DrivenSystem {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, QubitSemiClassicalParams> ||
                      std::is_same_v<T, DrivenOscillatorParams>) {
          return detail::driven_system(p);
        } else {
          throw DomainError("evolve_hybrid supports driven qubit and driven oscillator models");
        }
      },
      model.params);
  detail::require(s0.psi.space() == sys.space, "initial state does not match the detector space");

  const std::size_t n = cfg.steps();
  const double step = cfg.step();
  const double nu = sys.nu;
  double x = s0.x;
  double p = s0.p;
  Vector v = s0.psi.amplitudes();

  auto rotate = [&](double tau) {
    const double c = std::cos(nu * tau);
    const double s = std::sin(nu * tau);
    const double xn = x * c + p * s / nu;
    p = p * c - nu * x * s;
    x = xn;
  };

  Trajectory traj;
  traj.classical.emplace();
  auto record = [&](std::size_t k) {
    const double t = static_cast<double>(k) * step;
    if (!std::isfinite(x) || !std::isfinite(p)) {
      throw ToleranceError("classical variables became non-finite at t=" + detail::num(t));
    }
    detail::check_envelope(sys.space, v, cfg, t);
    if (detail::should_record(k, n, cfg.record_stride)) {
      traj.times.push_back(t);
      traj.states.emplace_back(sys.space, v, cfg.norm_drift_tol);
      traj.classical->push_back({x, p});
    }
  };

  record(0);
  for (std::size_t k = 0; k < n; ++k) {
    rotate(0.5 * step);
    const detail::Spectral spec(sys.h0 + (sys.lambda * x) * sys.coupling);
    const Vector c = spec.vectors.adjoint() * v;
    const Matrix w = spec.vectors.adjoint() * sys.coupling * spec.vectors;
    Complex impulse{0.0, 0.0};
    for (Index j = 0; j < c.size(); ++j)
      for (Index l = 0; l < c.size(); ++l)
        impulse += std::conj(c(j)) * w(j, l) * c(l) *
                   detail::phase_integral(spec.energies(j) - spec.energies(l), step);
    p -= sys.lambda * impulse.real();
    v = spec.vectors * spec.phases(step).cwiseProduct(c);
    rotate(0.5 * step);
    record(k + 1);
  }
  return traj;
}

// --- closed forms ------------------------------------------------------------------

inline constexpr double kSeriesThreshold = 1e-6;

/// sin^2(w t / 2) / w^2, with the removable singularity at w t -> 0 handled by
/// its series t^2/4 (1 - (w t)^2 / 12).
inline double sin_half_sq_over(double w, double t) {
  const double u = w * t;
  if (std::abs(u) < kSeriesThreshold) return 0.25 * t * t * (1.0 - u * u / 12.0);
  const double s = std::sin(0.5 * u);
  return s * s / (w * w);
}

/// Rabi transition probability g^2/(g^2+delta^2) sin^2(sqrt(g^2+delta^2) t / 2).
inline double rabi_probability(double g, double delta, double t) {
  const double rabi = std::hypot(g, delta);
  return g * g * sin_half_sq_over(rabi, t);
}

/// Weak-coupling qubit excitation probability lambda^2 sin^2((omega-nu)t/2)/(omega-nu)^2.
/// Not clamped: values near or above 1 mean the formula is out of its regime.
inline double perturbative_pe(double lambda, double omega, double nu, double t) {
  return lambda * lambda * sin_half_sq_over(omega - nu, t);
}

struct GoldenRuleValue {
  double probability;
  // |delta|/g >= 10; outside this ratio the value is not a golden-rule limit.
  bool regime_valid;
};

inline constexpr double kGoldenRuleRatio = 10.0;

/// (g^2/delta^2) sin^2(delta t / 2).
inline GoldenRuleValue golden_rule_limit(double g, double delta, double t) {
  const bool ok = g == 0.0 || std::abs(delta) >= kGoldenRuleRatio * std::abs(g);
  return {g * g * sin_half_sq_over(delta, t), ok};
}

struct DysonResult {
  double closed_form;
  double double_integral;
};

namespace detail {

// Composite 20-point Gauss-Legendre rule on [0, t] with panels no longer
// than a quarter period of the fastest oscillation `w`.
inline void composite_gauss(double t, double w, std::vector<double>& nodes,
                            std::vector<double>& weights) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  const auto& abscissa = Rule::abscissa();
  const auto& wts = Rule::weights();
  const std::size_t panels =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::abs(w) * t / (0.5 * std::numbers::pi))));
  const double width = t / static_cast<double>(panels);
  nodes.clear();
  weights.clear();
  for (std::size_t k = 0; k < panels; ++k) {
    const double mid = (static_cast<double>(k) + 0.5) * width;
    const double half = 0.5 * width;
    // The rule stores non-negative abscissae; the odd-order centre node is absent for n = 20.
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      const double a = abscissa[i];
      if (a == 0.0) {
        nodes.push_back(mid);
        weights.push_back(half * wts[i]);
        continue;
      }
      nodes.push_back(mid - half * a);
      weights.push_back(half * wts[i]);
      nodes.push_back(mid + half * a);
      weights.push_back(half * wts[i]);
    }
  }
}

}  // namespace detail

/// First-order transition probability of the detector into n = 1 for the
/// beam splitter with a coherent field, by two routes: the closed form
/// 4 g^2 |alpha|^2 sin^2((nu-omega)t/2)/(nu-omega)^2 and a direct quadrature of
/// g^2 |alpha|^2 int_0^t int_0^t exp(-i(omega-nu)(t'-t'')) dt' dt''.
/// Meaningful while g^2 |alpha|^2 t^2 << 1.
inline DysonResult dyson_first_order(const BeamSplitterParams& p, double t) {
  detail::require(std::isfinite(t) && t >= 0.0, "time must be finite and >= 0");
  const double delta = p.nu - p.omega;
  const double scale = p.g * p.g * std::norm(p.alpha);
  DysonResult r{4.0 * scale * sin_half_sq_over(delta, t), 0.0};
  if (t == 0.0) return r;
  std::vector<double> nodes, weights;
  detail::composite_gauss(t, delta, nodes, weights);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = 0; j < nodes.size(); ++j)
      sum += weights[i] * weights[j] * std::cos(delta * (nodes[i] - nodes[j]));
  r.double_integral = scale * sum;
  return r;
}

/// lambda^2 x0^2 nu^4 (t^2/4) sinc^2(delta t / 2), delta = nu - omega.
inline double one_phonon_probability(const DrivenOscillatorParams& p, double t) {
  const double nu2 = p.nu * p.nu;
  return p.lambda * p.lambda * p.x0 * p.x0 * nu2 * nu2 * sin_half_sq_over(p.nu - p.omega, t);
}

enum class DriveKernel {
  Acceleration,  // x''(s) = -x0 nu^2 sin(nu s)
  Displacement,  // x(s) = x0 sin(nu s), the kernel generated by lambda x (b + b^dag)
};

/// Coherent amplitude beta(t) = -i lambda int_0^t k(s) e^{i omega s} ds of the
/// driven detector, by quadrature.
inline Complex coherent_amplitude_beta(const DrivenOscillatorParams& p, double t,
                                       DriveKernel kernel = DriveKernel::Acceleration) {
  detail::require(std::isfinite(t) && t >= 0.0, "time must be finite and >= 0");
  if (t == 0.0) return {0.0, 0.0};
  std::vector<double> nodes, weights;
  detail::composite_gauss(t, p.nu + p.omega, nodes, weights);
  const double amp = kernel == DriveKernel::Acceleration ? -p.x0 * p.nu * p.nu : p.x0;
  Complex sum{0.0, 0.0};
  for (std::size_t i = 0; i < nodes.size(); ++i)
    sum += weights[i] * amp * std::sin(p.nu * nodes[i]) * std::polar(1.0, p.omega * nodes[i]);
  return Complex(0.0, -p.lambda) * sum;
}

/// Fock-n population of the coherent state |beta>.
inline double coherent_fock_population(Complex beta, Index n) {
  const double m = std::norm(beta);
  if (m == 0.0) return n == 0 ? 1.0 : 0.0;
  const double nd = static_cast<double>(n);
  return std::exp(-m + nd * std::log(m) - std::lgamma(nd + 1.0));
}

}  // namespace gpe
