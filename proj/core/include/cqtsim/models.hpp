// Copyright 2026 The cqtsim Authors
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

#ifndef CQTSIM_MODELS_HPP_
#define CQTSIM_MODELS_HPP_

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cqtsim/state.hpp"

namespace cqtsim {

/// How a model turns Kraus weights into outcome probabilities. The state
/// update is always A rho A^dagger / weight; only the probability weights
/// differ:
///   - KrausWeight: w_i = Tr(A_i rho A_i^dagger). Requires POVM completeness
///     (sum A_i^dagger A_i = I).
///   - EffectTrace: w_i = Tr(A_i rho), treating the operators themselves as
///     positive effects. Requires sum A_i = I and each A_i Hermitian PSD.
/// Probabilities are w_i / sum_j w_j in both cases.
enum class ProbabilityRule { KrausWeight, EffectTrace };

enum class SpinVariant { Povm, PaperLiteral };

struct EpsilonSpinParams {
  double epsilon = 0.0;
  double angle = 0.0;
  SpinVariant variant = SpinVariant::Povm;
};

struct BoxDetectorParams {
  double epsilon = 0.0;
};

/// Uniform grid x_min..x_max inclusive with n_points samples.
struct LatticeGrid {
  double x_min = 0.0;
  double x_max = 0.0;
  int n_points = 0;

  double dx() const { return (x_max - x_min) / (n_points - 1); }
  double point(int j) const { return x_min + j * dx(); }
};

struct GrwParams {
  double width = 0.0;  // the Gaussian scale a
  LatticeGrid grid;
};

using ModelParams =
    std::variant<EpsilonSpinParams, BoxDetectorParams, GrwParams>;

/// A finite indexed family of Kraus operators acting on one tensor factor.
/// Construction rejects any outcome whose minimum singular value is below
/// 1e-12 and enforces the completeness relation matching the probability
/// rule. Immutable and shareable.
class MeasurementModel {
 public:
  static MeasurementModel create(
      std::string name, std::vector<KrausOperator> outcomes,
      ProbabilityRule rule = ProbabilityRule::KrausWeight,
      std::optional<ModelParams> params = std::nullopt);

  const std::string& name() const { return name_; }
  const std::vector<KrausOperator>& outcomes() const { return outcomes_; }
  int outcome_count() const { return static_cast<int>(outcomes_.size()); }
  int dim() const { return static_cast<int>(outcomes_.front().matrix.rows()); }
  ProbabilityRule rule() const { return rule_; }
  const std::optional<ModelParams>& params() const { return params_; }

 private:
  MeasurementModel(std::string name, std::vector<KrausOperator> outcomes,
                   ProbabilityRule rule, std::optional<ModelParams> params)
      : name_(std::move(name)),
        outcomes_(std::move(outcomes)),
        rule_(rule),
        params_(std::move(params)) {}

  std::string name_;
  std::vector<KrausOperator> outcomes_;
  ProbabilityRule rule_;
  std::optional<ModelParams> params_;
};

struct ModelDefect {
  int outcome_index = -1;  // -1 for family-wide defects
  std::string what;
  double margin = 0.0;
};

struct ModelVerification {
  bool ok = true;
  std::vector<ModelDefect> defects;
};

/// Checks POVM completeness (sum A^dagger A = I within 1e-10) and strictly
/// positive minimum singular values on a raw operator family. Works on
/// families that MeasurementModel::create would reject.
ModelVerification verify_kraus_family(std::span<const KrausOperator> family);
ModelVerification verify_measurement_model(const MeasurementModel& model);

/// Two-outcome spin detector along the theta-axis in the x-z plane
/// (theta = 0 is the z-axis). The Povm variant uses square-root operators
/// diag(sqrt(1-eps), sqrt(eps)) rotated to the axis and is POVM-complete;
/// the PaperLiteral variant uses the effect pair diag(1-eps, eps) and
/// I minus that, with EffectTrace probabilities. Outcomes: "up", "down".
MeasurementModel epsilon_spin_model(double epsilon, double angle = 0.0,
                                    SpinVariant variant = SpinVariant::Povm);

/// Particle-in-a-box click detector on a dimension-2 factor with basis
/// {outside, inside}: A_no_click = diag(sqrt(1-eps), sqrt(eps)),
/// A_click = diag(sqrt(eps), sqrt(1-eps)). Exactly POVM-complete and
/// support-preserving. Outcomes: "no_click", "click".
MeasurementModel box_detector_model(double epsilon);

/// Family of Gaussian localization operators, one per lattice center:
/// diagonal profiles exp(-(x - x0)^2 / a^2), globally rescaled so the
/// family is POVM-complete. Requires at least 8 grid points, a >= 2 dx,
/// and rejects widths so small that a far-edge entry underflows the
/// minimum-singular-value floor. Outcomes labeled "x0=<center>".
MeasurementModel grw_localization_model(double width, const LatticeGrid& grid);

/// Single-particle wave function sampled on a lattice, normalized to
/// sum |psi|^2 dx = 1 within 1e-10.
class LatticeWavefunction {
 public:
  static LatticeWavefunction create(LatticeGrid grid, Vector amplitudes);
  static LatticeWavefunction uniform(LatticeGrid grid);

  const LatticeGrid& grid() const { return grid_; }
  const Vector& amplitudes() const { return amplitudes_; }

  /// As a single-factor QuantumState (amplitudes scaled by sqrt(dx)).
  QuantumState to_quantum_state() const;

 private:
  LatticeWavefunction(LatticeGrid grid, Vector amplitudes)
      : grid_(grid), amplitudes_(std::move(amplitudes)) {}

  LatticeGrid grid_;
  Vector amplitudes_;
};

}  // namespace cqtsim

#endif  // CQTSIM_MODELS_HPP_
