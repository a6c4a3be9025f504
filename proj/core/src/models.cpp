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

#include "cqtsim/models.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "cqtsim/errors.hpp"

namespace cqtsim {

namespace {

constexpr double kCompletenessTolerance = 1e-10;
constexpr double kEffectEigenvalueFloor = -1e-10;

void check_family_shape(std::span<const KrausOperator> family) {
  if (family.empty()) {
    throw ConfigError("measurement model needs at least one outcome");
  }
  const auto dim = family.front().matrix.rows();
  for (std::size_t i = 0; i < family.size(); ++i) {
    const Matrix& m = family[i].matrix;
    if (m.rows() != m.cols()) {
      std::ostringstream msg;
      msg << "outcome " << i << " ('" << family[i].outcome_label
          << "') is not square";
      throw ConfigError(msg.str());
    }
    if (m.rows() != dim) {
      std::ostringstream msg;
      msg << "outcome " << i << " ('" << family[i].outcome_label
          << "') has dimension " << m.rows() << ", expected " << dim;
      throw ConfigError(msg.str());
    }
  }
}

double povm_completeness_residual(std::span<const KrausOperator> family) {
  const auto dim = family.front().matrix.rows();
  Matrix sum = Matrix::Zero(dim, dim);
  for (const auto& outcome : family) {
    sum += outcome.matrix.adjoint() * outcome.matrix;
  }
  return (sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

double effect_completeness_residual(std::span<const KrausOperator> family) {
  const auto dim = family.front().matrix.rows();
  Matrix sum = Matrix::Zero(dim, dim);
  for (const auto& outcome : family) {
    sum += outcome.matrix;
  }
  return (sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

// Real rotation taking the z-axis to the theta-axis in the x-z plane:
// |up_theta> = cos(theta/2)|up> + sin(theta/2)|down>.
Eigen::Matrix2cd axis_rotation(double theta) {
  Eigen::Matrix2cd r;
  r << std::cos(theta / 2.0), -std::sin(theta / 2.0),
      std::sin(theta / 2.0), std::cos(theta / 2.0);
  return r;
}

std::string format_center(double x0) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "x0=%.12g", x0);
  return buffer;
}

}  // namespace

MeasurementModel MeasurementModel::create(std::string name,
                                          std::vector<KrausOperator> outcomes,
                                          ProbabilityRule rule,
                                          std::optional<ModelParams> params) {
  check_family_shape(outcomes);
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const double sigma_min = min_singular_value(outcomes[i].matrix);
    if (sigma_min < kMinSingularValueFloor) {
      std::ostringstream msg;
      msg << "model '" << name << "': outcome " << i << " ('"
          << outcomes[i].outcome_label << "') has minimum singular value "
          << sigma_min << " below " << kMinSingularValueFloor
          << "; no outcome may annihilate a state";
      throw ConfigError(msg.str());
    }
  }
  if (rule == ProbabilityRule::KrausWeight) {
    const double residual = povm_completeness_residual(outcomes);
    if (residual > kCompletenessTolerance) {
      std::ostringstream msg;
      msg << "model '" << name
          << "': sum of A^dagger A deviates from identity by " << residual;
      throw ConfigError(msg.str());
    }
  } else {
    const double residual = effect_completeness_residual(outcomes);
    if (residual > kCompletenessTolerance) {
      std::ostringstream msg;
      msg << "model '" << name
          << "': sum of effect operators deviates from identity by "
          << residual;
      throw ConfigError(msg.str());
    }
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const Matrix& m = outcomes[i].matrix;
      if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kCompletenessTolerance) {
        std::ostringstream msg;
        msg << "model '" << name << "': effect outcome " << i
            << " is not Hermitian";
        throw ConfigError(msg.str());
      }
      Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
      if (eig.eigenvalues().minCoeff() < kEffectEigenvalueFloor) {
        std::ostringstream msg;
        msg << "model '" << name << "': effect outcome " << i
            << " has negative eigenvalue " << eig.eigenvalues().minCoeff();
        throw ConfigError(msg.str());
      }
    }
  }
  return MeasurementModel(std::move(name), std::move(outcomes), rule,
                          std::move(params));
}

ModelVerification verify_kraus_family(std::span<const KrausOperator> family) {
  check_family_shape(family);
  ModelVerification result;
  const double residual = povm_completeness_residual(family);
  if (residual > kCompletenessTolerance) {
    result.defects.push_back(
        {-1, "POVM completeness residual exceeds 1e-10", residual});
  }
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double sigma_min = min_singular_value(family[i].matrix);
    if (sigma_min < kMinSingularValueFloor) {
      result.defects.push_back({static_cast<int>(i),
                                "minimum singular value at or below 1e-12",
                                sigma_min});
    }
  }
  result.ok = result.defects.empty();
  return result;
}

ModelVerification verify_measurement_model(const MeasurementModel& model) {
  return verify_kraus_family(model.outcomes());
}

MeasurementModel epsilon_spin_model(double epsilon, double angle,
                                    SpinVariant variant) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    std::ostringstream msg;
    msg << "epsilon_spin_model: epsilon must lie in (0, 1/2), got " << epsilon;
    throw ConfigError(msg.str());
  }
  const Eigen::Matrix2cd rot = axis_rotation(angle);
  Eigen::Matrix2cd up, down;
  ProbabilityRule rule;
  if (variant == SpinVariant::Povm) {
    up = Eigen::Vector2cd(std::sqrt(1.0 - epsilon), std::sqrt(epsilon))
             .asDiagonal();
    down = Eigen::Vector2cd(std::sqrt(epsilon), std::sqrt(1.0 - epsilon))
               .asDiagonal();
    rule = ProbabilityRule::KrausWeight;
  } else {
    up = Eigen::Vector2cd(1.0 - epsilon, epsilon).asDiagonal();
    down = Eigen::Matrix2cd::Identity() - up;
    rule = ProbabilityRule::EffectTrace;
  }
  std::vector<KrausOperator> outcomes;
  outcomes.push_back({rot * up * rot.adjoint(), "up"});
  outcomes.push_back({rot * down * rot.adjoint(), "down"});
  const char* variant_name =
      variant == SpinVariant::Povm ? "povm" : "paper_literal";
  std::ostringstream name;
  name << "epsilon_spin(" << variant_name << ",eps=" << epsilon
       << ",angle=" << angle << ")";
  return MeasurementModel::create(
      name.str(), std::move(outcomes), rule,
      EpsilonSpinParams{epsilon, angle, variant});
}

MeasurementModel box_detector_model(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    std::ostringstream msg;
    msg << "box_detector_model: epsilon must lie in (0, 1), got " << epsilon;
    throw ConfigError(msg.str());
  }
  // Basis {outside, inside}. Diagonal operators keep support inside or
  // outside the box intact.
  Eigen::Matrix2cd no_click =
      Eigen::Vector2cd(std::sqrt(1.0 - epsilon), std::sqrt(epsilon))
          .asDiagonal();
  Eigen::Matrix2cd click =
      Eigen::Vector2cd(std::sqrt(epsilon), std::sqrt(1.0 - epsilon))
          .asDiagonal();
  std::vector<KrausOperator> outcomes;
  outcomes.push_back({no_click, "no_click"});
  outcomes.push_back({click, "click"});
  std::ostringstream name;
  name << "box_detector(eps=" << epsilon << ")";
  return MeasurementModel::create(name.str(), std::move(outcomes),
                                  ProbabilityRule::KrausWeight,
                                  BoxDetectorParams{epsilon});
}

MeasurementModel grw_localization_model(double width,
                                        const LatticeGrid& grid) {
  if (grid.n_points < 8) {
    std::ostringstream msg;
    msg << "grw_localization_model: grid needs at least 8 points, got "
        << grid.n_points;
    throw ConfigError(msg.str());
  }
  if (!(grid.x_max > grid.x_min)) {
    throw ConfigError("grw_localization_model: grid has nonpositive extent");
  }
  if (!(width >= 2.0 * grid.dx())) {
    std::ostringstream msg;
    msg << "grw_localization_model: width " << width
        << " is not resolvable on the grid (needs >= 2 dx = "
        << 2.0 * grid.dx() << ")";
    throw ConfigError(msg.str());
  }
  const int n = grid.n_points;
  // Raw Gaussian profiles, then a global diagonal rescale S^{-1/2} so that
  // sum over centers of A^dagger A is exactly the identity.
  Eigen::MatrixXd profiles(n, n);  // row = center index, col = grid point
  Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(n);
  for (int c = 0; c < n; ++c) {
    const double x0 = grid.point(c);
    for (int j = 0; j < n; ++j) {
      const double u = (grid.point(j) - x0) / width;
      const double g = std::exp(-u * u);
      profiles(c, j) = g;
      sum_sq(j) += g * g;
    }
  }
  std::vector<KrausOperator> outcomes;
  outcomes.reserve(n);
  double min_entry = 1.0;
  for (int c = 0; c < n; ++c) {
    Eigen::VectorXcd diag(n);
    for (int j = 0; j < n; ++j) {
      const double entry = profiles(c, j) / std::sqrt(sum_sq(j));
      min_entry = std::min(min_entry, entry);
      diag(j) = entry;
    }
    outcomes.push_back(
        {Matrix(diag.asDiagonal()), format_center(grid.point(c))});
  }
  if (min_entry < kMinSingularValueFloor) {
    std::ostringstream msg;
    msg << "grw_localization_model: width " << width
        << " is too small for the grid extent; far-edge operator entries "
        << "underflow (min entry " << min_entry << ")";
    throw ConfigError(msg.str());
  }
  std::ostringstream name;
  name << "grw_localization(a=" << width << ",n=" << n << ")";
  return MeasurementModel::create(name.str(), std::move(outcomes),
                                  ProbabilityRule::KrausWeight,
                                  GrwParams{width, grid});
}

LatticeWavefunction LatticeWavefunction::create(LatticeGrid grid,
                                                Vector amplitudes) {
  if (grid.n_points < 2) {
    throw ConfigError("lattice grid needs at least 2 points");
  }
  if (amplitudes.size() != grid.n_points) {
    std::ostringstream msg;
    msg << "lattice wavefunction has " << amplitudes.size()
        << " amplitudes for " << grid.n_points << " grid points";
    throw ConfigError(msg.str());
  }
  const double norm_sq = amplitudes.squaredNorm() * grid.dx();
  if (std::abs(norm_sq - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "lattice wavefunction norm^2 " << norm_sq
        << " deviates from 1 beyond 1e-10";
    throw ConfigError(msg.str());
  }
  amplitudes /= std::sqrt(norm_sq);
  return LatticeWavefunction(grid, std::move(amplitudes));
}

LatticeWavefunction LatticeWavefunction::uniform(LatticeGrid grid) {
  if (grid.n_points < 2) {
    throw ConfigError("lattice grid needs at least 2 points");
  }
  const double extent = grid.dx() * grid.n_points;
  Vector amps = Vector::Constant(grid.n_points, 1.0 / std::sqrt(extent));
  return LatticeWavefunction(grid, std::move(amps));
}

QuantumState LatticeWavefunction::to_quantum_state() const {
  Vector scaled = amplitudes_ * std::sqrt(grid_.dx());
  return QuantumState::pure({grid_.n_points}, std::move(scaled));
}

}  // namespace cqtsim
