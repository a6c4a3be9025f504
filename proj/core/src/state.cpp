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

#include "cqtsim/state.hpp"

#include <cmath>
#include <sstream>

#include "cqtsim/errors.hpp"

namespace cqtsim {

namespace {

constexpr double kNormTolerance = 1e-9;
constexpr double kHermitianTolerance = 1e-12;
constexpr double kEigenvalueFloor = -1e-10;
constexpr double kUnderflowFloor = 1e-300;
// Positivity is only eigen-checked up to this dimension; beyond it the
// check would dominate construction cost.
constexpr std::int64_t kPsdCheckDim = 256;

void check_factor_dims(std::span<const int> dims) {
  if (dims.empty()) {
    throw ConfigError("factor_dims must be nonempty");
  }
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 1) {
      std::ostringstream msg;
      msg << "factor " << i << " has nonpositive dimension " << dims[i];
      throw ConfigError(msg.str());
    }
  }
}

// Stride of `factor_index` under the factor-0-slowest layout, i.e. the
// product of the dimensions to its right.
std::int64_t factor_stride(std::span<const int> dims, int factor_index) {
  std::int64_t stride = 1;
  for (std::size_t i = factor_index + 1; i < dims.size(); ++i) {
    stride *= dims[i];
  }
  return stride;
}

void check_factor_op(const Matrix& op, int factor_index,
                     std::span<const int> dims) {
  if (factor_index < 0 || static_cast<std::size_t>(factor_index) >= dims.size()) {
    std::ostringstream msg;
    msg << "factor index " << factor_index << " out of range for "
        << dims.size() << " factors";
    throw ConfigError(msg.str());
  }
  if (op.rows() != op.cols() || op.rows() != dims[factor_index]) {
    std::ostringstream msg;
    msg << "operator is " << op.rows() << "x" << op.cols()
        << " but factor " << factor_index << " has dimension "
        << dims[factor_index];
    throw ConfigError(msg.str());
  }
}

}  // namespace

std::int64_t product_dim(std::span<const int> factor_dims) {
  std::int64_t product = 1;
  for (int d : factor_dims) {
    product *= d;
    if (product > kMaxVectorDim) {
      std::ostringstream msg;
      msg << "product dimension exceeds the dense-storage cap of "
          << kMaxVectorDim << "; this simulator is desk-scale only";
      throw ConfigError(msg.str());
    }
  }
  return product;
}

std::int64_t QuantumState::dim() const {
  return is_pure() ? std::get<Vector>(rep_).size()
                   : std::get<Matrix>(rep_).rows();
}

const Vector& QuantumState::amplitudes() const {
  if (!is_pure()) {
    throw std::logic_error("amplitudes() called on a mixed state");
  }
  return std::get<Vector>(rep_);
}

const Matrix& QuantumState::density() const {
  if (is_pure()) {
    throw std::logic_error("density() called on a pure state");
  }
  return std::get<Matrix>(rep_);
}

Matrix QuantumState::density_matrix() const {
  if (is_pure()) {
    const Vector& psi = std::get<Vector>(rep_);
    return psi * psi.adjoint();
  }
  return std::get<Matrix>(rep_);
}

QuantumState QuantumState::pure(std::vector<int> factor_dims,
                                Vector amplitudes) {
  check_factor_dims(factor_dims);
  const std::int64_t n = product_dim(factor_dims);
  if (amplitudes.size() != n) {
    std::ostringstream msg;
    msg << "amplitude vector has length " << amplitudes.size()
        << " but factor dimensions multiply to " << n;
    throw ConfigError(msg.str());
  }
  const double norm = amplitudes.norm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    std::ostringstream msg;
    msg << "pure state norm " << norm << " deviates from 1 by more than "
        << kNormTolerance;
    throw ConfigError(msg.str());
  }
  amplitudes /= norm;
  return QuantumState(std::move(factor_dims), std::move(amplitudes));
}

QuantumState QuantumState::mixed(std::vector<int> factor_dims,
                                 Matrix density) {
  check_factor_dims(factor_dims);
  std::int64_t n = 1;
  for (int d : factor_dims) {
    n *= d;
    if (n > kMaxDensityDim) {
      std::ostringstream msg;
      msg << "density-matrix dimension exceeds the cap of " << kMaxDensityDim;
      throw ConfigError(msg.str());
    }
  }
  if (density.rows() != n || density.cols() != n) {
    std::ostringstream msg;
    msg << "density matrix is " << density.rows() << "x" << density.cols()
        << " but factor dimensions multiply to " << n;
    throw ConfigError(msg.str());
  }
  const double hermitian_residual =
      (density - density.adjoint()).cwiseAbs().maxCoeff();
  if (hermitian_residual > kHermitianTolerance) {
    std::ostringstream msg;
    msg << "density matrix deviates from Hermitian by " << hermitian_residual;
    throw ConfigError(msg.str());
  }
  const double trace = density.trace().real();
  if (std::abs(trace - 1.0) > kNormTolerance) {
    std::ostringstream msg;
    msg << "density matrix trace " << trace << " deviates from 1";
    throw ConfigError(msg.str());
  }
  density /= trace;
  if (n <= kPsdCheckDim) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(density,
                                              Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < kEigenvalueFloor) {
      std::ostringstream msg;
      msg << "density matrix has eigenvalue "
          << eig.eigenvalues().minCoeff() << " below the positivity floor";
      throw ConfigError(msg.str());
    }
  }
  return QuantumState(std::move(factor_dims), std::move(density));
}

Matrix tensor_lift(const Matrix& op, int factor_index,
                   std::span<const int> factor_dims) {
  check_factor_dims(factor_dims);
  check_factor_op(op, factor_index, factor_dims);
  std::int64_t n = 1;
  for (int d : factor_dims) n *= d;
  if (n > kMaxDensityDim) {
    std::ostringstream msg;
    msg << "tensor_lift would materialize a " << n << "x" << n
        << " matrix, above the cap of " << kMaxDensityDim
        << "; use apply_to_factor instead";
    throw ConfigError(msg.str());
  }

  const int k = factor_dims[factor_index];
  const std::int64_t stride = factor_stride(factor_dims, factor_index);
  const std::int64_t block = k * stride;  // one full cycle of the factor index

  Matrix lifted = Matrix::Zero(n, n);
  for (std::int64_t outer = 0; outer < n / block; ++outer) {
    for (std::int64_t inner = 0; inner < stride; ++inner) {
      const std::int64_t base = outer * block + inner;
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
          lifted(base + a * stride, base + b * stride) = op(a, b);
        }
      }
    }
  }
  return lifted;
}

Vector apply_to_factor(const Matrix& op, int factor_index,
                       std::span<const int> factor_dims, const Vector& v) {
  check_factor_op(op, factor_index, factor_dims);
  const std::int64_t n = v.size();
  const int k = factor_dims[factor_index];
  const std::int64_t stride = factor_stride(factor_dims, factor_index);
  const std::int64_t block = k * stride;

  Vector out(n);
  Eigen::VectorXcd gathered(k);
  for (std::int64_t outer = 0; outer < n / block; ++outer) {
    for (std::int64_t inner = 0; inner < stride; ++inner) {
      const std::int64_t base = outer * block + inner;
      for (int a = 0; a < k; ++a) gathered(a) = v(base + a * stride);
      for (int a = 0; a < k; ++a) {
        Complex acc(0.0, 0.0);
        for (int b = 0; b < k; ++b) acc += op(a, b) * gathered(b);
        out(base + a * stride) = acc;
      }
    }
  }
  return out;
}

Matrix conjugate_on_factor(const Matrix& op, int factor_index,
                           std::span<const int> factor_dims,
                           const Matrix& rho) {
  check_factor_op(op, factor_index, factor_dims);
  const std::int64_t n = rho.rows();
  // Left multiply by the lifted op (column by column), then right multiply
  // by its adjoint via the same kernel on the adjoint.
  Matrix left(n, n);
  for (std::int64_t c = 0; c < n; ++c) {
    left.col(c) = apply_to_factor(op, factor_index, factor_dims, rho.col(c));
  }
  Matrix result(n, n);
  Matrix left_adj = left.adjoint();
  for (std::int64_t c = 0; c < n; ++c) {
    result.col(c) =
        apply_to_factor(op, factor_index, factor_dims, left_adj.col(c));
  }
  return result.adjoint();
}

double outcome_probability(const QuantumState& state, const Matrix& op,
                           int factor_index) {
  if (state.is_pure()) {
    return apply_to_factor(op, factor_index, state.factor_dims(),
                           state.amplitudes())
        .squaredNorm();
  }
  return conjugate_on_factor(op, factor_index, state.factor_dims(),
                             state.density())
      .trace()
      .real();
}

KrausUpdate apply_kraus_update(const QuantumState& state, const Matrix& op,
                               int factor_index) {
  if (state.is_pure()) {
    Vector updated = apply_to_factor(op, factor_index, state.factor_dims(),
                                     state.amplitudes());
    const double weight = updated.squaredNorm();
    if (weight < kUnderflowFloor) {
      throw NumericError(
          "post-measurement weight underflowed; the measurement model is too "
          "close to projective (increase epsilon)");
    }
    updated /= std::sqrt(weight);
    return KrausUpdate{
        QuantumState::unchecked(state.factor_dims(), std::move(updated)),
        weight};
  }
  Matrix updated = conjugate_on_factor(op, factor_index, state.factor_dims(),
                                       state.density());
  const double weight = updated.trace().real();
  if (weight < kUnderflowFloor) {
    throw NumericError(
        "post-measurement weight underflowed; the measurement model is too "
        "close to projective (increase epsilon)");
  }
  updated /= weight;
  return KrausUpdate{
      QuantumState::unchecked(state.factor_dims(), std::move(updated)),
      weight};
}

Matrix local_density_matrix(std::span<const int> factor_dims, int factor_index,
                            const Vector& amplitudes) {
  if (factor_index < 0 ||
      static_cast<std::size_t>(factor_index) >= factor_dims.size()) {
    std::ostringstream msg;
    msg << "factor index " << factor_index << " out of range for "
        << factor_dims.size() << " factors";
    throw ConfigError(msg.str());
  }
  const int k = factor_dims[factor_index];
  const std::int64_t stride = factor_stride(factor_dims, factor_index);
  const std::int64_t block = k * stride;
  Matrix local = Matrix::Zero(k, k);
  const std::int64_t n = amplitudes.size();
  for (std::int64_t outer = 0; outer < n / block; ++outer) {
    for (std::int64_t inner = 0; inner < stride; ++inner) {
      const std::int64_t base = outer * block + inner;
      for (int a = 0; a < k; ++a) {
        const Complex va = amplitudes(base + a * stride);
        for (int b = 0; b < k; ++b) {
          local(a, b) += va * std::conj(amplitudes(base + b * stride));
        }
      }
    }
  }
  return local;
}

Matrix local_density_matrix(std::span<const int> factor_dims, int factor_index,
                            const Matrix& rho) {
  if (factor_index < 0 ||
      static_cast<std::size_t>(factor_index) >= factor_dims.size()) {
    std::ostringstream msg;
    msg << "factor index " << factor_index << " out of range for "
        << factor_dims.size() << " factors";
    throw ConfigError(msg.str());
  }
  const int k = factor_dims[factor_index];
  const std::int64_t stride = factor_stride(factor_dims, factor_index);
  const std::int64_t block = k * stride;
  Matrix local = Matrix::Zero(k, k);
  const std::int64_t n = rho.rows();
  for (std::int64_t outer = 0; outer < n / block; ++outer) {
    for (std::int64_t inner = 0; inner < stride; ++inner) {
      const std::int64_t base = outer * block + inner;
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
          local(a, b) += rho(base + a * stride, base + b * stride);
        }
      }
    }
  }
  return local;
}

Matrix local_density_matrix(const QuantumState& state, int factor_index) {
  if (state.is_pure()) {
    return local_density_matrix(state.factor_dims(), factor_index,
                                state.amplitudes());
  }
  return local_density_matrix(state.factor_dims(), factor_index,
                              state.density());
}

QuantumState normalize(const QuantumState& state) {
  if (state.is_pure()) {
    const double norm = state.amplitudes().norm();
    if (norm < kUnderflowFloor) {
      throw NumericError("cannot normalize a zero amplitude vector");
    }
    return QuantumState::unchecked(state.factor_dims(),
                                   Vector(state.amplitudes() / norm));
  }
  const double trace = state.density().trace().real();
  if (trace < kUnderflowFloor) {
    throw NumericError("cannot normalize a zero-trace density matrix");
  }
  return QuantumState::unchecked(state.factor_dims(),
                                 Matrix(state.density() / trace));
}

double min_singular_value(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw ConfigError("min_singular_value of an empty matrix");
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().minCoeff();
}

}  // namespace cqtsim
