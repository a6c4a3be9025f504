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

#ifndef CQTSIM_STATE_HPP_
#define CQTSIM_STATE_HPP_

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace cqtsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Storage limits for dense representations. Pure amplitude vectors may grow
// much larger than density matrices before leaving desk scale, so the two
// caps differ: a 2^22 vector is 64 MiB, a 2^12 density matrix is 256 MiB.
inline constexpr std::int64_t kMaxVectorDim = std::int64_t{1} << 22;
inline constexpr std::int64_t kMaxDensityDim = std::int64_t{1} << 12;

// Kraus operators below this minimum singular value are rejected at model
// construction: no measurement outcome may annihilate any state.
inline constexpr double kMinSingularValueFloor = 1e-12;

/// One measurement outcome: a square matrix acting on a single tensor
/// factor, tagged with the outcome's label.
struct KrausOperator {
  Matrix matrix;
  std::string outcome_label;
};

std::int64_t product_dim(std::span<const int> factor_dims);

/// Quantum state over an ordered list of tensor factors, stored either as a
/// pure amplitude vector or as a density matrix. Factor 0 is the
/// slowest-varying index of the flattened product space (Kronecker order),
/// i.e. the basis index is i0*d1*...*d_{m-1} + i1*d2*...*d_{m-1} + ... .
///
/// Instances are immutable after construction and safe to share across
/// threads.
class QuantumState {
 public:
  /// Builds a pure state. `amplitudes` must have length prod(factor_dims)
  /// and 2-norm within 1e-9 of one; it is renormalized exactly on entry.
  static QuantumState pure(std::vector<int> factor_dims, Vector amplitudes);

  /// Builds a mixed state. `density` must be Hermitian within 1e-12 with
  /// trace within 1e-9 of one (rescaled exactly on entry) and eigenvalues
  /// >= -1e-10 (checked for dimensions up to 256).
  static QuantumState mixed(std::vector<int> factor_dims, Matrix density);

  bool is_pure() const { return std::holds_alternative<Vector>(rep_); }
  const std::vector<int>& factor_dims() const { return factor_dims_; }
  std::int64_t dim() const;

  /// Amplitude vector; only valid for pure states.
  const Vector& amplitudes() const;
  /// Density matrix; only valid for mixed states.
  const Matrix& density() const;
  /// Density-matrix form of either representation (|psi><psi| for pure).
  Matrix density_matrix() const;

  bool same_shape(const QuantumState& other) const {
    return factor_dims_ == other.factor_dims_ && is_pure() == other.is_pure();
  }

 private:
  QuantumState(std::vector<int> dims, std::variant<Vector, Matrix> rep)
      : factor_dims_(std::move(dims)), rep_(std::move(rep)) {}

  // Trusted constructor for states produced by qcore's own arithmetic.
  static QuantumState unchecked(std::vector<int> dims,
                                std::variant<Vector, Matrix> rep) {
    return QuantumState(std::move(dims), std::move(rep));
  }

  friend QuantumState normalize(const QuantumState&);
  friend struct KrausUpdate;
  friend KrausUpdate apply_kraus_update(const QuantumState&, const Matrix&,
                                        int);

  std::vector<int> factor_dims_;
  std::variant<Vector, Matrix> rep_;
};

/// Embeds a factor-local operator into the full product space:
/// I (x) ... (x) op (x) ... (x) I, with factor 0 slowest-varying.
/// The result is materialized, so the product dimension is capped at
/// kMaxDensityDim.
Matrix tensor_lift(const Matrix& op, int factor_index,
                   std::span<const int> factor_dims);

/// Applies a factor-local operator to an amplitude vector without
/// materializing the lifted matrix. O(dim * k) for a k-dimensional factor.
Vector apply_to_factor(const Matrix& op, int factor_index,
                       std::span<const int> factor_dims, const Vector& v);

/// A rho A^dagger for a factor-local A, without materializing the lift.
Matrix conjugate_on_factor(const Matrix& op, int factor_index,
                           std::span<const int> factor_dims,
                           const Matrix& rho);

/// Pre-normalization outcome weight: |A psi|^2 for pure states,
/// Tr(A rho A^dagger) for mixed ones.
double outcome_probability(const QuantumState& state, const Matrix& op,
                           int factor_index);
inline double outcome_probability(const QuantumState& state,
                                  const KrausOperator& op, int factor_index) {
  return outcome_probability(state, op.matrix, factor_index);
}

struct KrausUpdate {
  QuantumState state;  // renormalized post-outcome state
  double weight;       // pre-normalization weight, equals outcome_probability
};

/// Collapse rule: state -> A state A^dagger / weight. Throws NumericError
/// when the weight underflows (below 1e-300), which signals a measurement
/// model too close to projective.
KrausUpdate apply_kraus_update(const QuantumState& state, const Matrix& op,
                               int factor_index);
inline KrausUpdate apply_kraus_update(const QuantumState& state,
                                      const KrausOperator& op,
                                      int factor_index) {
  return apply_kraus_update(state, op.matrix, factor_index);
}

/// Partial trace onto one factor. Hermitian with unit trace.
Matrix local_density_matrix(const QuantumState& state, int factor_index);

/// Partial trace of a raw (possibly unnormalized) amplitude vector or
/// density matrix; the result's trace equals the input's squared norm or
/// trace respectively.
Matrix local_density_matrix(std::span<const int> factor_dims, int factor_index,
                            const Vector& amplitudes);
Matrix local_density_matrix(std::span<const int> factor_dims, int factor_index,
                            const Matrix& rho);

/// Rescales to unit norm (pure) or unit trace (mixed). Throws NumericError
/// on zero input.
QuantumState normalize(const QuantumState& state);

/// Smallest singular value, via full SVD. Intended for operator sizes up to
/// a few hundred.
double min_singular_value(const Matrix& m);

}  // namespace cqtsim

#endif  // CQTSIM_STATE_HPP_
