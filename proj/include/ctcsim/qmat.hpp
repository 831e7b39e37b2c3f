// Copyright 2026 The ctcsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dense complex linear algebra and information-theoretic primitives.
//
// Tensor ordering convention used throughout ctcsim: the FIRST factor of a
// tensor product is the most significant digit of the row-major index, so
// kron(a, b) is the block matrix [a(i,j) * b].

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ctcsim::qmat {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

struct Tolerances {
  double hermiticity = 1e-10;
  double psd_floor = 1e-10;
  double fixed_point_residual = 1e-9;
  double eigenvalue_one_window = 1e-9;

  /// Throws ValidationError unless every field is strictly positive.
  void check() const;
};

/// Ordered subsystem dimensions. Every entry is at least 2.
class DimList {
 public:
  DimList() = default;
  DimList(std::initializer_list<std::size_t> dims);
  explicit DimList(std::vector<std::size_t> dims);

  std::size_t size() const { return dims_.size(); }
  bool empty() const { return dims_.empty(); }
  std::size_t operator[](std::size_t i) const { return dims_[i]; }
  const std::vector<std::size_t>& values() const { return dims_; }

  /// Product of all entries (1 for an empty list).
  std::size_t total() const;

  /// Concatenation: this list followed by `other`.
  DimList concat(const DimList& other) const;

  bool operator==(const DimList&) const = default;

 private:
  std::vector<std::size_t> dims_;
};

/// Hermitian, positive-semidefinite, unit-trace matrix. Construction
/// validates against the given tolerances and throws ValidationError with
/// the measured violations on failure.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m, const Tolerances& tol = {});

  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix maximally_mixed(std::size_t dim);
  static DensityMatrix basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

/// Offsets into the row-major index of a `dims`-shaped space contributed by
/// every value of the mixed-radix counter over `subsystems` (first listed
/// subsystem most significant).
std::vector<std::size_t> subsystem_offsets(const DimList& dims,
                                           std::span<const std::size_t> subsystems);

/// Kronecker product; `a` indexes the blocks. Throws ValidationError on
/// non-finite input.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

/// Reduced matrix on the subsystems listed in `keep` (ascending order in
/// the output regardless of the order given). An empty `keep` gives the
/// 1×1 full trace. OpenMP over output rows.
ComplexMatrix partial_trace(const ComplexMatrix& m, const DimList& dims,
                            std::span<const std::size_t> keep);
ComplexMatrix partial_trace(const ComplexMatrix& m, const DimList& dims,
                            std::initializer_list<std::size_t> keep);

/// Single-threaded reference for partial_trace, kept for testing and
/// benchmarking. Same contract.
ComplexMatrix partial_trace_reference(const ComplexMatrix& m,
                                      const DimList& dims,
                                      std::span<const std::size_t> keep);

/// Sum of singular values.
double trace_norm(const ComplexMatrix& m);

/// ½‖a − b‖₁ for arbitrary equal-size matrices.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Eigenvalues of (m + m†)/2 in ascending order.
Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m);

/// Entropy in bits. Eigenvalues in [−1e−10, 0) count as 0; anything more
/// negative throws ValidationError.
double von_neumann_entropy(const DensityMatrix& rho);

/// S(A) + S(B) − S(AB) for a bipartite state; `dims` must have two entries.
/// Values in [−1e−8, 0) are clamped to 0.
double mutual_information(const DensityMatrix& rho_ab, const DimList& dims);

enum class MatrixKind { density, unitary };

struct Violation {
  std::string invariant;
  double magnitude;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string describe() const;
};

ValidationReport validate(const ComplexMatrix& m, MatrixKind kind,
                          const Tolerances& tol = {});

bool all_finite(const ComplexMatrix& m);

/// Largest |m − m†| entry.
double hermiticity_defect(const ComplexMatrix& m);

/// Largest entry of |m†m − I|.
double unitarity_defect(const ComplexMatrix& m);

}  // namespace ctcsim::qmat
