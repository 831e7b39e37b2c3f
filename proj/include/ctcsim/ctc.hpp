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

// Deutsch-model CTC engine.
//
// For a CR input ρ and joint unitary U the CTC register must satisfy
//   E(σ) = Tr_CR(U (ρ ⊗ σ) U†) = σ,
// and the CR output is Tr_CTC(U (ρ ⊗ σ) U†). Because σ depends on ρ the map
// ρ ↦ ρ' is nonlinear.
//
// Superoperators act on column-stacked vectorizations:
//   vec(σ)[j·d + i] = σ(i, j).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "ctcsim/circuit.hpp"
#include "ctcsim/qmat.hpp"

namespace ctcsim::ctc {

using qmat::ComplexMatrix;
using qmat::ComplexVector;
using qmat::DensityMatrix;
using qmat::DimList;
using qmat::Tolerances;

ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v, std::size_t dim);

class Superoperator {
 public:
  Superoperator(std::size_t dim, ComplexMatrix matrix);

  static Superoperator identity(std::size_t dim);
  static Superoperator from_kraus(std::span<const ComplexMatrix> kraus);

  /// Dimension d of the matrices it acts on (the matrix is d² × d²).
  std::size_t dim() const { return dim_; }
  const ComplexMatrix& matrix() const { return matrix_; }

  ComplexMatrix apply(const ComplexMatrix& sigma) const;

  /// Σ_ij |i⟩⟨j| ⊗ E(|i⟩⟨j|). PSD iff the map is completely positive.
  ComplexMatrix choi() const;

  /// Largest |tr E(X) − tr X| over matrix units X.
  double trace_preservation_defect() const;

 private:
  std::size_t dim_;
  ComplexMatrix matrix_;
};

/// σ ↦ Tr_CR(U (ρ_CR ⊗ σ) U†), built column by column from matrix units.
/// OpenMP over columns. Throws ValidationError on dimension mismatch or a
/// non-unitary U (deviation > 1e−9).
Superoperator induced_superoperator(const ComplexMatrix& u,
                                    const DensityMatrix& rho_cr,
                                    const DimList& cr_dims,
                                    const DimList& ctc_dims);

/// Serial reference: forms U (ρ ⊗ |i⟩⟨j|) U† explicitly for every matrix
/// unit and traces out CR.
Superoperator induced_superoperator_reference(const ComplexMatrix& u,
                                              const DensityMatrix& rho_cr,
                                              const DimList& cr_dims,
                                              const DimList& ctc_dims);

enum class Selection { canonical, max_entropy };
enum class Method { exact, cesaro, bruteforce };

std::string_view to_string(Selection s);
std::string_view to_string(Method m);
/// Accepts "canonical", "max-entropy" and "max_entropy".
Selection parse_selection(std::string_view text);

struct FixedPointResult {
  DensityMatrix sigma;
  /// ½‖E(σ) − σ‖₁.
  double residual;
  /// Dimension of the eigenvalue-1 eigenspace of the superoperator.
  std::size_t fixed_space_dim;
  Method method;
  Selection selection;
  /// Cesàro window length at termination; 0 for the exact solver.
  std::uint64_t iterations = 0;
};

/// ½‖E(σ) − σ‖₁, computed from scratch.
double fixed_point_residual(const Superoperator& s, const ComplexMatrix& sigma);

/// Number of singular values of (M − I) within `window`.
std::size_t fixed_space_dimension(const Superoperator& s, double window);

/// Spectral projection onto the eigenvalue-1 eigenspace along the rest of
/// the spectrum (the Cesàro-limit projection), as a d² × d² matrix.
ComplexMatrix fixed_space_projection(const Superoperator& s, double window);

/// Canonical: image of I/d under the Cesàro projection. Max-entropy: the
/// fixed density matrix of largest von Neumann entropy (Newton ascent over
/// the fixed space, restricted to the canonical point's support).
/// Throws SolverError when the residual exceeds tol.fixed_point_residual or
/// no eigenvalue lies within tol.eigenvalue_one_window of 1.
FixedPointResult fixed_point_exact(const Superoperator& s,
                                   Selection selection = Selection::canonical,
                                   const Tolerances& tol = {});

/// Burn-in Cesàro mean σ̄_N = (1/N) Σ_{N ≤ n < 2N} E^n(init), evaluated at
/// N = 1, 2, 4, … by repeated squaring. Stops once ½‖E(σ̄_N) − σ̄_N‖₁ ≤ tol
/// and ½‖σ̄_N − σ̄_{N/2}‖₁ ≤ tol; throws SolverError when N would exceed
/// max_iter. `init` defaults to I/d.
FixedPointResult fixed_point_cesaro(const Superoperator& s,
                                    const std::optional<DensityMatrix>& init = std::nullopt,
                                    std::uint64_t max_iter = std::uint64_t{1} << 40,
                                    double tol = 1e-9,
                                    const Tolerances& tolerances = {});

/// Tr_CTC(U (ρ_CR ⊗ σ) U†), Hermitized.
ComplexMatrix cr_output(const ComplexMatrix& u, const DensityMatrix& rho_cr,
                        const DensityMatrix& sigma);

struct Evolution {
  DensityMatrix rho_cr_out;
  FixedPointResult fixed_point;
};

/// Full Deutsch evolution: induced superoperator → exact fixed point → CR
/// output.
Evolution ctc_evolve(const circuit::Circuit& c, const DensityMatrix& rho_cr,
                     Selection selection = Selection::canonical,
                     const Tolerances& tol = {});

/// Same, with a precompiled unitary for `c`.
Evolution ctc_evolve(const circuit::Circuit& c, const ComplexMatrix& u,
                     const DensityMatrix& rho_cr,
                     Selection selection = Selection::canonical,
                     const Tolerances& tol = {});

}  // namespace ctcsim::ctc
