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

// Adversarial discrimination harness. A referee R holds the label x of the
// state handed to the discriminator's register A:
//   ρ_RA = Σ_x p_x |x⟩⟨x|_R ⊗ |φ_x⟩⟨φ_x|_A.
// The discriminator applies U = I_R ⊗ V_{A,CTC}; it succeeds when the output
// equals Σ_x p_x |x⟩⟨x|_R ⊗ |x⟩⟨x|_A. The CTC fixed point is solved for the
// whole ρ_RA, so the nonlinearity sees the mixture, not its components.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ctcsim/circuit.hpp"
#include "ctcsim/ctc.hpp"
#include "ctcsim/qmat.hpp"

namespace ctcsim::protocol {

using qmat::ComplexMatrix;
using qmat::ComplexVector;
using qmat::DensityMatrix;

/// Tolerance of the success predicate (trace distance to the target).
inline constexpr double kSuccessDistance = 1e-6;

struct EnsembleEntry {
  std::size_t label;
  double probability;
  ComplexVector state;
};

class LabeledEnsemble {
 public:
  /// Probabilities strictly positive and summing to 1 (1e−12); states
  /// normalized (1e−10) and of equal dimension; labels distinct and below
  /// r_dim(). Duplicate states under different labels are allowed.
  explicit LabeledEnsemble(std::vector<EnsembleEntry> entries);

  const std::vector<EnsembleEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t a_dim() const { return static_cast<std::size_t>(entries_[0].state.size()); }
  /// Number of labels, but at least 2 (a register of dimension 1 carries no
  /// information and is not a valid wire).
  std::size_t r_dim() const { return std::max<std::size_t>(2, entries_.size()); }

  DensityMatrix rho_ra() const;
  DensityMatrix rho_r() const;
  DensityMatrix rho_a() const;
  /// Σ_x √p_x |x⟩_R |φ_x⟩_A.
  ComplexVector superposition() const;
  /// Σ_x p_x |x⟩⟨x|_R ⊗ |outputs[x-th entry]⟩⟨…|_A on A's computational basis.
  DensityMatrix target(std::span<const std::size_t> outputs, std::size_t a_dim) const;
  /// Target with output index = label.
  DensityMatrix identity_target(std::size_t a_dim) const;

 private:
  std::vector<EnsembleEntry> entries_;
};

/// Builds the ensemble and its classical-quantum state ρ_RA.
std::pair<LabeledEnsemble, DensityMatrix> labeled_ensemble(std::vector<EnsembleEntry> entries);

struct PureOutput {
  std::size_t label;
  DensityMatrix output;
  ctc::FixedPointResult fixed_point;
  /// Trace distance from the designated output basis state.
  double target_distance;
};

struct DiscriminationOutcome {
  DensityMatrix rho_out;
  DensityMatrix target;
  /// Trace distance between rho_out and target; success iff ≤ 1e−6.
  double target_distance;
  bool success;
  double mutual_info_bits;
  /// Trace distance between rho_out and ρ_R ⊗ ρ'_A from its own marginals.
  double product_distance;
  /// Σ_x ⟨x,x|rho_out|x,x⟩: the probability that measuring R and A in the
  /// computational basis gives matching outcomes. Diagnostic only.
  double decode_probability;
  std::vector<PureOutput> per_pure_outputs;
  ctc::FixedPointResult fixed_point;
};

/// U = I_R ⊗ V: R is prepended as CR wire 0 (label "R"). A circuit that
/// already carries an "R" first wire is checked instead: any gate touching
/// it raises ValidationError (wire-scope violation).
circuit::Circuit with_reference(const circuit::Circuit& v, std::size_t r_dim);

/// Deutsch evolution of the labeled mixture, plus each pure input alone
/// through V with the same selection rule.
DiscriminationOutcome run_discrimination(const circuit::Circuit& v,
                                         const LabeledEnsemble& ensemble,
                                         ctc::Selection selection = ctc::Selection::canonical);

/// Same harness on the pure input Σ_x √p_x |x⟩_R |φ_x⟩_A. The target is the
/// coherent Σ_x √p_x |x⟩_R |x⟩_A.
DiscriminationOutcome run_superposition(const circuit::Circuit& v,
                                        const LabeledEnsemble& ensemble,
                                        ctc::Selection selection = ctc::Selection::canonical);

/// The discriminator solves the fixed-point problem for the ensemble's ρ_RA
/// herself, prepares σ*, and applies V gate by gate as ordinary linear
/// evolution on ρ_RA ⊗ σ*, tracing out the CTC register afterwards.
DiscriminationOutcome simulate_without_ctc(const circuit::Circuit& v,
                                           const LabeledEnsemble& ensemble,
                                           ctc::Selection selection = ctc::Selection::canonical);

/// ½ + ½‖p₀ρ₀ − p₁ρ₁‖₁ for a two-entry ensemble.
double helstrom_bound(const LabeledEnsemble& ensemble);

struct ComputationTask {
  std::size_t domain_size;
  /// F(x) for x = 0 … domain_size − 1, as A basis indices.
  std::vector<std::size_t> truth_table;
  /// Acts on A (+ CTC). Inputs x are A's computational basis states.
  circuit::Circuit circuit;

  void check() const;
};

/// Uniform labeled mixture of basis inputs through the task circuit; the
/// target is (1/X) Σ_x |x⟩⟨x|_R ⊗ |F(x)⟩⟨F(x)|_A.
DiscriminationOutcome run_computation_mixture(const ComputationTask& task,
                                              ctc::Selection selection = ctc::Selection::canonical);

}  // namespace ctcsim::protocol
