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

// Gate-level circuits over a causality-respecting (CR) register and a
// closed-timelike-curve (CTC) register. Wires are numbered CR first, then
// CTC. Gate list order is temporal order: the first gate acts first, so it
// is the rightmost factor of the compiled unitary.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctcsim/qmat.hpp"

namespace ctcsim::circuit {

using qmat::ComplexMatrix;
using qmat::ComplexVector;
using qmat::DimList;

struct Gate {
  std::string name;
  /// Targeted wires; the first listed wire is the most significant factor
  /// of `matrix`.
  std::vector<std::size_t> wires;
  ComplexMatrix matrix;
};

/// Matrix of a built-in gate ("swap", "h", "x", "cnot") for the given wire
/// dimensions. Throws ValidationError for unknown names or wrong arity.
ComplexMatrix builtin_gate_matrix(std::string_view name,
                                  std::span<const std::size_t> wire_dims);
bool is_builtin_gate(std::string_view name);

class Circuit {
 public:
  /// Validates wire ranges, matrix shapes, and gate unitarity (1e−10);
  /// throws ValidationError naming the offending gate index.
  Circuit(DimList cr_dims, DimList ctc_dims, std::vector<Gate> gates,
          std::vector<std::string> labels = {});

  const DimList& cr_dims() const { return cr_dims_; }
  const DimList& ctc_dims() const { return ctc_dims_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// CR dims followed by CTC dims.
  DimList wire_dims() const { return cr_dims_.concat(ctc_dims_); }
  std::size_t wire_count() const { return cr_dims_.size() + ctc_dims_.size(); }
  std::size_t cr_dim() const { return cr_dims_.total(); }
  std::size_t ctc_dim() const { return ctc_dims_.total(); }
  std::size_t total_dim() const { return cr_dim() * ctc_dim(); }
  bool is_ctc_wire(std::size_t wire) const { return wire >= cr_dims_.size(); }

  /// True when no gate touches a CTC wire.
  bool cr_only() const;

 private:
  DimList cr_dims_;
  DimList ctc_dims_;
  std::vector<Gate> gates_;
  std::vector<std::string> labels_;
};

/// Parses the circuit JSON document. Errors are ValidationError messages
/// prefixed with the JSON path of the offending element, e.g.
/// "$.gates[1].matrix: not unitary (deviation 3)".
Circuit parse_circuit(std::string_view json_text);

/// Inverse of parse_circuit. Matrices are always written out, with
/// round-trip double precision.
std::string serialize_circuit(const Circuit& c);

/// Left-multiplies every column of `columns` by the gate embedded on its
/// wires. OpenMP over columns.
void apply_gate(ComplexMatrix& columns, const Gate& gate, const DimList& wire_dims);

/// Full-dimension matrix of `gate` acting on its wires, identity elsewhere.
ComplexMatrix embed_gate(const Gate& gate, const DimList& wire_dims);

/// Ordered product of the gates (first gate rightmost).
ComplexMatrix compile_unitary(const Circuit& c);

/// Serial reference for compile_unitary: explicit embeddings multiplied
/// together.
ComplexMatrix compile_unitary_reference(const Circuit& c);

/// Applies the circuit's gates to a density matrix on the full space,
/// gate by gate (no compiled unitary).
ComplexMatrix conjugate_by_circuit(const Circuit& c, const ComplexMatrix& rho);

using Constraint = std::pair<ComplexVector, ComplexVector>;

/// Unitary U of dimension `dim` with U·in = out for every constraint.
///
/// Inputs and outputs are orthonormalized in order, then both are extended
/// by Gram-Schmidt over the standard basis in index order and the i-th
/// extension vector is mapped to the i-th. The result is bit-identical for
/// identical constraints. Throws ValidationError when inner products are
/// not preserved (naming the pair) or inputs are dependent.
ComplexMatrix complete_unitary(std::span<const Constraint> constraints,
                               std::size_t dim);

/// Two-state discriminator on one CR qubit and one CTC qubit: the CTC wire
/// controls U on the CR wire, then the two wires are swapped. With ψ
/// rephased so ⟨1|ψ⟩ is real and non-negative, U sends ψ to |1⟩ and
/// (−⟨1|ψ⟩, ⟨0|ψ⟩*) to |0⟩. Fixed point |0⟩⟨0| on input |0⟩, |1⟩⟨1| on
/// input ψ, and diag(p₀, p₁) on the labeled mixture or superposition.
Circuit build_bhw2(const ComplexVector& psi);

/// n-state discriminator. CR = input register (dimension of the states)
/// ⊗ ancilla qubits in |0…0⟩, padded until the CR dimension is ≥ n; CTC has
/// dimension n. For each CTC basis state |i⟩ a controlled V_i maps
/// φ_i ⊗ |0…0⟩ → |i⟩ and the complement of φ_i in the input register onto
/// |i+1⟩, |i+2⟩, … (mod n); then CR and CTC are exchanged on their common
/// n-dimensional subspace. On input φ_i the unique fixed point is |i⟩⟨i| and
/// the CR output is |i⟩.
Circuit build_bhw_multi(std::span<const ComplexVector> states);

/// Pads an input-register state with the builder's ancillas in |0…0⟩.
ComplexVector pad_with_ancillas(const Circuit& multi, const ComplexVector& state);

/// CR qubits A, B and one CTC qubit, with the single gate SWAP(B, CTC).
Circuit build_epr_swap();

}  // namespace ctcsim::circuit
