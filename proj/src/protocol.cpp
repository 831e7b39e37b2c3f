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

#include "ctcsim/protocol.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "ctcsim/errors.hpp"
#include "ctcsim/parallel.hpp"

namespace ctcsim::protocol {

namespace {

using circuit::Circuit;
using circuit::Gate;
using qmat::DimList;

constexpr double kProbabilitySumTol = 1e-12;
constexpr double kNormTol = 1e-10;

struct Harness {
  Circuit full;  // I_R ⊗ V with R as wire 0
  Circuit bare;  // V alone
  std::size_t r_dim;
  std::size_t a_dim;
};

Circuit strip_reference(const Circuit& full) {
  std::vector<std::size_t> cr(full.cr_dims().values().begin() + 1,
                              full.cr_dims().values().end());
  if (cr.empty()) throw ValidationError("circuit has no A register besides R");
  std::vector<Gate> gates;
  for (const Gate& g : full.gates()) {
    Gate shifted = g;
    for (std::size_t& w : shifted.wires) --w;
    gates.push_back(std::move(shifted));
  }
  std::vector<std::string> labels;
  if (!full.labels().empty()) labels.assign(full.labels().begin() + 1, full.labels().end());
  return Circuit(DimList(std::move(cr)), full.ctc_dims(), std::move(gates), std::move(labels));
}

Harness prepare(const Circuit& v, const LabeledEnsemble& ensemble) {
  Circuit full = with_reference(v, ensemble.r_dim());
  Circuit bare = strip_reference(full);
  const std::size_t a_dim = bare.cr_dim();
  if (a_dim != ensemble.a_dim()) {
    throw ValidationError("ensemble states have dimension " + std::to_string(ensemble.a_dim()) +
                          " but the circuit's A register has dimension " +
                          std::to_string(a_dim));
  }
  return Harness{std::move(full), std::move(bare), ensemble.r_dim(), a_dim};
}

double decode_probability(const ComplexMatrix& rho, std::size_t r_dim, std::size_t a_dim) {
  double p = 0.0;
  for (std::size_t x = 0; x < std::min(r_dim, a_dim); ++x) {
    const auto idx = static_cast<Eigen::Index>(x * a_dim + x);
    p += rho(idx, idx).real();
  }
  return p;
}

DiscriminationOutcome finish(const ComplexMatrix& out, DensityMatrix target,
                             ctc::FixedPointResult fp, std::vector<PureOutput> pure,
                             std::size_t r_dim, std::size_t a_dim) {
  DensityMatrix rho_out(out);
  const DimList dims{r_dim, a_dim};
  const ComplexMatrix rho_r = qmat::partial_trace(out, dims, {0});
  const ComplexMatrix rho_a = qmat::partial_trace(out, dims, {1});
  const double product = qmat::trace_distance(out, qmat::kron(rho_r, rho_a));
  const double mi = qmat::mutual_information(rho_out, dims);
  const double dist = qmat::trace_distance(rho_out, target);
  return DiscriminationOutcome{std::move(rho_out),
                               std::move(target),
                               dist,
                               dist <= kSuccessDistance,
                               mi,
                               product,
                               decode_probability(out, r_dim, a_dim),
                               std::move(pure),
                               std::move(fp)};
}

// Runs each ensemble state alone through `bare` with `evolve`.
template <typename Evolve>
std::vector<PureOutput> pure_runs(const LabeledEnsemble& ensemble,
                                  std::span<const std::size_t> designated, Evolve&& evolve) {
  const auto& entries = ensemble.entries();
  std::vector<std::optional<PureOutput>> slots(entries.size());
  parallel_for(entries.size(), [&](std::size_t i) {
    const EnsembleEntry& e = entries[i];
    auto [out, fp] = evolve(DensityMatrix::pure(e.state));
    const DensityMatrix target = DensityMatrix::basis(out.dim(), designated[i]);
    const double dist = qmat::trace_distance(out, target);
    slots[i] = PureOutput{e.label, std::move(out), std::move(fp), dist};
  });
  std::vector<PureOutput> result;
  for (auto& s : slots) result.push_back(std::move(*s));
  return result;
}

std::vector<std::size_t> labels_of(const LabeledEnsemble& ensemble) {
  std::vector<std::size_t> labels;
  for (const auto& e : ensemble.entries()) labels.push_back(e.label);
  return labels;
}

std::pair<DensityMatrix, ctc::FixedPointResult> deutsch(const Circuit& c,
                                                        const DensityMatrix& rho,
                                                        ctc::Selection selection) {
  ctc::Evolution ev = ctc::ctc_evolve(c, rho, selection);
  return {std::move(ev.rho_cr_out), std::move(ev.fixed_point)};
}

// Solve the fixed point, then evolve linearly gate by gate.
std::pair<DensityMatrix, ctc::FixedPointResult> linear_with_prepared_ctc(
    const Circuit& c, const DensityMatrix& rho, ctc::Selection selection) {
  const ComplexMatrix u = circuit::compile_unitary(c);
  ctc::FixedPointResult fp = ctc::fixed_point_exact(
      ctc::induced_superoperator(u, rho, c.cr_dims(), c.ctc_dims()), selection);
  const ComplexMatrix joint = qmat::kron(rho.matrix(), fp.sigma.matrix());
  const ComplexMatrix evolved = circuit::conjugate_by_circuit(c, joint);
  ComplexMatrix out = qmat::partial_trace(evolved, DimList{c.cr_dim(), c.ctc_dim()}, {0});
  out = 0.5 * (out + out.adjoint());
  return {DensityMatrix(out), std::move(fp)};
}

}  // namespace

LabeledEnsemble::LabeledEnsemble(std::vector<EnsembleEntry> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) throw ValidationError("ensemble: no entries");
  const auto dim = entries_[0].state.size();
  if (dim < 2) throw ValidationError("ensemble: state dimension must be >= 2");
  double total = 0.0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const EnsembleEntry& e = entries_[i];
    const std::string where = "ensemble entry " + std::to_string(i);
    if (!(e.probability > 0.0)) {
      throw ValidationError(where + ": probability must be positive");
    }
    if (e.state.size() != dim) throw ValidationError(where + ": state dimension differs");
    if (std::abs(e.state.norm() - 1.0) > kNormTol) {
      throw ValidationError(where + ": state not normalized");
    }
    if (e.label >= r_dim()) {
      throw ValidationError(where + ": label " + std::to_string(e.label) +
                            " outside the reference register");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (entries_[j].label == e.label) throw ValidationError(where + ": duplicate label");
    }
    total += e.probability;
  }
  if (std::abs(total - 1.0) > kProbabilitySumTol) {
    throw ValidationError("ensemble: probabilities sum to " + std::to_string(total));
  }
}

DensityMatrix LabeledEnsemble::rho_ra() const {
  const std::size_t r = r_dim();
  ComplexMatrix m = ComplexMatrix::Zero(r * a_dim(), r * a_dim());
  for (const auto& e : entries_) {
    ComplexMatrix proj = ComplexMatrix::Zero(r, r);
    proj(e.label, e.label) = 1.0;
    m += e.probability * qmat::kron(proj, ComplexMatrix(e.state * e.state.adjoint()));
  }
  return DensityMatrix(0.5 * (m + m.adjoint()));
}

DensityMatrix LabeledEnsemble::rho_r() const {
  ComplexMatrix m = ComplexMatrix::Zero(r_dim(), r_dim());
  for (const auto& e : entries_) m(e.label, e.label) = e.probability;
  return DensityMatrix(m);
}

DensityMatrix LabeledEnsemble::rho_a() const {
  ComplexMatrix m = ComplexMatrix::Zero(a_dim(), a_dim());
  for (const auto& e : entries_) m += e.probability * e.state * e.state.adjoint();
  return DensityMatrix(0.5 * (m + m.adjoint()));
}

ComplexVector LabeledEnsemble::superposition() const {
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(r_dim() * a_dim()));
  for (const auto& e : entries_) {
    v += std::sqrt(e.probability) *
         qmat::kron(ComplexVector(ComplexVector::Unit(static_cast<Eigen::Index>(r_dim()),
                                                      static_cast<Eigen::Index>(e.label))),
                    e.state);
  }
  return v;
}

DensityMatrix LabeledEnsemble::target(std::span<const std::size_t> outputs,
                                      std::size_t a_dim) const {
  if (outputs.size() != entries_.size()) {
    throw ValidationError("target: one output per ensemble entry required");
  }
  const std::size_t r = r_dim();
  ComplexMatrix m = ComplexMatrix::Zero(r * a_dim, r * a_dim);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (outputs[i] >= a_dim) throw ValidationError("target: output index outside A");
    const std::size_t idx = entries_[i].label * a_dim + outputs[i];
    m(idx, idx) += entries_[i].probability;
  }
  return DensityMatrix(m);
}

DensityMatrix LabeledEnsemble::identity_target(std::size_t a_dim) const {
  return target(labels_of(*this), a_dim);
}

std::pair<LabeledEnsemble, DensityMatrix> labeled_ensemble(std::vector<EnsembleEntry> entries) {
  LabeledEnsemble e(std::move(entries));
  DensityMatrix rho = e.rho_ra();
  return {std::move(e), std::move(rho)};
}

Circuit with_reference(const Circuit& v, std::size_t r_dim) {
  if (!v.labels().empty() && v.labels()[0] == "R") {
    if (v.cr_dims()[0] != r_dim) {
      throw ValidationError("reference wire R has dimension " + std::to_string(v.cr_dims()[0]) +
                            ", ensemble needs " + std::to_string(r_dim));
    }
    for (std::size_t i = 0; i < v.gates().size(); ++i) {
      for (std::size_t w : v.gates()[i].wires) {
        if (w == 0) {
          throw ValidationError("wire-scope violation: gate " + std::to_string(i) + " (" +
                                v.gates()[i].name + ") touches the reference register R");
        }
      }
    }
    return v;
  }
  std::vector<std::size_t> cr{r_dim};
  cr.insert(cr.end(), v.cr_dims().values().begin(), v.cr_dims().values().end());
  std::vector<Gate> gates;
  for (const Gate& g : v.gates()) {
    Gate shifted = g;
    for (std::size_t& w : shifted.wires) ++w;
    gates.push_back(std::move(shifted));
  }
  std::vector<std::string> labels{"R"};
  if (v.labels().empty()) {
    for (std::size_t w = 0; w < v.wire_count(); ++w) {
      labels.push_back(v.is_ctc_wire(w) ? "ctc" + std::to_string(w) : "a" + std::to_string(w));
    }
  } else {
    labels.insert(labels.end(), v.labels().begin(), v.labels().end());
  }
  return Circuit(DimList(std::move(cr)), v.ctc_dims(), std::move(gates), std::move(labels));
}

DiscriminationOutcome run_discrimination(const Circuit& v, const LabeledEnsemble& ensemble,
                                         ctc::Selection selection) {
  Harness h = prepare(v, ensemble);
  auto [out, fp] = deutsch(h.full, ensemble.rho_ra(), selection);
  const auto labels = labels_of(ensemble);
  auto pure = pure_runs(ensemble, labels, [&](const DensityMatrix& rho) {
    return deutsch(h.bare, rho, selection);
  });
  return finish(out.matrix(), ensemble.identity_target(h.a_dim), std::move(fp), std::move(pure),
                h.r_dim, h.a_dim);
}

DiscriminationOutcome run_superposition(const Circuit& v, const LabeledEnsemble& ensemble,
                                        ctc::Selection selection) {
  Harness h = prepare(v, ensemble);
  auto [out, fp] = deutsch(h.full, DensityMatrix::pure(ensemble.superposition()), selection);
  ComplexVector coherent = ComplexVector::Zero(static_cast<Eigen::Index>(h.r_dim * h.a_dim));
  for (const auto& e : ensemble.entries()) {
    if (e.label >= h.a_dim) throw ValidationError("label has no matching A basis state");
    coherent(static_cast<Eigen::Index>(e.label * h.a_dim + e.label)) = std::sqrt(e.probability);
  }
  const auto labels = labels_of(ensemble);
  auto pure = pure_runs(ensemble, labels, [&](const DensityMatrix& rho) {
    return deutsch(h.bare, rho, selection);
  });
  return finish(out.matrix(), DensityMatrix::pure(coherent), std::move(fp), std::move(pure),
                h.r_dim, h.a_dim);
}

DiscriminationOutcome simulate_without_ctc(const Circuit& v, const LabeledEnsemble& ensemble,
                                           ctc::Selection selection) {
  Harness h = prepare(v, ensemble);
  auto [out, fp] = linear_with_prepared_ctc(h.full, ensemble.rho_ra(), selection);
  const auto labels = labels_of(ensemble);
  auto pure = pure_runs(ensemble, labels, [&](const DensityMatrix& rho) {
    return linear_with_prepared_ctc(h.bare, rho, selection);
  });
  return finish(out.matrix(), ensemble.identity_target(h.a_dim), std::move(fp), std::move(pure),
                h.r_dim, h.a_dim);
}

double helstrom_bound(const LabeledEnsemble& ensemble) {
  if (ensemble.size() != 2) {
    throw ValidationError("helstrom_bound: ensemble must have exactly two entries");
  }
  const auto& a = ensemble.entries()[0];
  const auto& b = ensemble.entries()[1];
  const ComplexMatrix diff = a.probability * a.state * a.state.adjoint() -
                             b.probability * b.state * b.state.adjoint();
  return 0.5 + 0.5 * qmat::trace_norm(diff);
}

void ComputationTask::check() const {
  if (domain_size == 0) throw ValidationError("computation task: empty domain");
  if (truth_table.size() != domain_size) {
    throw ValidationError("computation task: truth table has " +
                          std::to_string(truth_table.size()) + " entries for domain size " +
                          std::to_string(domain_size));
  }
  const std::size_t a_dim = circuit.cr_dim();
  if (domain_size > a_dim) {
    throw ValidationError("computation task: domain larger than the A register");
  }
  for (std::size_t x = 0; x < domain_size; ++x) {
    if (truth_table[x] >= a_dim) {
      throw ValidationError("computation task: F(" + std::to_string(x) +
                            ") does not fit the A register");
    }
  }
}

DiscriminationOutcome run_computation_mixture(const ComputationTask& task,
                                              ctc::Selection selection) {
  task.check();
  const std::size_t a_dim = task.circuit.cr_dim();
  std::vector<EnsembleEntry> entries;
  for (std::size_t x = 0; x < task.domain_size; ++x) {
    entries.push_back({x, 1.0 / static_cast<double>(task.domain_size),
                       ComplexVector::Unit(static_cast<Eigen::Index>(a_dim),
                                           static_cast<Eigen::Index>(x))});
  }
  // Renormalize so floating 1/X sums pass the 1e-12 check for any X.
  double total = 0.0;
  for (const auto& e : entries) total += e.probability;
  for (auto& e : entries) e.probability /= total;
  LabeledEnsemble ensemble(std::move(entries));

  Harness h = prepare(task.circuit, ensemble);
  auto [out, fp] = deutsch(h.full, ensemble.rho_ra(), selection);
  auto pure = pure_runs(ensemble, task.truth_table, [&](const DensityMatrix& rho) {
    return deutsch(h.bare, rho, selection);
  });
  return finish(out.matrix(), ensemble.target(task.truth_table, a_dim), std::move(fp),
                std::move(pure), h.r_dim, h.a_dim);
}

}  // namespace ctcsim::protocol
