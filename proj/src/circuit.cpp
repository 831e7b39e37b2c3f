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

#include "ctcsim/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "ctcsim/errors.hpp"

namespace ctcsim::circuit {

namespace {

using json = nlohmann::json;
using qmat::Complex;

constexpr double kGateUnitarityTol = 1e-10;
constexpr double kInnerProductTol = 1e-10;
constexpr double kExtensionThreshold = 1e-8;

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

std::string fmt(Complex z) {
  std::ostringstream os;
  os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

// Appends the normalized residual of `v` against `basis` if it is large
// enough. Orthogonalizes twice for stability.
bool extend_basis(std::vector<ComplexVector>& basis, ComplexVector v,
                  double threshold) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const ComplexVector& b : basis) v -= b.dot(v) * b;
  }
  double norm = v.norm();
  if (norm <= threshold) return false;
  basis.push_back(v / norm);
  return true;
}

ComplexMatrix orthonormal_completion(const std::vector<ComplexVector>& vectors,
                                     std::size_t dim, bool& independent) {
  std::vector<ComplexVector> basis;
  independent = true;
  for (const ComplexVector& v : vectors) {
    if (!extend_basis(basis, v, kExtensionThreshold)) independent = false;
  }
  for (std::size_t i = 0; i < dim && basis.size() < dim; ++i) {
    extend_basis(basis, ComplexVector::Unit(static_cast<Eigen::Index>(dim),
                                            static_cast<Eigen::Index>(i)),
                 kExtensionThreshold);
  }
  ComplexMatrix q(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) q.col(static_cast<Eigen::Index>(i)) = basis[i];
  return q;
}

ComplexMatrix swap_matrix(std::size_t d) {
  ComplexMatrix m = ComplexMatrix::Zero(d * d, d * d);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) m(b * d + a, a * d + b) = 1.0;
  }
  return m;
}

void check_gate(const Gate& g, std::size_t index, const DimList& wire_dims) {
  const std::string where = "gate " + std::to_string(index) + " (" + g.name + ")";
  if (g.wires.empty()) throw ValidationError(where + ": no wires");
  std::size_t dim = 1;
  for (std::size_t w : g.wires) {
    if (w >= wire_dims.size()) {
      throw ValidationError(where + ": wire " + std::to_string(w) +
                            " out of range (circuit has " +
                            std::to_string(wire_dims.size()) + " wires)");
    }
    dim *= wire_dims[w];
  }
  std::vector<std::size_t> sorted = g.wires;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError(where + ": repeated wire");
  }
  if (static_cast<std::size_t>(g.matrix.rows()) != dim ||
      static_cast<std::size_t>(g.matrix.cols()) != dim) {
    throw ValidationError(where + ": matrix is " + std::to_string(g.matrix.rows()) +
                          "x" + std::to_string(g.matrix.cols()) +
                          ", wires need " + std::to_string(dim) + "x" +
                          std::to_string(dim));
  }
  if (!qmat::all_finite(g.matrix)) {
    throw ValidationError(where + ": non-finite matrix entry");
  }
  double defect = qmat::unitarity_defect(g.matrix);
  if (defect > kGateUnitarityTol) {
    throw ValidationError(where + ": not unitary (deviation " + fmt(defect) + ")");
  }
}

// ---- JSON helpers ---------------------------------------------------------

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ValidationError(path + ": " + msg);
}

std::vector<std::size_t> read_dims(const json& doc, const std::string& key) {
  const std::string path = "$." + key;
  if (!doc.contains(key)) fail("$", "missing \"" + key + "\"");
  const json& arr = doc.at(key);
  if (!arr.is_array()) fail(path, "expected an array of integers");
  std::vector<std::size_t> dims;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& v = arr[i];
    if (!v.is_number_integer() || v.get<long long>() < 2) {
      fail(path + "[" + std::to_string(i) + "]", "expected an integer >= 2");
    }
    dims.push_back(v.get<std::size_t>());
  }
  if (dims.empty()) fail(path, "must declare at least one wire");
  return dims;
}

ComplexMatrix read_matrix(const json& m, const std::string& path) {
  if (!m.is_array() || m.empty()) fail(path, "expected a non-empty array of rows");
  const std::size_t rows = m.size();
  ComplexMatrix out(rows, rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    const json& row = m[i];
    if (!row.is_array() || row.size() != rows) {
      fail(row_path, "expected " + std::to_string(rows) + " entries (square matrix)");
    }
    for (std::size_t j = 0; j < rows; ++j) {
      const json& z = row[j];
      const std::string entry_path = row_path + "[" + std::to_string(j) + "]";
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        fail(entry_path, "expected [re, im]");
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  return out;
}

json write_matrix(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

bool is_builtin_gate(std::string_view name) {
  return name == "swap" || name == "h" || name == "x" || name == "cnot";
}

ComplexMatrix builtin_gate_matrix(std::string_view name,
                                  std::span<const std::size_t> wire_dims) {
  auto require_qubits = [&](std::size_t arity) {
    if (wire_dims.size() != arity ||
        std::any_of(wire_dims.begin(), wire_dims.end(),
                    [](std::size_t d) { return d != 2; })) {
      throw ValidationError("built-in gate \"" + std::string(name) + "\" needs " +
                            std::to_string(arity) + " qubit wire(s)");
    }
  };
  if (name == "swap") {
    if (wire_dims.size() != 2 || wire_dims[0] != wire_dims[1]) {
      throw ValidationError("built-in gate \"swap\" needs two wires of equal dimension");
    }
    return swap_matrix(wire_dims[0]);
  }
  if (name == "h") {
    require_qubits(1);
    const double s = 1.0 / std::numbers::sqrt2;
    ComplexMatrix m(2, 2);
    m << s, s, s, -s;
    return m;
  }
  if (name == "x") {
    require_qubits(1);
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
  }
  if (name == "cnot") {
    require_qubits(2);
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
    return m;
  }
  throw ValidationError("unknown built-in gate \"" + std::string(name) + "\"");
}

Circuit::Circuit(DimList cr_dims, DimList ctc_dims, std::vector<Gate> gates,
                 std::vector<std::string> labels)
    : cr_dims_(std::move(cr_dims)),
      ctc_dims_(std::move(ctc_dims)),
      gates_(std::move(gates)),
      labels_(std::move(labels)) {
  if (cr_dims_.empty()) throw ValidationError("circuit: CR register has no wires");
  if (ctc_dims_.empty()) throw ValidationError("circuit: CTC register has no wires");
  if (!labels_.empty() && labels_.size() != wire_count()) {
    throw ValidationError("circuit: " + std::to_string(labels_.size()) +
                          " labels for " + std::to_string(wire_count()) + " wires");
  }
  const DimList dims = wire_dims();
  for (std::size_t i = 0; i < gates_.size(); ++i) check_gate(gates_[i], i, dims);
}

bool Circuit::cr_only() const {
  for (const Gate& g : gates_) {
    for (std::size_t w : g.wires) {
      if (is_ctc_wire(w)) return false;
    }
  }
  return true;
}

Circuit parse_circuit(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail("$", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("$", "expected an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "cr_dims" && key != "ctc_dims" && key != "gates" && key != "labels") {
      fail("$." + key, "unknown key");
    }
  }
  DimList cr(read_dims(doc, "cr_dims"));
  DimList ctc(read_dims(doc, "ctc_dims"));
  const DimList wires = cr.concat(ctc);

  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    const json& l = doc.at("labels");
    if (!l.is_array() || l.size() != wires.size()) {
      fail("$.labels", "expected one string per wire");
    }
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (!l[i].is_string()) fail("$.labels[" + std::to_string(i) + "]", "expected a string");
      labels.push_back(l[i].get<std::string>());
    }
  }

  if (!doc.contains("gates")) fail("$", "missing \"gates\"");
  const json& gate_docs = doc.at("gates");
  if (!gate_docs.is_array()) fail("$.gates", "expected an array");
  std::vector<Gate> gates;
  for (std::size_t gi = 0; gi < gate_docs.size(); ++gi) {
    const std::string path = "$.gates[" + std::to_string(gi) + "]";
    const json& g = gate_docs[gi];
    if (!g.is_object()) fail(path, "expected an object");
    for (const auto& [key, _] : g.items()) {
      if (key != "name" && key != "wires" && key != "matrix") fail(path + "." + key, "unknown key");
    }
    if (!g.contains("name") || !g.at("name").is_string()) {
      fail(path + ".name", "expected a string");
    }
    Gate gate;
    gate.name = g.at("name").get<std::string>();
    if (!g.contains("wires") || !g.at("wires").is_array() || g.at("wires").empty()) {
      fail(path + ".wires", "expected a non-empty array of wire indices");
    }
    std::vector<std::size_t> wire_dims;
    const json& w = g.at("wires");
    for (std::size_t k = 0; k < w.size(); ++k) {
      const std::string wpath = path + ".wires[" + std::to_string(k) + "]";
      if (!w[k].is_number_integer() || w[k].get<long long>() < 0) {
        fail(wpath, "expected a non-negative integer");
      }
      auto idx = w[k].get<std::size_t>();
      if (idx >= wires.size()) {
        fail(wpath, "wire " + std::to_string(idx) + " out of range (circuit has " +
                        std::to_string(wires.size()) + " wires)");
      }
      if (std::find(gate.wires.begin(), gate.wires.end(), idx) != gate.wires.end()) {
        fail(wpath, "repeated wire " + std::to_string(idx));
      }
      gate.wires.push_back(idx);
      wire_dims.push_back(wires[idx]);
    }
    std::size_t dim = 1;
    for (std::size_t d : wire_dims) dim *= d;

    if (g.contains("matrix")) {
      gate.matrix = read_matrix(g.at("matrix"), path + ".matrix");
      if (static_cast<std::size_t>(gate.matrix.rows()) != dim) {
        fail(path + ".matrix", "gate " + std::to_string(gi) + " matrix is " +
                                   std::to_string(gate.matrix.rows()) + "x" +
                                   std::to_string(gate.matrix.rows()) + ", wires need " +
                                   std::to_string(dim) + "x" + std::to_string(dim));
      }
      double defect = qmat::unitarity_defect(gate.matrix);
      if (defect > kGateUnitarityTol) {
        fail(path + ".matrix", "gate " + std::to_string(gi) + " not unitary (deviation " +
                                   fmt(defect) + ")");
      }
    } else if (is_builtin_gate(gate.name)) {
      try {
        gate.matrix = builtin_gate_matrix(gate.name, wire_dims);
      } catch (const ValidationError& e) {
        fail(path, e.what());
      }
    } else {
      fail(path + ".matrix", "unknown gate \"" + gate.name + "\" requires a matrix");
    }
    gates.push_back(std::move(gate));
  }
  return Circuit(std::move(cr), std::move(ctc), std::move(gates), std::move(labels));
}

std::string serialize_circuit(const Circuit& c) {
  json doc;
  doc["cr_dims"] = c.cr_dims().values();
  doc["ctc_dims"] = c.ctc_dims().values();
  json gates = json::array();
  for (const Gate& g : c.gates()) {
    gates.push_back({{"name", g.name}, {"wires", g.wires}, {"matrix", write_matrix(g.matrix)}});
  }
  doc["gates"] = std::move(gates);
  if (!c.labels().empty()) doc["labels"] = c.labels();
  return doc.dump(2);
}

void apply_gate(ComplexMatrix& columns, const Gate& gate, const DimList& wire_dims) {
  std::vector<std::size_t> rest;
  for (std::size_t w = 0; w < wire_dims.size(); ++w) {
    if (std::find(gate.wires.begin(), gate.wires.end(), w) == gate.wires.end()) {
      rest.push_back(w);
    }
  }
  const std::vector<std::size_t> gate_off = qmat::subsystem_offsets(wire_dims, gate.wires);
  const std::vector<std::size_t> rest_off = qmat::subsystem_offsets(wire_dims, rest);
  const auto k = static_cast<Eigen::Index>(gate_off.size());
  const auto ncols = static_cast<std::ptrdiff_t>(columns.cols());

#pragma omp parallel for schedule(static) if (ncols * columns.rows() > 4096)
  for (std::ptrdiff_t c = 0; c < ncols; ++c) {
    ComplexVector in(k);
    for (std::size_t base : rest_off) {
      for (Eigen::Index s = 0; s < k; ++s) {
        in(s) = columns(static_cast<Eigen::Index>(base + gate_off[s]), c);
      }
      ComplexVector out = gate.matrix * in;
      for (Eigen::Index s = 0; s < k; ++s) {
        columns(static_cast<Eigen::Index>(base + gate_off[s]), c) = out(s);
      }
    }
  }
}

ComplexMatrix embed_gate(const Gate& gate, const DimList& wire_dims) {
  const std::size_t n = wire_dims.total();
  std::vector<bool> targeted(wire_dims.size(), false);
  for (std::size_t w : gate.wires) targeted[w] = true;

  auto digits_of = [&](std::size_t index) {
    std::vector<std::size_t> d(wire_dims.size());
    for (std::size_t i = wire_dims.size(); i-- > 0;) {
      d[i] = index % wire_dims[i];
      index /= wire_dims[i];
    }
    return d;
  };
  auto gate_index = [&](const std::vector<std::size_t>& d) {
    std::size_t index = 0;
    for (std::size_t w : gate.wires) index = index * wire_dims[w] + d[w];
    return index;
  };

  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto rd = digits_of(r);
    for (std::size_t c = 0; c < n; ++c) {
      const auto cd = digits_of(c);
      bool same_elsewhere = true;
      for (std::size_t i = 0; i < wire_dims.size(); ++i) {
        if (!targeted[i] && rd[i] != cd[i]) {
          same_elsewhere = false;
          break;
        }
      }
      if (same_elsewhere) {
        out(r, c) = gate.matrix(gate_index(rd), gate_index(cd));
      }
    }
  }
  return out;
}

ComplexMatrix compile_unitary(const Circuit& c) {
  const DimList dims = c.wire_dims();
  ComplexMatrix u = ComplexMatrix::Identity(c.total_dim(), c.total_dim());
  for (const Gate& g : c.gates()) apply_gate(u, g, dims);
  return u;
}

ComplexMatrix compile_unitary_reference(const Circuit& c) {
  const DimList dims = c.wire_dims();
  ComplexMatrix u = ComplexMatrix::Identity(c.total_dim(), c.total_dim());
  for (const Gate& g : c.gates()) u = embed_gate(g, dims) * u;
  return u;
}

ComplexMatrix conjugate_by_circuit(const Circuit& c, const ComplexMatrix& rho) {
  if (static_cast<std::size_t>(rho.rows()) != c.total_dim()) {
    throw ValidationError("conjugate_by_circuit: state dimension mismatch");
  }
  const DimList dims = c.wire_dims();
  ComplexMatrix m = rho;
  for (const Gate& g : c.gates()) {
    apply_gate(m, g, dims);  // G ρ
    m.adjointInPlace();      // ρ† G†
    apply_gate(m, g, dims);  // G ρ† G†
    m.adjointInPlace();      // G ρ G†
  }
  return m;
}

ComplexMatrix complete_unitary(std::span<const Constraint> constraints,
                               std::size_t dim) {
  if (dim == 0) throw ValidationError("complete_unitary: dimension 0");
  if (constraints.size() > dim) {
    throw ValidationError("complete_unitary: more constraints than dimensions");
  }
  std::vector<ComplexVector> ins;
  std::vector<ComplexVector> outs;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto& [in, out] = constraints[i];
    if (static_cast<std::size_t>(in.size()) != dim ||
        static_cast<std::size_t>(out.size()) != dim) {
      throw ValidationError("complete_unitary: constraint " + std::to_string(i) +
                            " has wrong vector length");
    }
    ins.push_back(in);
    outs.push_back(out);
  }
  for (std::size_t i = 0; i < ins.size(); ++i) {
    for (std::size_t j = i; j < ins.size(); ++j) {
      Complex gin = ins[i].dot(ins[j]);
      Complex gout = outs[i].dot(outs[j]);
      if (std::abs(gin - gout) > kInnerProductTol) {
        throw ValidationError("complete_unitary: constraints " + std::to_string(i) +
                              " and " + std::to_string(j) +
                              " do not preserve inner products (<in|in> = " + fmt(gin) +
                              ", <out|out> = " + fmt(gout) + ")");
      }
    }
  }
  bool in_independent = true;
  bool out_independent = true;
  ComplexMatrix qin = orthonormal_completion(ins, dim, in_independent);
  ComplexMatrix qout = orthonormal_completion(outs, dim, out_independent);
  if (!in_independent || !out_independent) {
    throw ValidationError("complete_unitary: constraint vectors are linearly dependent");
  }
  ComplexMatrix u = qout * qin.adjoint();
  for (std::size_t i = 0; i < ins.size(); ++i) {
    double err = (u * ins[i] - outs[i]).norm();
    if (err > 1e-9) {
      throw ValidationError("complete_unitary: constraint " + std::to_string(i) +
                            " not met (error " + fmt(err) + ")");
    }
  }
  return u;
}

Circuit build_bhw2(const ComplexVector& psi) {
  if (psi.size() != 2) throw ValidationError("build_bhw2: psi must be a qubit state");
  if (std::abs(psi.norm() - 1.0) > 1e-10) {
    throw ValidationError("build_bhw2: psi not normalized");
  }
  if (std::abs(psi(0)) >= 1.0 - 1e-10) {
    throw ValidationError("build_bhw2: psi equals |0> up to phase (degenerate pair)");
  }
  // Phase fixed so <1|psi> >= 0. The complement psi_perp = (-s, conj(a)) goes
  // to +|0>, which keeps the fixed point diagonal for every ensemble.
  const ComplexVector phased = psi * std::polar(1.0, -std::arg(psi(1)));
  ComplexVector perp(2);
  perp << -phased(1), std::conj(phased(0));
  const Constraint constraints[] = {{phased, ComplexVector::Unit(2, 1)},
                                    {perp, ComplexVector::Unit(2, 0)}};
  const ComplexMatrix u = complete_unitary(constraints, 2);

  ComplexMatrix controlled = ComplexMatrix::Identity(4, 4);
  controlled.bottomRightCorner(2, 2) = u;
  std::vector<Gate> gates;
  gates.push_back({"cu", {1, 0}, controlled});
  gates.push_back({"swap", {0, 1}, swap_matrix(2)});
  return Circuit(DimList{2}, DimList{2}, std::move(gates), {"A", "CTC"});
}

Circuit build_bhw_multi(std::span<const ComplexVector> states) {
  const std::size_t n = states.size();
  if (n < 2) throw ValidationError("build_bhw_multi: need at least two states");
  const auto din = static_cast<std::size_t>(states[0].size());
  if (din < 2) throw ValidationError("build_bhw_multi: input register dimension < 2");
  for (std::size_t i = 0; i < n; ++i) {
    if (static_cast<std::size_t>(states[i].size()) != din) {
      throw ValidationError("build_bhw_multi: state " + std::to_string(i) +
                            " has a different dimension");
    }
    if (std::abs(states[i].norm() - 1.0) > 1e-10) {
      throw ValidationError("build_bhw_multi: state " + std::to_string(i) +
                            " not normalized");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(states[j].dot(states[i])) >= 1.0 - 1e-10) {
        throw ValidationError("build_bhw_multi: states " + std::to_string(j) + " and " +
                              std::to_string(i) + " are the same ray");
      }
    }
  }

  std::vector<std::size_t> cr_dims{din};
  std::size_t cr_dim = din;
  while (cr_dim < n) {
    cr_dims.push_back(2);
    cr_dim *= 2;
  }
  ComplexVector ancilla_zero = ComplexVector::Unit(static_cast<Eigen::Index>(cr_dim / din), 0);
  auto pad = [&](const ComplexVector& v) {
    return cr_dim == din ? v : qmat::kron(v, ancilla_zero);
  };
  auto basis = [&](std::size_t i) {
    return ComplexVector::Unit(static_cast<Eigen::Index>(cr_dim), static_cast<Eigen::Index>(i));
  };

  const std::size_t ncr = cr_dims.size();
  std::vector<std::size_t> control_wires{ncr};
  for (std::size_t w = 0; w < ncr; ++w) control_wires.push_back(w);

  std::vector<Gate> gates;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Constraint> constraints{{pad(states[i]), basis(i)}};
    // Complement of φ_i inside the input register, standard-basis order.
    std::vector<ComplexVector> span{states[i]};
    for (std::size_t e = 0; e < din; ++e) {
      extend_basis(span, ComplexVector::Unit(static_cast<Eigen::Index>(din),
                                             static_cast<Eigen::Index>(e)),
                   kExtensionThreshold);
    }
    for (std::size_t r = 1; r < span.size() && r < n; ++r) {
      constraints.emplace_back(pad(span[r]), basis((i + r) % n));
    }
    ComplexMatrix v = complete_unitary(constraints, cr_dim);

    ComplexMatrix controlled = ComplexMatrix::Identity(n * cr_dim, n * cr_dim);
    controlled.block(i * cr_dim, i * cr_dim, cr_dim, cr_dim) = v;
    gates.push_back({"cv" + std::to_string(i), control_wires, controlled});
  }

  // |a>_CR |b>_CTC -> |b>_CR |a>_CTC on the common n-dimensional subspace.
  ComplexMatrix exchange = ComplexMatrix::Zero(cr_dim * n, cr_dim * n);
  for (std::size_t a = 0; a < cr_dim; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t from = a * n + b;
      const std::size_t to = a < n ? b * n + a : from;
      exchange(to, from) = 1.0;
    }
  }
  std::vector<std::size_t> all_wires;
  for (std::size_t w = 0; w <= ncr; ++w) all_wires.push_back(w);
  gates.push_back({"register_swap", all_wires, exchange});

  std::vector<std::string> labels{"A"};
  for (std::size_t w = 1; w < ncr; ++w) labels.push_back("anc" + std::to_string(w - 1));
  labels.push_back("CTC");
  return Circuit(DimList(cr_dims), DimList{n}, std::move(gates), std::move(labels));
}

ComplexVector pad_with_ancillas(const Circuit& multi, const ComplexVector& state) {
  const std::size_t din = multi.cr_dims()[0];
  if (static_cast<std::size_t>(state.size()) != din) {
    throw ValidationError("pad_with_ancillas: state dimension does not match input wire");
  }
  const std::size_t anc = multi.cr_dim() / din;
  if (anc == 1) return state;
  return qmat::kron(state, ComplexVector::Unit(static_cast<Eigen::Index>(anc), 0));
}

Circuit build_epr_swap() {
  std::vector<Gate> gates{{"swap", {1, 2}, swap_matrix(2)}};
  return Circuit(DimList{2, 2}, DimList{2}, std::move(gates), {"A", "B", "CTC"});
}

}  // namespace ctcsim::circuit
