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

#include "ctcsim/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ctcsim/errors.hpp"

namespace ctcsim::qmat {

namespace {

constexpr double kEntropyClip = 1e-10;
constexpr double kMutualInfoFloor = 1e-8;

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// Kept subsystem indices, sorted and checked against `dims`.
std::vector<std::size_t> normalize_keep(const ComplexMatrix& m,
                                        const DimList& dims,
                                        std::span<const std::size_t> keep) {
  if (m.rows() != m.cols()) {
    throw ValidationError("partial_trace: matrix is not square");
  }
  if (dims.total() != static_cast<std::size_t>(m.rows())) {
    throw ValidationError("partial_trace: dims product " +
                          std::to_string(dims.total()) +
                          " does not match matrix dimension " +
                          std::to_string(m.rows()));
  }
  std::vector<std::size_t> sorted(keep.begin(), keep.end());
  if (sorted.empty()) return sorted;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("partial_trace: duplicate subsystem in keep set");
  }
  if (sorted.back() >= dims.size()) {
    throw ValidationError("partial_trace: subsystem index " +
                          std::to_string(sorted.back()) + " out of range");
  }
  return sorted;
}

}  // namespace

std::vector<std::size_t> subsystem_offsets(const DimList& dims,
                                           std::span<const std::size_t> subsystems) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * dims[i];
  }
  std::vector<std::size_t> offsets{0};
  for (std::size_t s : subsystems) {
    std::vector<std::size_t> next;
    next.reserve(offsets.size() * dims[s]);
    for (std::size_t base : offsets) {
      for (std::size_t digit = 0; digit < dims[s]; ++digit) {
        next.push_back(base + digit * strides[s]);
      }
    }
    offsets = std::move(next);
  }
  return offsets;
}

void Tolerances::check() const {
  if (!(hermiticity > 0 && psd_floor > 0 && fixed_point_residual > 0 &&
        eigenvalue_one_window > 0)) {
    throw ValidationError("tolerances must be strictly positive");
  }
}

DimList::DimList(std::initializer_list<std::size_t> dims)
    : DimList(std::vector<std::size_t>(dims)) {}

DimList::DimList(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i] < 2) {
      throw ValidationError("DimList: entry " + std::to_string(i) +
                            " has dimension " + std::to_string(dims_[i]) +
                            " (must be >= 2)");
    }
  }
}

std::size_t DimList::total() const {
  return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1},
                         std::multiplies<>());
}

DimList DimList::concat(const DimList& other) const {
  std::vector<std::size_t> all = dims_;
  all.insert(all.end(), other.dims_.begin(), other.dims_.end());
  return DimList(std::move(all));
}

DensityMatrix::DensityMatrix(ComplexMatrix m, const Tolerances& tol)
    : m_(std::move(m)) {
  ValidationReport report = validate(m_, MatrixKind::density, tol);
  if (!report.ok()) {
    throw ValidationError("invalid density matrix: " + report.describe());
  }
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  double norm = psi.norm();
  if (!(std::abs(norm - 1.0) <= 1e-10)) {
    std::ostringstream os;
    os << "pure state not normalized (norm " << norm << ")";
    throw ValidationError(os.str());
  }
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  if (dim == 0) throw ValidationError("maximally_mixed: dimension 0");
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) /
                       static_cast<double>(dim));
}

DensityMatrix DensityMatrix::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw ValidationError("basis: index out of range");
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(index, index) = 1.0;
  return DensityMatrix(std::move(m));
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
        return false;
      }
    }
  }
  return true;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!all_finite(a) || !all_finite(b)) {
    throw ValidationError("kron: non-finite entry");
  }
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexMatrix m = kron(ComplexMatrix(a), ComplexMatrix(b));
  return m.col(0);
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const DimList& dims,
                            std::span<const std::size_t> keep) {
  std::vector<std::size_t> kept = normalize_keep(m, dims, keep);
  std::vector<std::size_t> traced;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (!std::binary_search(kept.begin(), kept.end(), i)) traced.push_back(i);
  }
  const std::vector<std::size_t> kept_off = subsystem_offsets(dims, kept);
  const std::vector<std::size_t> traced_off = subsystem_offsets(dims, traced);
  const auto dk = static_cast<std::ptrdiff_t>(kept_off.size());

  ComplexMatrix out(dk, dk);
#pragma omp parallel for schedule(static) if (dk * dk * static_cast<std::ptrdiff_t>(traced_off.size()) > 4096)
  for (std::ptrdiff_t r = 0; r < dk; ++r) {
    for (std::ptrdiff_t c = 0; c < dk; ++c) {
      Complex acc = 0.0;
      for (std::size_t t : traced_off) {
        acc += m(static_cast<Eigen::Index>(kept_off[r] + t),
                 static_cast<Eigen::Index>(kept_off[c] + t));
      }
      out(r, c) = acc;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const DimList& dims,
                            std::initializer_list<std::size_t> keep) {
  return partial_trace(m, dims, std::span<const std::size_t>(keep.begin(), keep.size()));
}

ComplexMatrix partial_trace_reference(const ComplexMatrix& m,
                                      const DimList& dims,
                                      std::span<const std::size_t> keep) {
  std::vector<std::size_t> kept = normalize_keep(m, dims, keep);
  std::vector<bool> is_kept(dims.size(), false);
  std::size_t dk = 1;
  for (std::size_t k : kept) {
    is_kept[k] = true;
    dk *= dims[k];
  }
  const std::size_t n = dims.total();
  std::vector<std::size_t> row_digits(dims.size());
  std::vector<std::size_t> col_digits(dims.size());
  auto decompose = [&](std::size_t index, std::vector<std::size_t>& digits) {
    for (std::size_t i = dims.size(); i-- > 0;) {
      digits[i] = index % dims[i];
      index /= dims[i];
    }
  };
  auto kept_index = [&](const std::vector<std::size_t>& digits) {
    std::size_t index = 0;
    for (std::size_t k : kept) index = index * dims[k] + digits[k];
    return index;
  };

  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (std::size_t r = 0; r < n; ++r) {
    decompose(r, row_digits);
    for (std::size_t c = 0; c < n; ++c) {
      decompose(c, col_digits);
      bool diagonal_in_traced = true;
      for (std::size_t i = 0; i < dims.size() && diagonal_in_traced; ++i) {
        if (!is_kept[i] && row_digits[i] != col_digits[i]) {
          diagonal_in_traced = false;
        }
      }
      if (diagonal_in_traced) {
        out(kept_index(row_digits), kept_index(col_digits)) +=
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      }
    }
  }
  return out;
}

double trace_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("trace_distance: dimension mismatch");
  }
  return 0.5 * trace_norm(a - b);
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_distance(a.matrix(), b.matrix());
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double von_neumann_entropy(const DensityMatrix& rho) {
  Eigen::VectorXd eig = hermitian_eigenvalues(rho.matrix());
  double s = 0.0;
  for (double lambda : eig) {
    if (lambda < -kEntropyClip) {
      std::ostringstream os;
      os << "von_neumann_entropy: eigenvalue " << lambda
         << " below the clipping floor";
      throw ValidationError(os.str());
    }
    s -= xlog2x(std::max(lambda, 0.0));
  }
  return std::max(s, 0.0);
}

double mutual_information(const DensityMatrix& rho_ab, const DimList& dims) {
  if (dims.size() != 2) {
    throw ValidationError("mutual_information: need exactly two subsystems");
  }
  if (dims.total() != rho_ab.dim()) {
    throw ValidationError("mutual_information: dims do not match state");
  }
  Tolerances loose;
  loose.hermiticity = 1e-9;
  loose.psd_floor = 1e-9;
  DensityMatrix a(partial_trace(rho_ab.matrix(), dims, {0}), loose);
  DensityMatrix b(partial_trace(rho_ab.matrix(), dims, {1}), loose);
  double mi = von_neumann_entropy(a) + von_neumann_entropy(b) -
              von_neumann_entropy(rho_ab);
  if (mi < 0.0 && mi >= -kMutualInfoFloor) mi = 0.0;
  return mi;
}

double hermiticity_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const ComplexMatrix& m) {
  ComplexMatrix id = ComplexMatrix::Identity(m.cols(), m.cols());
  return (m.adjoint() * m - id).cwiseAbs().maxCoeff();
}

std::string ValidationReport::describe() const {
  if (violations.empty()) return "valid";
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].invariant << " (violation " << violations[i].magnitude
       << ")";
  }
  return os.str();
}

ValidationReport validate(const ComplexMatrix& m, MatrixKind kind,
                          const Tolerances& tol) {
  ValidationReport report;
  if (m.rows() != m.cols() || m.rows() == 0) {
    report.violations.push_back(
        {"square non-empty matrix", static_cast<double>(std::abs(m.rows() - m.cols()))});
    return report;
  }
  if (!all_finite(m)) {
    report.violations.push_back({"finite entries", INFINITY});
    return report;
  }
  if (kind == MatrixKind::unitary) {
    double defect = unitarity_defect(m);
    if (defect > tol.hermiticity) {
      report.violations.push_back({"unitary", defect});
    }
    return report;
  }

  double herm = hermiticity_defect(m);
  if (herm > tol.hermiticity) {
    report.violations.push_back({"hermitian", herm});
  }
  double min_eig = hermitian_eigenvalues(m).minCoeff();
  if (min_eig < -tol.psd_floor) {
    std::ostringstream os;
    os << "positive semidefinite (min eigenvalue = " << min_eig << ")";
    report.violations.push_back({os.str(), -min_eig});
  }
  Complex tr = m.trace();
  double trace_defect = std::abs(tr - Complex(1.0, 0.0));
  if (trace_defect > tol.hermiticity) {
    std::ostringstream os;
    os << "unit trace (trace = " << tr.real() << ")";
    report.violations.push_back({os.str(), trace_defect});
  }
  return report;
}

}  // namespace ctcsim::qmat
