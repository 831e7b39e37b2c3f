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

#include "ctcsim/ctc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "ctcsim/errors.hpp"

namespace ctcsim::ctc {

namespace {

using qmat::Complex;

constexpr double kUnitarityTol = 1e-9;
constexpr double kSupportFloor = 1e-9;

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

ComplexMatrix hermitize(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

// Hermitize, clip eigenvalues in [−floor, 0) and renormalize. More negative
// eigenvalues are a solver failure, never repaired.
DensityMatrix repair_density(const ComplexMatrix& m, double floor,
                             std::string_view who) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(hermitize(m));
  Eigen::VectorXd lambda = eig.eigenvalues();
  if (lambda.minCoeff() < -floor) {
    throw SolverError(std::string(who) + ": fixed point has eigenvalue " +
                          fmt(lambda.minCoeff()) + " below the PSD floor",
                      -lambda.minCoeff());
  }
  lambda = lambda.cwiseMax(0.0);
  ComplexMatrix out = eig.eigenvectors() * lambda.cast<Complex>().asDiagonal() *
                      eig.eigenvectors().adjoint();
  out /= out.trace().real();
  return DensityMatrix(hermitize(out));
}

void check_unitary(const ComplexMatrix& u, std::size_t dim) {
  if (static_cast<std::size_t>(u.rows()) != dim || u.rows() != u.cols()) {
    throw ValidationError("unitary has dimension " + std::to_string(u.rows()) +
                          ", expected " + std::to_string(dim));
  }
  double defect = qmat::unitarity_defect(u);
  if (defect > kUnitarityTol) {
    throw ValidationError("U is not unitary (deviation " + fmt(defect) + ")");
  }
}

// Real coordinates of an s×s Hermitian matrix, orthonormal in the
// Hilbert-Schmidt inner product.
Eigen::VectorXd hermitian_to_real(const ComplexMatrix& h) {
  const Eigen::Index s = h.rows();
  Eigen::VectorXd x(s * s);
  Eigen::Index k = 0;
  for (Eigen::Index a = 0; a < s; ++a) x(k++) = h(a, a).real();
  for (Eigen::Index a = 0; a < s; ++a) {
    for (Eigen::Index b = a + 1; b < s; ++b) {
      x(k++) = std::sqrt(2.0) * h(a, b).real();
      x(k++) = std::sqrt(2.0) * h(a, b).imag();
    }
  }
  return x;
}

ComplexMatrix real_to_hermitian(const Eigen::VectorXd& x, Eigen::Index s) {
  ComplexMatrix h(s, s);
  Eigen::Index k = 0;
  for (Eigen::Index a = 0; a < s; ++a) h(a, a) = x(k++);
  for (Eigen::Index a = 0; a < s; ++a) {
    for (Eigen::Index b = a + 1; b < s; ++b) {
      const double re = x(k++) / std::sqrt(2.0);
      const double im = x(k++) / std::sqrt(2.0);
      h(a, b) = Complex(re, im);
      h(b, a) = Complex(re, -im);
    }
  }
  return h;
}

struct NullSpaces {
  ComplexMatrix right;  // columns span ker(M − I)
  ComplexMatrix left;   // columns span ker((M − I)†)
  double smallest_singular_value;
};

NullSpaces eigenvalue_one_spaces(const Superoperator& s, double window) {
  const auto n = s.matrix().rows();
  ComplexMatrix a = s.matrix() - ComplexMatrix::Identity(n, n);
  Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::Index k = 0;
  while (k < n && sv(n - 1 - k) <= window) ++k;
  return {svd.matrixV().rightCols(k), svd.matrixU().rightCols(k),
          n > 0 ? sv(n - 1) : 0.0};
}

ComplexMatrix projection_from(const NullSpaces& ns) {
  ComplexMatrix overlap = ns.left.adjoint() * ns.right;
  Eigen::FullPivLU<ComplexMatrix> lu(overlap);
  if (!lu.isInvertible()) {
    throw SolverError("fixed-space projection: eigenvalue 1 is not semisimple",
                      ns.smallest_singular_value);
  }
  return ns.right * lu.solve(ns.left.adjoint());
}

// Entropy (natural log) of a positive-definite Hermitian matrix given its
// eigenvalues.
double entropy_nats(const Eigen::VectorXd& lambda) {
  double s = 0.0;
  for (double l : lambda) {
    if (l > 0) s -= l * std::log(l);
  }
  return s;
}

// Maximizes von Neumann entropy over {σ_c + Σ t_m T_m ≥ 0} where the T_m
// span the traceless Hermitian part of the fixed space, compressed to the
// support of σ_c.
ComplexMatrix max_entropy_point(const ComplexMatrix& right_null,
                                const DensityMatrix& canonical) {
  const std::size_t d = canonical.dim();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(canonical.matrix());
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    if (eig.eigenvalues()(i) > kSupportFloor) support.push_back(i);
  }
  const auto s = static_cast<Eigen::Index>(support.size());
  ComplexMatrix w(static_cast<Eigen::Index>(d), s);
  for (Eigen::Index j = 0; j < s; ++j) w.col(j) = eig.eigenvectors().col(support[j]);

  // Real Hermitian basis of the compressed fixed space.
  const Eigen::Index k = right_null.cols();
  Eigen::MatrixXd stacked(s * s, 2 * k);
  for (Eigen::Index m = 0; m < k; ++m) {
    ComplexMatrix x = unvec(right_null.col(m), d);
    ComplexMatrix re = w.adjoint() * hermitize(x) * w;
    ComplexMatrix im = w.adjoint() * ((x - x.adjoint()) / Complex(0.0, 2.0)) * w;
    stacked.col(2 * m) = hermitian_to_real(hermitize(re));
    stacked.col(2 * m + 1) = hermitian_to_real(hermitize(im));
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeThinU);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-9 * std::max(1.0, sv(0))) ++rank;
  Eigen::MatrixXd basis = svd.matrixU().leftCols(rank);

  // Traceless combinations: orthogonal complement of the trace functional.
  Eigen::VectorXd traces(rank);
  for (Eigen::Index m = 0; m < rank; ++m) {
    traces(m) = real_to_hermitian(basis.col(m), s).trace().real();
  }
  if (rank <= 1 || traces.norm() == 0.0) return canonical.matrix();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(traces);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd coeffs = q.rightCols(rank - 1);
  std::vector<ComplexMatrix> directions;
  for (Eigen::Index m = 0; m < rank - 1; ++m) {
    directions.push_back(real_to_hermitian(basis * coeffs.col(m), s));
  }
  const auto p = static_cast<Eigen::Index>(directions.size());

  ComplexMatrix sigma = hermitize(w.adjoint() * canonical.matrix() * w);
  for (int iter = 0; iter < 200; ++iter) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sigma);
    const Eigen::VectorXd lambda = es.eigenvalues();
    const ComplexMatrix& v = es.eigenvectors();
    const ComplexMatrix log_sigma =
        v * lambda.array().log().matrix().cast<Complex>().asDiagonal() * v.adjoint();

    // First divided differences of log.
    Eigen::MatrixXd divided(s, s);
    for (Eigen::Index a = 0; a < s; ++a) {
      for (Eigen::Index b = 0; b < s; ++b) {
        const double la = lambda(a);
        const double lb = lambda(b);
        divided(a, b) = std::abs(la - lb) > 1e-12 * std::max(la, lb)
                            ? (std::log(la) - std::log(lb)) / (la - lb)
                            : 1.0 / la;
      }
    }
    Eigen::VectorXd grad(p);
    std::vector<ComplexMatrix> rotated(static_cast<std::size_t>(p));
    for (Eigen::Index m = 0; m < p; ++m) {
      grad(m) = -(directions[m] * log_sigma).trace().real();
      rotated[m] = v.adjoint() * directions[m] * v;
    }
    Eigen::MatrixXd neg_hessian(p, p);
    for (Eigen::Index m = 0; m < p; ++m) {
      for (Eigen::Index n = m; n < p; ++n) {
        double acc = 0.0;
        for (Eigen::Index a = 0; a < s; ++a) {
          for (Eigen::Index b = 0; b < s; ++b) {
            acc += (std::conj(rotated[m](a, b)) * rotated[n](a, b)).real() * divided(a, b);
          }
        }
        neg_hessian(m, n) = neg_hessian(n, m) = acc;
      }
    }
    const Eigen::VectorXd step = neg_hessian.ldlt().solve(grad);
    const double decrement = grad.dot(step);
    if (!(decrement > 1e-20)) break;

    const double s0 = entropy_nats(lambda);
    double alpha = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
      ComplexMatrix trial = sigma;
      for (Eigen::Index m = 0; m < p; ++m) trial += alpha * step(m) * directions[m];
      trial = hermitize(trial);
      Eigen::VectorXd tl = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(
                               trial, Eigen::EigenvaluesOnly)
                               .eigenvalues();
      if (tl.minCoeff() <= 0.0) continue;
      if (entropy_nats(tl) >= s0 + 0.25 * alpha * decrement ||
          (alpha * decrement < 1e-16 && entropy_nats(tl) >= s0)) {
        sigma = trial;
        moved = true;
        break;
      }
    }
    if (!moved || decrement < 1e-18) break;
  }
  return w * sigma * w.adjoint();
}

}  // namespace

ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvec(const ComplexVector& v, std::size_t dim) {
  if (static_cast<std::size_t>(v.size()) != dim * dim) {
    throw ValidationError("unvec: vector length does not match dimension");
  }
  const auto d = static_cast<Eigen::Index>(dim);
  return Eigen::Map<const ComplexMatrix>(v.data(), d, d);
}

Superoperator::Superoperator(std::size_t dim, ComplexMatrix matrix)
    : dim_(dim), matrix_(std::move(matrix)) {
  if (static_cast<std::size_t>(matrix_.rows()) != dim * dim ||
      matrix_.rows() != matrix_.cols()) {
    throw ValidationError("superoperator matrix must be d^2 x d^2");
  }
}

Superoperator Superoperator::identity(std::size_t dim) {
  return Superoperator(dim, ComplexMatrix::Identity(dim * dim, dim * dim));
}

Superoperator Superoperator::from_kraus(std::span<const ComplexMatrix> kraus) {
  if (kraus.empty()) throw ValidationError("from_kraus: no Kraus operators");
  const auto d = static_cast<std::size_t>(kraus[0].rows());
  ComplexMatrix m = ComplexMatrix::Zero(d * d, d * d);
  for (const ComplexMatrix& k : kraus) {
    // vec(K X K†) = (conj(K) ⊗ K) vec(X) for column stacking.
    m += qmat::kron(k.conjugate(), k);
  }
  return Superoperator(d, std::move(m));
}

ComplexMatrix Superoperator::apply(const ComplexMatrix& sigma) const {
  return unvec(matrix_ * vec(sigma), dim_);
}

ComplexMatrix Superoperator::choi() const {
  const auto d = static_cast<Eigen::Index>(dim_);
  ComplexMatrix c(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      c.block(i * d, j * d, d, d) = unvec(matrix_.col(j * d + i), dim_);
    }
  }
  return c;
}

double Superoperator::trace_preservation_defect() const {
  const auto d = static_cast<Eigen::Index>(dim_);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      Complex tr = unvec(matrix_.col(j * d + i), dim_).trace();
      worst = std::max(worst, std::abs(tr - (i == j ? Complex(1.0) : Complex(0.0))));
    }
  }
  return worst;
}

Superoperator induced_superoperator(const ComplexMatrix& u,
                                    const DensityMatrix& rho_cr,
                                    const DimList& cr_dims,
                                    const DimList& ctc_dims) {
  const std::size_t dcr = cr_dims.total();
  const std::size_t dctc = ctc_dims.total();
  if (rho_cr.dim() != dcr) {
    throw ValidationError("induced_superoperator: CR state has dimension " +
                          std::to_string(rho_cr.dim()) + ", expected " +
                          std::to_string(dcr));
  }
  check_unitary(u, dcr * dctc);
  const auto ncr = static_cast<Eigen::Index>(dcr);
  const auto nctc = static_cast<Eigen::Index>(dctc);
  const auto total = ncr * nctc;

  // blocks[i] = U (I_CR ⊗ |i>) : total × dcr; weighted[i] = blocks[i] ρ.
  std::vector<ComplexMatrix> blocks(dctc);
  std::vector<ComplexMatrix> weighted(dctc);
  for (Eigen::Index i = 0; i < nctc; ++i) {
    ComplexMatrix b(total, ncr);
    for (Eigen::Index c = 0; c < ncr; ++c) b.col(c) = u.col(c * nctc + i);
    weighted[i] = b * rho_cr.matrix();
    blocks[i] = std::move(b);
  }

  ComplexMatrix m(nctc * nctc, nctc * nctc);
  const auto columns = static_cast<std::ptrdiff_t>(nctc * nctc);
#pragma omp parallel for schedule(static) if (columns * total * ncr > 8192)
  for (std::ptrdiff_t col = 0; col < columns; ++col) {
    const Eigen::Index j = col / nctc;
    const Eigen::Index i = col % nctc;
    // Tr_CR(blocks[i] ρ blocks[j]†)
    ComplexMatrix prod = weighted[i] * blocks[j].adjoint();
    for (Eigen::Index b = 0; b < nctc; ++b) {
      for (Eigen::Index a = 0; a < nctc; ++a) {
        Complex acc = 0.0;
        for (Eigen::Index c = 0; c < ncr; ++c) acc += prod(c * nctc + a, c * nctc + b);
        m(b * nctc + a, col) = acc;
      }
    }
  }
  return Superoperator(dctc, std::move(m));
}

Superoperator induced_superoperator_reference(const ComplexMatrix& u,
                                              const DensityMatrix& rho_cr,
                                              const DimList& cr_dims,
                                              const DimList& ctc_dims) {
  const std::size_t dcr = cr_dims.total();
  const std::size_t dctc = ctc_dims.total();
  if (rho_cr.dim() != dcr) {
    throw ValidationError("induced_superoperator_reference: CR dimension mismatch");
  }
  check_unitary(u, dcr * dctc);
  const DimList split{dcr, dctc};
  const std::size_t keep_ctc[] = {1};
  const auto d = static_cast<Eigen::Index>(dctc);
  ComplexMatrix m(d * d, d * d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      ComplexMatrix unit = ComplexMatrix::Zero(d, d);
      unit(i, j) = 1.0;
      ComplexMatrix full = u * qmat::kron(rho_cr.matrix(), unit) * u.adjoint();
      m.col(j * d + i) = vec(qmat::partial_trace_reference(full, split, keep_ctc));
    }
  }
  return Superoperator(dctc, std::move(m));
}

std::string_view to_string(Selection s) {
  return s == Selection::canonical ? "canonical" : "max_entropy";
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::cesaro: return "cesaro";
    case Method::bruteforce: return "bruteforce";
  }
  return "unknown";
}

Selection parse_selection(std::string_view text) {
  if (text == "canonical") return Selection::canonical;
  if (text == "max-entropy" || text == "max_entropy") return Selection::max_entropy;
  throw ValidationError("unknown selection \"" + std::string(text) +
                        "\" (expected canonical or max-entropy)");
}

double fixed_point_residual(const Superoperator& s, const ComplexMatrix& sigma) {
  return qmat::trace_distance(s.apply(sigma), sigma);
}

std::size_t fixed_space_dimension(const Superoperator& s, double window) {
  const auto n = s.matrix().rows();
  Eigen::BDCSVD<ComplexMatrix> svd(s.matrix() - ComplexMatrix::Identity(n, n));
  const Eigen::VectorXd& sv = svd.singularValues();
  return static_cast<std::size_t>((sv.array() <= window).count());
}

ComplexMatrix fixed_space_projection(const Superoperator& s, double window) {
  NullSpaces ns = eigenvalue_one_spaces(s, window);
  if (ns.right.cols() == 0) {
    throw SolverError("no eigenvalue within " + fmt(window) +
                          " of 1 (smallest singular value of M - I is " +
                          fmt(ns.smallest_singular_value) + ")",
                      ns.smallest_singular_value);
  }
  return projection_from(ns);
}

FixedPointResult fixed_point_exact(const Superoperator& s, Selection selection,
                                   const Tolerances& tol) {
  tol.check();
  NullSpaces ns = eigenvalue_one_spaces(s, tol.eigenvalue_one_window);
  if (ns.right.cols() == 0) {
    throw SolverError("fixed_point_exact: no eigenvalue within " +
                          fmt(tol.eigenvalue_one_window) + " of 1",
                      ns.smallest_singular_value);
  }
  const ComplexMatrix projection = projection_from(ns);
  const std::size_t d = s.dim();
  const ComplexMatrix mixed = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
  DensityMatrix canonical = repair_density(unvec(projection * vec(mixed), d),
                                           tol.psd_floor, "fixed_point_exact");

  std::optional<DensityMatrix> chosen;
  if (selection == Selection::max_entropy && ns.right.cols() > 1) {
    chosen = repair_density(max_entropy_point(ns.right, canonical), tol.psd_floor,
                            "fixed_point_exact");
  } else {
    chosen = canonical;
  }
  const double residual = fixed_point_residual(s, chosen->matrix());
  if (residual > tol.fixed_point_residual) {
    throw SolverError("fixed_point_exact: residual " + fmt(residual) +
                          " exceeds tolerance " + fmt(tol.fixed_point_residual),
                      residual);
  }
  return FixedPointResult{*chosen, residual,
                          static_cast<std::size_t>(ns.right.cols()), Method::exact,
                          selection, 0};
}

FixedPointResult fixed_point_cesaro(const Superoperator& s,
                                    const std::optional<DensityMatrix>& init,
                                    std::uint64_t max_iter, double tol,
                                    const Tolerances& tolerances) {
  const std::size_t d = s.dim();
  const DensityMatrix start = init ? *init : DensityMatrix::maximally_mixed(d);
  if (start.dim() != d) {
    throw ValidationError("fixed_point_cesaro: initial state has wrong dimension");
  }
  const auto n = s.matrix().rows();
  const ComplexVector x0 = vec(start.matrix());
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);

  ComplexMatrix head = id;           // (1/N) Σ_{n<N} M^n
  ComplexMatrix power = s.matrix();  // M^N
  std::optional<ComplexMatrix> previous;
  double residual = std::numeric_limits<double>::infinity();
  for (std::uint64_t window = 1; window <= max_iter; window *= 2) {
    const ComplexMatrix mean = hermitize(unvec(power * (head * x0), d));
    residual = fixed_point_residual(s, mean);
    const double drift = previous ? qmat::trace_distance(mean, *previous)
                                  : std::numeric_limits<double>::infinity();
    if (residual <= tol && drift <= tol) {
      DensityMatrix sigma = repair_density(mean, tolerances.psd_floor, "fixed_point_cesaro");
      return FixedPointResult{sigma, fixed_point_residual(s, sigma.matrix()),
                              fixed_space_dimension(s, tolerances.eigenvalue_one_window),
                              Method::cesaro, Selection::canonical, window};
    }
    previous = mean;
    head = 0.5 * head * (id + power);
    power = power * power;
    if (window > max_iter / 2) break;
  }
  throw SolverError("fixed_point_cesaro: no convergence within " +
                        std::to_string(max_iter) + " iterations (last residual " +
                        fmt(residual) + ")",
                    residual);
}

ComplexMatrix cr_output(const ComplexMatrix& u, const DensityMatrix& rho_cr,
                        const DensityMatrix& sigma) {
  const std::size_t dcr = rho_cr.dim();
  const std::size_t dctc = sigma.dim();
  if (static_cast<std::size_t>(u.rows()) != dcr * dctc) {
    throw ValidationError("cr_output: unitary dimension mismatch");
  }
  ComplexMatrix full = u * qmat::kron(rho_cr.matrix(), sigma.matrix()) * u.adjoint();
  return hermitize(qmat::partial_trace(full, DimList{dcr, dctc}, {0}));
}

Evolution ctc_evolve(const circuit::Circuit& c, const DensityMatrix& rho_cr,
                     Selection selection, const Tolerances& tol) {
  return ctc_evolve(c, circuit::compile_unitary(c), rho_cr, selection, tol);
}

Evolution ctc_evolve(const circuit::Circuit& c, const ComplexMatrix& u,
                     const DensityMatrix& rho_cr, Selection selection,
                     const Tolerances& tol) {
  if (rho_cr.dim() != c.cr_dim()) {
    throw ValidationError("ctc_evolve: CR state has dimension " +
                          std::to_string(rho_cr.dim()) + ", circuit CR register has " +
                          std::to_string(c.cr_dim()));
  }
  Superoperator s = induced_superoperator(u, rho_cr, c.cr_dims(), c.ctc_dims());
  FixedPointResult fp = fixed_point_exact(s, selection, tol);
  DensityMatrix out(cr_output(u, rho_cr, fp.sigma), tol);
  return Evolution{std::move(out), std::move(fp)};
}

}  // namespace ctcsim::ctc
