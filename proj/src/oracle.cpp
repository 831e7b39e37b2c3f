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

#include "ctcsim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "ctcsim/errors.hpp"

namespace ctcsim::oracle {

namespace {

using qmat::Complex;

ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix g(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.complex_normal();
  }
  return g;
}

struct TrialResult {
  std::optional<ComplexMatrix> limit;
};

}  // namespace

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  double u1 = uniform();
  const double u2 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) / std::numbers::sqrt2;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + index);
}

DensityMatrix random_density(std::size_t d, std::uint64_t seed) {
  if (d == 0) throw ValidationError("random_density: dimension 0");
  Rng rng(seed);
  ComplexMatrix g = gaussian_matrix(d, d, rng);
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(0.5 * (m + m.adjoint()));
}

ComplexVector random_pure_state(std::size_t d, std::uint64_t seed) {
  if (d == 0) throw ValidationError("random_pure_state: dimension 0");
  Rng rng(seed);
  ComplexVector v = gaussian_matrix(d, 1, rng).col(0);
  return v / v.norm();
}

ComplexMatrix random_unitary(std::size_t d, std::uint64_t seed) {
  if (d == 0) throw ValidationError("random_unitary: dimension 0");
  Rng rng(seed);
  ComplexMatrix g = gaussian_matrix(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    const Complex rii = r(i, i);
    const Complex phase = std::abs(rii) > 0 ? rii / std::abs(rii) : Complex(1.0);
    q.col(i) *= phase;
  }
  return q;
}

std::vector<ComplexMatrix> induced_kraus(const ComplexMatrix& u,
                                         const DensityMatrix& rho_cr,
                                         std::size_t ctc_dim) {
  const std::size_t dcr = rho_cr.dim();
  if (static_cast<std::size_t>(u.rows()) != dcr * ctc_dim || u.rows() != u.cols()) {
    throw ValidationError("induced_kraus: unitary dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(rho_cr.matrix());
  const auto nctc = static_cast<Eigen::Index>(ctc_dim);
  std::vector<ComplexMatrix> kraus;
  for (Eigen::Index m = 0; m < eig.eigenvalues().size(); ++m) {
    const double lambda = eig.eigenvalues()(m);
    if (lambda <= 1e-15) continue;
    const ComplexVector vm = eig.eigenvectors().col(m);
    for (std::size_t c = 0; c < dcr; ++c) {
      ComplexMatrix k = ComplexMatrix::Zero(nctc, nctc);
      for (Eigen::Index a = 0; a < nctc; ++a) {
        for (Eigen::Index b = 0; b < nctc; ++b) {
          Complex acc = 0.0;
          for (Eigen::Index r = 0; r < vm.size(); ++r) {
            acc += u(static_cast<Eigen::Index>(c) * nctc + a, r * nctc + b) * vm(r);
          }
          k(a, b) = std::sqrt(lambda) * acc;
        }
      }
      kraus.push_back(std::move(k));
    }
  }
  return kraus;
}

ComplexMatrix apply_kraus(std::span<const ComplexMatrix> kraus, const ComplexMatrix& sigma) {
  ComplexMatrix out = ComplexMatrix::Zero(sigma.rows(), sigma.cols());
  for (const ComplexMatrix& k : kraus) out += k * sigma * k.adjoint();
  return out;
}

OracleReport fixed_point_bruteforce(const circuit::Circuit& c,
                                    const DensityMatrix& rho_cr,
                                    std::size_t trials, std::uint64_t iters,
                                    std::uint64_t seed) {
  if (trials == 0) throw ValidationError("fixed_point_bruteforce: trials must be >= 1");
  if (rho_cr.dim() != c.cr_dim()) {
    throw ValidationError("fixed_point_bruteforce: CR state dimension mismatch");
  }
  const std::size_t d = c.ctc_dim();
  const std::vector<ComplexMatrix> kraus =
      induced_kraus(circuit::compile_unitary_reference(c), rho_cr, d);
  auto residual_of = [&](const ComplexMatrix& sigma) {
    return qmat::trace_distance(apply_kraus(kraus, sigma), sigma);
  };

  std::vector<TrialResult> results(trials);
  const auto ntrials = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < ntrials; ++t) {
    ComplexMatrix x = random_density(d, derive_seed(seed, static_cast<std::uint64_t>(t))).matrix();
    std::uint64_t step = 0;
    std::optional<ComplexMatrix> previous;
    // Advance to the start of window [N, 2N), then average over it.
    for (std::uint64_t window = 1; 2 * window <= std::max<std::uint64_t>(iters, 2);
         window *= 2) {
      while (step < window) {
        x = apply_kraus(kraus, x);
        ++step;
      }
      ComplexMatrix sum = ComplexMatrix::Zero(x.rows(), x.cols());
      for (std::uint64_t k = 0; k < window; ++k) {
        sum += x;
        x = apply_kraus(kraus, x);
        ++step;
      }
      ComplexMatrix mean = sum / static_cast<double>(window);
      mean = 0.5 * (mean + mean.adjoint());
      mean /= mean.trace().real();
      const bool settled =
          previous && qmat::trace_distance(*previous, mean) <= kWindowStability;
      if (settled && residual_of(mean) <= kLimitResidual) {
        results[static_cast<std::size_t>(t)].limit = std::move(mean);
        break;
      }
      previous = std::move(mean);
    }
  }

  OracleReport report;
  report.trials = trials;
  std::vector<const ComplexMatrix*> limits;
  for (const TrialResult& r : results) {
    if (!r.limit) continue;
    ++report.converged;
    limits.push_back(&*r.limit);
    bool seen = false;
    for (const DensityMatrix& known : report.distinct_limits) {
      if (qmat::trace_distance(known.matrix(), *r.limit) <= kDedupDistance) {
        seen = true;
        break;
      }
    }
    if (!seen) {
      qmat::Tolerances loose;
      loose.psd_floor = 1e-7;
      loose.hermiticity = 1e-9;
      report.distinct_limits.emplace_back(*r.limit, loose);
      report.limit_residuals.push_back(residual_of(*r.limit));
    }
  }
  for (std::size_t i = 0; i < limits.size(); ++i) {
    for (std::size_t j = i + 1; j < limits.size(); ++j) {
      report.max_pairwise_distance =
          std::max(report.max_pairwise_distance, qmat::trace_distance(*limits[i], *limits[j]));
    }
  }
  return report;
}

}  // namespace ctcsim::oracle
