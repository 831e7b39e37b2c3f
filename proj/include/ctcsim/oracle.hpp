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

// Independent brute-force verification of CTC fixed points, and the seeded
// random generators used by tests and experiments.
//
// Randomness: std::mt19937_64 seeded directly with the 64-bit seed; standard
// normals by the Box-Muller transform on 53-bit uniforms (two engine draws
// per normal). Every result is bit-reproducible per seed. Per-trial seeds
// come from splitmix64(master + trial index).
//
// This module shares nothing with ctc's superoperator or spectral code: it
// iterates the CTC map in Kraus form.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ctcsim/circuit.hpp"
#include "ctcsim/qmat.hpp"

namespace ctcsim::oracle {

using qmat::ComplexMatrix;
using qmat::ComplexVector;
using qmat::DensityMatrix;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform();
  double normal();
  /// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
  qmat::Complex complex_normal();

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// GG†/tr(GG†) with G a d×d complex Gaussian matrix.
DensityMatrix random_density(std::size_t d, std::uint64_t seed);
ComplexVector random_pure_state(std::size_t d, std::uint64_t seed);
/// Haar-random unitary (QR of a Gaussian matrix with the phase fix on R's
/// diagonal).
ComplexMatrix random_unitary(std::size_t d, std::uint64_t seed);

/// Kraus operators of σ ↦ Tr_CR(U (ρ_CR ⊗ σ) U†):
/// K_{c,m} = √λ_m (⟨c| ⊗ I) U (|m⟩ ⊗ I) over ρ_CR = Σ λ_m |m⟩⟨m|.
std::vector<ComplexMatrix> induced_kraus(const ComplexMatrix& u,
                                         const DensityMatrix& rho_cr,
                                         std::size_t ctc_dim);

ComplexMatrix apply_kraus(std::span<const ComplexMatrix> kraus, const ComplexMatrix& sigma);

struct OracleReport {
  std::size_t trials = 0;
  std::size_t converged = 0;
  /// Converged limits deduplicated at trace distance 1e−6, in trial order.
  std::vector<DensityMatrix> distinct_limits;
  /// Independently recomputed residual of each distinct limit.
  std::vector<double> limit_residuals;
  /// Largest trace distance between any two converged limits.
  double max_pairwise_distance = 0.0;
};

inline constexpr std::size_t kDefaultTrials = 32;
inline constexpr std::uint64_t kDefaultIterations = 100000;
inline constexpr double kLimitResidual = 1e-7;
inline constexpr double kWindowStability = 1e-10;
inline constexpr double kDedupDistance = 1e-6;

/// From `trials` random starts, iterates the map and averages each window
/// of iterates [N, 2N) for N = 1, 2, 4, … up to `iters` total steps; a start
/// converges once a window average has residual ≤ 1e−7 and lies within
/// 1e−10 of the previous window average. Trials run in
/// parallel; the report does not depend on scheduling.
OracleReport fixed_point_bruteforce(const circuit::Circuit& c,
                                    const DensityMatrix& rho_cr,
                                    std::size_t trials = kDefaultTrials,
                                    std::uint64_t iters = kDefaultIterations,
                                    std::uint64_t seed = 0);

}  // namespace ctcsim::oracle
