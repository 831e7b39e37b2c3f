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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ctcsim/circuit.hpp"
#include "ctcsim/ctc.hpp"
#include "ctcsim/errors.hpp"
#include "ctcsim/oracle.hpp"
#include "support.hpp"

namespace ctcsim::ctc {
namespace {

using circuit::Circuit;
using circuit::Gate;
using qmat::ComplexMatrix;
using testing::bell;
using testing::ket;
using testing::max_abs_diff;
using testing::plus;
using testing::proj;

// One-gate circuit: a Haar unitary over every wire.
Circuit random_ctc_circuit(std::uint64_t seed, const DimList& cr, const DimList& ctc) {
  std::vector<std::size_t> wires;
  for (std::size_t w = 0; w < cr.size() + ctc.size(); ++w) wires.push_back(w);
  const std::size_t d = cr.total() * ctc.total();
  return Circuit(cr, ctc, {{"u", wires, oracle::random_unitary(d, seed)}});
}

double kraus_residual(const Circuit& c, const DensityMatrix& rho, const DensityMatrix& sigma) {
  const auto kraus =
      oracle::induced_kraus(circuit::compile_unitary_reference(c), rho, c.ctc_dim());
  return qmat::trace_distance(oracle::apply_kraus(kraus, sigma.matrix()), sigma.matrix());
}

TEST(Vectorization, ColumnStacking) {
  ComplexMatrix m(2, 2);
  m << 1, 2, 3, 4;
  const ComplexVector v = vec(m);
  EXPECT_EQ(v(1), qmat::Complex(3));
  EXPECT_EQ(v(2), qmat::Complex(2));
  EXPECT_EQ(unvec(v, 2), m);
  EXPECT_THROW(unvec(v, 3), ValidationError);
}

TEST(Superoperator, IdentityCircuitGivesIdentityMap) {
  const Circuit c(DimList{2}, DimList{2}, {});
  const auto s = induced_superoperator(circuit::compile_unitary(c), DensityMatrix::basis(2, 0),
                                       c.cr_dims(), c.ctc_dims());
  EXPECT_LT(max_abs_diff(s.matrix(), Superoperator::identity(2).matrix()), 1e-15);
}

TEST(Superoperator, SwapIsConstantMap) {
  const Circuit c = circuit::parse_circuit(R"({"cr_dims": [2], "ctc_dims": [2],
      "gates": [{"name": "swap", "wires": [0, 1]}]})");
  const DensityMatrix rho = oracle::random_density(2, 11);
  const auto s = induced_superoperator(circuit::compile_unitary(c), rho, c.cr_dims(), c.ctc_dims());
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    EXPECT_LT(max_abs_diff(s.apply(oracle::random_density(2, seed).matrix()), rho.matrix()), 1e-14);
  }
}

TEST(Superoperator, EprCircuitMapsEverythingToHalfIdentity) {
  const Circuit c = circuit::build_epr_swap();
  const auto s = induced_superoperator(circuit::compile_unitary(c), DensityMatrix::pure(bell()),
                                       c.cr_dims(), c.ctc_dims());
  // Range check: every column is vec(tr(X) I/2) for the matrix unit X.
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      ComplexMatrix unit = ComplexMatrix::Zero(2, 2);
      unit(i, j) = 1.0;
      const ComplexMatrix expected =
          (i == j ? 0.5 : 0.0) * ComplexMatrix(ComplexMatrix::Identity(2, 2));
      EXPECT_LT(max_abs_diff(s.apply(unit), expected), 1e-15);
    }
  }
}

TEST(Superoperator, MatchesReferenceAndKrausForm) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Circuit c = random_ctc_circuit(seed, DimList{2, 3}, DimList{2});
    const auto u = circuit::compile_unitary(c);
    const DensityMatrix rho = oracle::random_density(6, 100 + seed);
    const auto fast = induced_superoperator(u, rho, c.cr_dims(), c.ctc_dims());
    const auto ref = induced_superoperator_reference(u, rho, c.cr_dims(), c.ctc_dims());
    EXPECT_LT(max_abs_diff(fast.matrix(), ref.matrix()), 1e-12);
    const auto kraus = oracle::induced_kraus(u, rho, 2);
    EXPECT_LT(max_abs_diff(fast.matrix(), Superoperator::from_kraus(kraus).matrix()), 1e-12);
  }
}

TEST(Superoperator, IsCompletelyPositiveAndTracePreserving) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Circuit c = random_ctc_circuit(seed, DimList{2}, DimList{3});
    const auto s = induced_superoperator(circuit::compile_unitary(c), oracle::random_density(2, seed),
                                         c.cr_dims(), c.ctc_dims());
    EXPECT_LT(s.trace_preservation_defect(), 1e-10);
    EXPECT_GT(qmat::hermitian_eigenvalues(s.choi()).minCoeff(), -1e-9);
  }
}

TEST(Superoperator, RejectsMismatchedInputs) {
  const auto u = oracle::random_unitary(4, 1);
  EXPECT_THROW(induced_superoperator(u, DensityMatrix::maximally_mixed(3), DimList{2}, DimList{2}),
               ValidationError);
  ComplexMatrix not_unitary = u;
  not_unitary(0, 0) += 1e-6;
  EXPECT_THROW(induced_superoperator(not_unitary, DensityMatrix::maximally_mixed(2), DimList{2},
                                     DimList{2}),
               ValidationError);
}

TEST(Exact, IdentityMapPicksMaximallyMixed) {
  const auto fp = fixed_point_exact(Superoperator::identity(3));
  EXPECT_LT(qmat::trace_distance(fp.sigma, DensityMatrix::maximally_mixed(3)), 1e-12);
  EXPECT_EQ(fp.fixed_space_dim, 9u);
  EXPECT_EQ(fp.method, Method::exact);
}

TEST(Exact, EprFixedPoint) {
  const auto ev = ctc_evolve(circuit::build_epr_swap(), DensityMatrix::pure(bell()));
  EXPECT_LT(qmat::trace_distance(ev.fixed_point.sigma, DensityMatrix::maximally_mixed(2)), 1e-12);
  EXPECT_LE(ev.fixed_point.residual, 1e-10);
  EXPECT_EQ(ev.fixed_point.fixed_space_dim, 1u);
}

TEST(Exact, Bhw2PlusInputFixedPoint) {
  const auto ev = ctc_evolve(circuit::build_bhw2(plus()), DensityMatrix::pure(plus()));
  EXPECT_LT(qmat::trace_distance(ev.fixed_point.sigma, DensityMatrix::basis(2, 1)), 1e-12);
}

TEST(Exact, PeripheralEigenvaluesAreAveragedOut) {
  // σ ↦ XσX has eigenvalue −1; its Cesàro limit of I/2 is I/2.
  const ComplexMatrix x = circuit::builtin_gate_matrix("x", std::vector<std::size_t>{2});
  const std::vector<ComplexMatrix> kraus{x};
  const auto s = Superoperator::from_kraus(kraus);
  const auto fp = fixed_point_exact(s);
  EXPECT_EQ(fp.fixed_space_dim, 2u);
  EXPECT_LT(qmat::trace_distance(fp.sigma, DensityMatrix::maximally_mixed(2)), 1e-12);
  const auto ces = fixed_point_cesaro(s, DensityMatrix::basis(2, 0));
  EXPECT_LT(qmat::trace_distance(ces.sigma, DensityMatrix::maximally_mixed(2)), 1e-9);
}

TEST(Exact, MaxEntropyDiffersFromCanonicalOnDegenerateChannel) {
  // Classical channel: 0 and 1 absorbing, 2 -> 0. Fixed states diag(a, 1-a, 0).
  ComplexMatrix k0 = ComplexMatrix::Zero(3, 3), k1 = k0, k2 = k0;
  k0(0, 0) = 1.0;
  k1(1, 1) = 1.0;
  k2(0, 2) = 1.0;
  const std::vector<ComplexMatrix> kraus{k0, k1, k2};
  const auto s = Superoperator::from_kraus(kraus);

  ComplexMatrix canonical = ComplexMatrix::Zero(3, 3);
  canonical(0, 0) = 2.0 / 3.0;
  canonical(1, 1) = 1.0 / 3.0;
  ComplexMatrix max_entropy = ComplexMatrix::Zero(3, 3);
  max_entropy(0, 0) = max_entropy(1, 1) = 0.5;

  const auto a = fixed_point_exact(s, Selection::canonical);
  const auto b = fixed_point_exact(s, Selection::max_entropy);
  EXPECT_EQ(a.fixed_space_dim, 2u);
  EXPECT_LT(max_abs_diff(a.sigma.matrix(), canonical), 1e-10);
  EXPECT_LT(max_abs_diff(b.sigma.matrix(), max_entropy), 1e-8);
  EXPECT_EQ(b.selection, Selection::max_entropy);
  EXPECT_LE(b.residual, 1e-9);
}

TEST(Exact, MaxEntropyOnIdentityMapIsMaximallyMixed) {
  const auto fp = fixed_point_exact(Superoperator::identity(2), Selection::max_entropy);
  EXPECT_LT(qmat::trace_distance(fp.sigma, DensityMatrix::maximally_mixed(2)), 1e-9);
}

TEST(Cesaro, ConstantMapConvergesImmediately) {
  const Circuit c = circuit::parse_circuit(R"({"cr_dims": [2], "ctc_dims": [2],
      "gates": [{"name": "swap", "wires": [0, 1]}]})");
  const DensityMatrix rho = oracle::random_density(2, 4);
  const auto s = induced_superoperator(circuit::compile_unitary(c), rho, c.cr_dims(), c.ctc_dims());
  const auto fp = fixed_point_cesaro(s);
  EXPECT_LE(fp.iterations, 2u);
  EXPECT_LT(qmat::trace_distance(fp.sigma, rho), 1e-12);
  EXPECT_EQ(fp.method, Method::cesaro);
}

TEST(Cesaro, EprConverges) {
  const Circuit c = circuit::build_epr_swap();
  const auto s = induced_superoperator(circuit::compile_unitary(c), DensityMatrix::pure(bell()),
                                       c.cr_dims(), c.ctc_dims());
  EXPECT_LT(qmat::trace_distance(fixed_point_cesaro(s).sigma, DensityMatrix::maximally_mixed(2)),
            1e-9);
}

TEST(Cesaro, ReportsResidualWhenCapped) {
  const Circuit c = circuit::build_bhw2(plus());
  const auto s = induced_superoperator(circuit::compile_unitary(c), DensityMatrix::pure(plus()),
                                       c.cr_dims(), c.ctc_dims());
  try {
    fixed_point_cesaro(s, std::nullopt, 1);
    FAIL() << "expected a convergence failure";
  } catch (const SolverError& e) {
    EXPECT_GT(e.residual(), 1e-9);
  }
}

TEST(Methods, AgreeOnRandomCircuitsWithUniqueFixedPoint) {
  int unique = 0;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const DimList cr = seed % 2 == 0 ? DimList{2} : DimList{2, 2};
    const Circuit c = random_ctc_circuit(oracle::derive_seed(7, seed), cr, DimList{2});
    const DensityMatrix rho = oracle::random_density(cr.total(), oracle::derive_seed(8, seed));
    const auto s = induced_superoperator(circuit::compile_unitary(c), rho, c.cr_dims(), c.ctc_dims());
    const auto exact = fixed_point_exact(s);
    if (exact.fixed_space_dim != 1) continue;
    ++unique;
    const auto ces = fixed_point_cesaro(s);
    EXPECT_LT(qmat::trace_distance(exact.sigma, ces.sigma), 1e-7) << "seed " << seed;
  }
  EXPECT_GE(unique, 100);
}

TEST(Certificate, RecomputedResidualMatches) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Circuit c = random_ctc_circuit(seed, DimList{2}, DimList{2});
    const DensityMatrix rho = oracle::random_density(2, 500 + seed);
    const auto ev = ctc_evolve(c, rho);
    const double again = kraus_residual(c, rho, ev.fixed_point.sigma);
    EXPECT_NEAR(again, ev.fixed_point.residual, 1e-12);
    EXPECT_LE(again, 1e-9);
  }
}

TEST(Evolve, OutputsAreDensityMatrices) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Circuit c = random_ctc_circuit(seed, DimList{3}, DimList{2});
    const auto ev = ctc_evolve(c, oracle::random_density(3, seed));
    EXPECT_NEAR(std::abs(ev.rho_cr_out.matrix().trace() - 1.0), 0.0, 1e-10);
    EXPECT_TRUE(qmat::validate(ev.rho_cr_out.matrix(), qmat::MatrixKind::density).ok());
  }
}

TEST(Evolve, EprDisentangles) {
  const auto ev = ctc_evolve(circuit::build_epr_swap(), DensityMatrix::pure(bell()));
  EXPECT_LT(qmat::trace_distance(ev.rho_cr_out, DensityMatrix::maximally_mixed(4)), 1e-12);
  EXPECT_NEAR(qmat::mutual_information(ev.rho_cr_out, DimList{2, 2}), 0.0, 1e-9);
}

TEST(Evolve, Bhw2PureInputs) {
  const Circuit c = circuit::build_bhw2(plus());
  EXPECT_LT(qmat::trace_distance(ctc_evolve(c, DensityMatrix::basis(2, 0)).rho_cr_out,
                                 DensityMatrix::basis(2, 0)), 1e-12);
  EXPECT_LT(qmat::trace_distance(ctc_evolve(c, DensityMatrix::pure(plus())).rho_cr_out,
                                 DensityMatrix::basis(2, 1)), 1e-12);
}

TEST(Evolve, LinearWhenGatesAvoidTheCtc) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Circuit c(DimList{2, 2}, DimList{2},
                    {{"u", {0, 1}, oracle::random_unitary(4, seed)},
                     {"h", {1}, circuit::builtin_gate_matrix("h", std::vector<std::size_t>{2})}});
    ASSERT_TRUE(c.cr_only());
    const DensityMatrix a = oracle::random_density(4, 100 + seed);
    const DensityMatrix b = oracle::random_density(4, 200 + seed);
    const double p = 0.3;
    const DensityMatrix mix(p * a.matrix() + (1 - p) * b.matrix());
    const ComplexMatrix lhs = ctc_evolve(c, mix).rho_cr_out.matrix();
    const ComplexMatrix rhs = p * ctc_evolve(c, a).rho_cr_out.matrix() +
                              (1 - p) * ctc_evolve(c, b).rho_cr_out.matrix();
    EXPECT_LT(qmat::trace_distance(lhs, rhs), 1e-10);
  }
}

TEST(Evolve, NonlinearThroughTheCtc) {
  const Circuit c = circuit::build_bhw2(plus());
  const DensityMatrix r0 = DensityMatrix::basis(2, 0);
  const DensityMatrix r1 = DensityMatrix::basis(2, 1);
  const DensityMatrix mix(0.5 * (r0.matrix() + r1.matrix()));
  const ComplexMatrix average =
      0.5 * (ctc_evolve(c, r0).rho_cr_out.matrix() + ctc_evolve(c, r1).rho_cr_out.matrix());
  EXPECT_GT(qmat::trace_distance(ctc_evolve(c, mix).rho_cr_out.matrix(), average), 0.01);
}

TEST(Evolve, DesignatedMixtureMarginalIsComponentAverage) {
  // The {|0>, |+>} mixture keeps a diagonal fixed point, so A alone looks
  // linear; the nonlinearity shows in the R-A correlations instead.
  const Circuit c = circuit::build_bhw2(plus());
  const DensityMatrix mix(0.5 * (proj(ket(2, 0)) + proj(plus())));
  const ComplexMatrix average = 0.5 * (proj(ket(2, 0)) + proj(ket(2, 1)));
  EXPECT_LT(qmat::trace_distance(ctc_evolve(c, mix).rho_cr_out.matrix(), average), 1e-12);
}

TEST(SelectionNames, ParseAndPrint) {
  EXPECT_EQ(parse_selection("max-entropy"), Selection::max_entropy);
  EXPECT_EQ(parse_selection("max_entropy"), Selection::max_entropy);
  EXPECT_EQ(parse_selection("canonical"), Selection::canonical);
  EXPECT_THROW(parse_selection("largest"), ValidationError);
  EXPECT_EQ(to_string(Method::bruteforce), "bruteforce");
}

}  // namespace
}  // namespace ctcsim::ctc
