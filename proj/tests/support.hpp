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

#ifndef CTCSIM_TESTS_SUPPORT_HPP
#define CTCSIM_TESTS_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <cstddef>

#include "ctcsim/qmat.hpp"

namespace ctcsim::testing {

using qmat::Complex;
using qmat::ComplexMatrix;
using qmat::ComplexVector;
using qmat::DensityMatrix;

inline ComplexVector ket(std::size_t dim, std::size_t i) {
  return ComplexVector::Unit(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(i));
}

inline ComplexVector qubit(double theta, double phase = 0.0) {
  ComplexVector v(2);
  v << std::cos(theta), std::polar(std::sin(theta), phase);
  return v;
}

inline ComplexVector plus() { return qubit(M_PI / 4); }

inline ComplexVector minus() {
  ComplexVector v(2);
  v << 1.0, -1.0;
  return v / std::sqrt(2.0);
}

inline ComplexVector bell() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

inline ComplexMatrix proj(const ComplexVector& v) { return v * v.adjoint(); }

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace ctcsim::testing

#endif  // CTCSIM_TESTS_SUPPORT_HPP
