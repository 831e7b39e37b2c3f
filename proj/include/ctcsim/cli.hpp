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

#ifndef CTCSIM_CLI_HPP
#define CTCSIM_CLI_HPP

// Command-line front end: circuit files, named experiments, JSON reports and
// CSV sweep data. Reports carry no timestamps, so identical command lines
// and seeds give byte-identical output.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ctcsim/circuit.hpp"
#include "ctcsim/ctc.hpp"
#include "ctcsim/qmat.hpp"

namespace ctcsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitSolver = 3;

inline constexpr std::string_view kReportSchema = "ctcsim.report/1";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kSeedEnv = "CTC_SIM_SEED";

using Json = nlohmann::ordered_json;

/// epr, bhw2, bhw4, mixture, superposition, sim-equivalence,
/// identical-mixtures, computation.
const std::vector<std::string>& experiment_names();

/// zero, one, plus, minus, bell, mixed, basis:k, theta:θ, file:path.
/// Single-qubit specs act on the first CR wire with the rest in |0…0⟩;
/// bell needs a four-dimensional register. A file holds either a state
/// vector [[re,im],…] or a density matrix [[[re,im],…],…].
qmat::DensityMatrix parse_input_spec(std::string_view spec, const circuit::Circuit& c);

/// Seed from CTC_SIM_SEED, or 0 when unset.
std::uint64_t default_seed();

struct FixedPointOptions {
  std::string circuit_path;
  std::string input = "zero";
  ctc::Selection selection = ctc::Selection::canonical;
  /// exact or cesaro; cesaro always uses the canonical selection.
  ctc::Method method = ctc::Method::exact;
  std::uint64_t max_iter = std::uint64_t{1} << 40;
  bool verify = false;
  std::uint64_t seed = 0;
  std::size_t trials = 32;
};

struct ExperimentOptions {
  std::string name;
  std::optional<double> theta;
  std::vector<double> probs;
  ctc::Selection selection = ctc::Selection::canonical;
  std::uint64_t seed = 0;
  std::optional<std::size_t> trials;
  /// "theta=a:b:s" or "p0=a:b:s" (mixture only).
  std::optional<std::string> sweep;
};

struct Report {
  Json json;
  /// Plot-ready rows for sweeps; empty otherwise.
  std::string csv;
  /// Nonzero when the run completed but a check failed (kExitSolver).
  int exit_code = kExitOk;
  std::string failure;
};

Report run_fixed_point(const FixedPointOptions& opts);
Report run_experiment(const ExperimentOptions& opts);

/// Parses argv, runs the command, writes the report and returns the exit
/// code (0 ok, 2 validation, 3 solver).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ctcsim::cli

#endif  // CTCSIM_CLI_HPP
