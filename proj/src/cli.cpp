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

#include "ctcsim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ctcsim/errors.hpp"
#include "ctcsim/oracle.hpp"
#include "ctcsim/parallel.hpp"
#include "ctcsim/protocol.hpp"

namespace ctcsim::cli {

namespace {

using circuit::Circuit;
using ctc::FixedPointResult;
using protocol::DiscriminationOutcome;
using protocol::EnsembleEntry;
using protocol::LabeledEnsemble;
using qmat::Complex;
using qmat::ComplexMatrix;
using qmat::ComplexVector;
using qmat::DensityMatrix;
using qmat::DimList;

constexpr double kSuccessTol = 1e-9;
constexpr double kVerifyTol = 1e-6;
constexpr const char* kProductNote =
    "product structure is checked only on circuits constructed by this tool";

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json matrix_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexVector qubit(double theta) {
  ComplexVector v(2);
  v << std::cos(theta), std::sin(theta);
  return v;
}

ComplexVector ket(std::size_t dim, std::size_t index) {
  return ComplexVector::Unit(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(index));
}

ComplexVector plus_state(double sign) {
  ComplexVector v(2);
  v << 1.0, sign;
  return v / std::sqrt(2.0);
}

// Residual of σ under the Kraus form of the map, built from the
// reference-compiled unitary; shares nothing with the solver's superoperator.
double recomputed_residual(const Circuit& c, const DensityMatrix& rho,
                           const DensityMatrix& sigma) {
  const ComplexMatrix u = circuit::compile_unitary_reference(c);
  const auto kraus = oracle::induced_kraus(u, rho, c.ctc_dim());
  return qmat::trace_distance(oracle::apply_kraus(kraus, sigma.matrix()), sigma.matrix());
}

Json certificate(const Circuit& c, const DensityMatrix& rho, const FixedPointResult& fp) {
  Json j;
  j["sigma"] = matrix_json(fp.sigma.matrix());
  j["residual"] = fp.residual;
  j["recomputed_residual"] = recomputed_residual(c, rho, fp.sigma);
  j["fixed_space_dim"] = fp.fixed_space_dim;
  j["method"] = std::string(ctc::to_string(fp.method));
  j["selection"] = std::string(ctc::to_string(fp.selection));
  return j;
}

Json outcome_json(const DiscriminationOutcome& o, const Circuit& v, const LabeledEnsemble& e,
                  const DensityMatrix& input) {
  const Circuit full = protocol::with_reference(v, e.r_dim());
  Json j;
  j["rho_out"] = matrix_json(o.rho_out.matrix());
  j["target_distance"] = o.target_distance;
  j["success"] = o.success;
  j["mutual_info_bits"] = o.mutual_info_bits;
  j["product_distance"] = o.product_distance;
  j["decode_probability"] = o.decode_probability;
  j["fixed_point"] = certificate(full, input, o.fixed_point);
  Json pure = Json::array();
  for (std::size_t i = 0; i < o.per_pure_outputs.size(); ++i) {
    const auto& p = o.per_pure_outputs[i];
    Json pj;
    pj["label"] = p.label;
    pj["output"] = matrix_json(p.output.matrix());
    pj["target_distance"] = p.target_distance;
    pj["success"] = p.target_distance <= kSuccessTol;
    pj["fixed_point"] =
        certificate(v, DensityMatrix::pure(e.entries()[i].state), p.fixed_point);
    pure.push_back(std::move(pj));
  }
  j["per_pure_outputs"] = std::move(pure);
  return j;
}

Json envelope(std::string_view name, Json parameters, std::uint64_t seed) {
  Json j;
  j["schema"] = std::string(kReportSchema);
  j["experiment"] = std::string(name);
  j["parameters"] = std::move(parameters);
  j["results"] = Json::object();
  j["tool_version"] = std::string(kToolVersion);
  j["seed"] = seed;
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string s(text);
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(x)) {
    throw ValidationError(std::string(what) + ": '" + s + "' is not a finite number");
  }
  return x;
}

std::size_t parse_index(std::string_view text, std::string_view what) {
  const std::string s(text);
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw ValidationError(std::string(what) + ": '" + s + "' is not a non-negative integer");
  }
  return std::stoull(s);
}

Complex complex_from(const nlohmann::json& pair, const std::string& where) {
  if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
    throw ValidationError(where + ": expected [re, im]");
  }
  return {pair[0].get<double>(), pair[1].get<double>()};
}

DensityMatrix input_from_file(const std::string& path, std::size_t dim) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("input file '" + path + "': " + e.what());
  }
  if (!doc.is_array() || doc.size() != dim) {
    throw ValidationError("input file '" + path + "': expected " + std::to_string(dim) +
                          " entries for the CR register");
  }
  const bool is_vector = doc[0].is_array() && !doc[0].empty() && doc[0][0].is_number();
  if (is_vector) {
    ComplexVector v(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
      v(static_cast<Eigen::Index>(i)) = complex_from(doc[i], "input[" + std::to_string(i) + "]");
    }
    if (std::abs(v.norm() - 1.0) > 1e-10) {
      throw ValidationError("input file '" + path + "': state vector not normalized");
    }
    return DensityMatrix::pure(v);
  }
  ComplexMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    if (!doc[i].is_array() || doc[i].size() != dim) {
      throw ValidationError("input[" + std::to_string(i) + "]: expected " +
                            std::to_string(dim) + " entries");
    }
    for (std::size_t k = 0; k < dim; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          complex_from(doc[i][k], "input[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
  }
  return DensityMatrix(m);
}

// A first-wire state padded with |0…0⟩ on the remaining CR wires.
DensityMatrix on_first_wire(const ComplexVector& q, const Circuit& c) {
  const std::size_t d0 = c.cr_dims()[0];
  ComplexVector first = ComplexVector::Zero(static_cast<Eigen::Index>(d0));
  first.head(q.size()) = q;
  const std::size_t rest = c.cr_dim() / d0;
  return DensityMatrix::pure(qmat::kron(first, ket(rest, 0)));
}

struct Range {
  std::string key;
  std::vector<double> values;
};

Range parse_sweep(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ValidationError("--sweep: expected key=start:stop:step");
  Range r{text.substr(0, eq), {}};
  if (r.key != "theta" && r.key != "p0") {
    throw ValidationError("--sweep: unknown parameter '" + r.key + "' (expected theta or p0)");
  }
  std::vector<double> parts;
  std::stringstream ss(text.substr(eq + 1));
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(parse_double(item, "--sweep"));
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    throw ValidationError("--sweep: expected start:stop:step with step > 0 and stop >= start");
  }
  const auto count = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1;
  if (count > 100000) throw ValidationError("--sweep: too many points");
  for (std::size_t k = 0; k < count; ++k) {
    r.values.push_back(parts[0] + static_cast<double>(k) * parts[2]);
  }
  return r;
}

double theta_or_default(const ExperimentOptions& o) {
  return o.theta.value_or(std::numbers::pi / 4);
}

std::pair<double, double> two_probs(const ExperimentOptions& o) {
  if (o.probs.empty()) return {0.5, 0.5};
  if (o.probs.size() != 2) {
    throw ValidationError("--probs: this experiment takes two probabilities");
  }
  return {o.probs[0], o.probs[1]};
}

LabeledEnsemble two_state(double theta, double p0, double p1) {
  return LabeledEnsemble({{0, p0, ket(2, 0)}, {1, p1, qubit(theta)}});
}

// ---- experiments ----

Report experiment_epr(const ExperimentOptions& o) {
  const Circuit c = circuit::build_epr_swap();
  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const DensityMatrix rho = DensityMatrix::pure(bell);
  const auto ev = ctc::ctc_evolve(c, rho, o.selection);
  const DimList ab{2, 2};
  const std::size_t trials = o.trials.value_or(oracle::kDefaultTrials);
  const auto oracle_report =
      oracle::fixed_point_bruteforce(c, rho, trials, oracle::kDefaultIterations, o.seed);

  Json params;
  params["input"] = "bell";
  params["selection"] = std::string(ctc::to_string(o.selection));
  params["trials"] = trials;
  Report r;
  r.json = envelope("epr", params, o.seed);
  Json& res = r.json["results"];
  res["fixed_point"] = certificate(c, rho, ev.fixed_point);
  res["sigma_distance_to_half_identity"] =
      qmat::trace_distance(ev.fixed_point.sigma, DensityMatrix::maximally_mixed(2));
  res["rho_out"] = matrix_json(ev.rho_cr_out.matrix());
  res["output_distance_to_quarter_identity"] =
      qmat::trace_distance(ev.rho_cr_out, DensityMatrix::maximally_mixed(4));
  res["mutual_info_in_bits"] = qmat::mutual_information(rho, ab);
  res["mutual_info_out_bits"] = qmat::mutual_information(ev.rho_cr_out, ab);
  res["entanglement_destroyed"] = res["mutual_info_out_bits"].get<double>() <= kSuccessTol;
  res["oracle"] = {{"trials", oracle_report.trials},
                   {"converged", oracle_report.converged},
                   {"distinct_limits", oracle_report.distinct_limits.size()},
                   {"max_pairwise_distance", oracle_report.max_pairwise_distance}};
  return r;
}

Report experiment_bhw2(const ExperimentOptions& o) {
  const double theta = theta_or_default(o);
  const ComplexVector psi = qubit(theta);
  const Circuit c = circuit::build_bhw2(psi);
  const DensityMatrix in0 = DensityMatrix::basis(2, 0);
  const DensityMatrix in1 = DensityMatrix::pure(psi);
  const auto ev0 = ctc::ctc_evolve(c, in0, o.selection);
  const auto ev1 = ctc::ctc_evolve(c, in1, o.selection);

  Json params;
  params["theta"] = theta;
  params["selection"] = std::string(ctc::to_string(o.selection));
  Report r;
  r.json = envelope("bhw2", params, o.seed);
  Json& res = r.json["results"];
  auto run = [&](const DensityMatrix& in, const ctc::Evolution& ev, std::size_t expect) {
    Json j;
    j["fixed_point"] = certificate(c, in, ev.fixed_point);
    j["sigma_distance_to_expected"] =
        qmat::trace_distance(ev.fixed_point.sigma, DensityMatrix::basis(2, expect));
    j["rho_out"] = matrix_json(ev.rho_cr_out.matrix());
    j["output_distance_to_expected"] =
        qmat::trace_distance(ev.rho_cr_out, DensityMatrix::basis(2, expect));
    return j;
  };
  res["input_zero"] = run(in0, ev0, 0);
  res["input_psi"] = run(in1, ev1, 1);
  res["output_trace_distance"] = qmat::trace_distance(ev0.rho_cr_out, ev1.rho_cr_out);
  res["orthogonal"] = std::abs(res["output_trace_distance"].get<double>() - 1.0) <= kSuccessTol;
  res["helstrom_uniform"] = protocol::helstrom_bound(two_state(theta, 0.5, 0.5));
  return r;
}

std::vector<ComplexVector> four_states() {
  return {ket(2, 0), ket(2, 1), plus_state(1.0), plus_state(-1.0)};
}

Report experiment_bhw4(const ExperimentOptions& o) {
  const auto states = four_states();
  const Circuit c = circuit::build_bhw_multi(states);
  std::vector<std::optional<ctc::Evolution>> evs(states.size());
  std::vector<DensityMatrix> inputs;
  for (const auto& s : states) inputs.push_back(DensityMatrix::pure(circuit::pad_with_ancillas(c, s)));
  parallel_for(states.size(), [&](std::size_t i) { evs[i] = ctc::ctc_evolve(c, inputs[i], o.selection); });

  Json params;
  params["states"] = {"0", "1", "+", "-"};
  params["selection"] = std::string(ctc::to_string(o.selection));
  Report r;
  r.json = envelope("bhw4", params, o.seed);
  Json& res = r.json["results"];
  Json runs = Json::array();
  for (std::size_t i = 0; i < states.size(); ++i) {
    runs.push_back({{"input", params["states"][i]},
                    {"fixed_point", certificate(c, inputs[i], evs[i]->fixed_point)},
                    {"rho_out", matrix_json(evs[i]->rho_cr_out.matrix())}});
  }
  res["runs"] = std::move(runs);
  Json pairwise = Json::array();
  double min_d = 1.0, max_d = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < states.size(); ++k) {
      const double d = qmat::trace_distance(evs[i]->rho_cr_out, evs[k]->rho_cr_out);
      row.push_back(d);
      if (i != k) {
        min_d = std::min(min_d, d);
        max_d = std::max(max_d, d);
      }
    }
    pairwise.push_back(std::move(row));
  }
  res["pairwise_trace_distance"] = std::move(pairwise);
  res["min_pairwise_distance"] = min_d;
  res["pairwise_orthogonal"] = 1.0 - min_d <= kSuccessTol && max_d - 1.0 <= kSuccessTol;
  return r;
}

Json mixture_row(double theta, double p0, ctc::Selection sel, bool superposition) {
  const LabeledEnsemble e = two_state(theta, p0, 1.0 - p0);
  const Circuit c = circuit::build_bhw2(qubit(theta));
  const auto out = superposition ? protocol::run_superposition(c, e, sel)
                                 : protocol::run_discrimination(c, e, sel);
  const DensityMatrix input =
      superposition ? DensityMatrix::pure(e.superposition()) : e.rho_ra();
  Json j;
  j["theta"] = theta;
  j["p0"] = p0;
  j["helstrom"] = protocol::helstrom_bound(e);
  j["outcome"] = outcome_json(out, c, e, input);
  return j;
}

Report experiment_mixture(const ExperimentOptions& o, bool superposition) {
  const double theta = theta_or_default(o);
  const auto [p0, p1] = two_probs(o);
  const std::string name = superposition ? "superposition" : "mixture";
  if (std::abs(p0 + p1 - 1.0) > 1e-12) throw ValidationError("--probs: must sum to 1");

  Json params;
  params["theta"] = theta;
  params["probs"] = {p0, p1};
  params["selection"] = std::string(ctc::to_string(o.selection));
  if (o.sweep) params["sweep"] = *o.sweep;
  Report r;
  r.json = envelope(name, params, o.seed);
  Json& res = r.json["results"];
  res["notes"] = {kProductNote};

  if (!o.sweep) {
    Json row = mixture_row(theta, p0, o.selection, superposition);
    res["helstrom"] = row["helstrom"];
    res["outcome"] = std::move(row["outcome"]);
    return r;
  }
  const Range range = parse_sweep(*o.sweep);
  std::vector<Json> rows(range.values.size());
  parallel_for(rows.size(), [&](std::size_t k) {
    const double x = range.values[k];
    rows[k] = range.key == "theta" ? mixture_row(x, p0, o.selection, superposition)
                                   : mixture_row(theta, x, o.selection, superposition);
  });
  std::ostringstream csv;
  csv << range.key << ",mutual_info,product_distance,helstrom\n";
  Json sweep = Json::array();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Json& oc = rows[k]["outcome"];
    csv << num(range.values[k]) << ',' << num(oc["mutual_info_bits"].get<double>()) << ','
        << num(oc["product_distance"].get<double>()) << ','
        << num(rows[k]["helstrom"].get<double>()) << '\n';
    sweep.push_back(std::move(rows[k]));
  }
  res["sweep"] = std::move(sweep);
  r.csv = csv.str();
  return r;
}

Report experiment_sim_equivalence(const ExperimentOptions& o) {
  const std::size_t trials = o.trials.value_or(50);
  if (trials == 0) throw ValidationError("--trials: must be at least 1");
  struct Trial {
    std::uint64_t seed;
    double deviation;
    Json ctc_fp;
    Json sim_fp;
  };
  std::vector<std::optional<Trial>> out(trials);
  parallel_for(trials, [&](std::size_t i) {
    const std::uint64_t s = oracle::derive_seed(o.seed, i);
    const ComplexMatrix u = oracle::random_unitary(4, oracle::derive_seed(s, 0));
    const Circuit c(DimList{2}, DimList{2}, {{"v", {0, 1}, u}}, {"A", "CTC"});
    oracle::Rng rng(oracle::derive_seed(s, 1));
    const double p0 = 0.1 + 0.8 * rng.uniform();
    const LabeledEnsemble e({{0, p0, oracle::random_pure_state(2, oracle::derive_seed(s, 2))},
                             {1, 1.0 - p0, oracle::random_pure_state(2, oracle::derive_seed(s, 3))}});
    const auto with_ctc = protocol::run_discrimination(c, e, o.selection);
    const auto without = protocol::simulate_without_ctc(c, e, o.selection);
    const Circuit full = protocol::with_reference(c, e.r_dim());
    const DensityMatrix rho = e.rho_ra();
    out[i] = Trial{s, qmat::trace_distance(with_ctc.rho_out, without.rho_out),
                   certificate(full, rho, with_ctc.fixed_point),
                   certificate(full, rho, without.fixed_point)};
  });

  Json params;
  params["trials"] = trials;
  params["selection"] = std::string(ctc::to_string(o.selection));
  Report r;
  r.json = envelope("sim-equivalence", params, o.seed);
  Json& res = r.json["results"];
  Json rows = Json::array();
  double max_dev = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    max_dev = std::max(max_dev, out[i]->deviation);
    rows.push_back({{"trial", i},
                    {"seed", out[i]->seed},
                    {"deviation", out[i]->deviation},
                    {"ctc_fixed_point", std::move(out[i]->ctc_fp)},
                    {"simulated_fixed_point", std::move(out[i]->sim_fp)}});
  }
  res["trials"] = std::move(rows);
  res["max_deviation"] = max_dev;
  res["equivalent"] = max_dev <= 1e-8;
  return r;
}

LabeledEnsemble padded_uniform(const Circuit& c, const ComplexVector& a, const ComplexVector& b) {
  return LabeledEnsemble({{0, 0.5, circuit::pad_with_ancillas(c, a)},
                          {1, 0.5, circuit::pad_with_ancillas(c, b)}});
}

Report experiment_identical(const ExperimentOptions& o) {
  const auto states = four_states();
  const Circuit c = circuit::build_bhw_multi(states);
  const LabeledEnsemble z = padded_uniform(c, states[0], states[1]);
  const LabeledEnsemble x = padded_uniform(c, states[2], states[3]);

  Json params;
  params["ensembles"] = {"uniform {0,1}", "uniform {+,-}"};
  params["selections"] = {"canonical", "max-entropy"};
  Report r;
  r.json = envelope("identical-mixtures", params, o.seed);
  Json& res = r.json["results"];
  res["notes"] = {kProductNote,
                  "equality is asserted under canonical selection only; max-entropy results "
                  "are recorded without comparison"};
  for (ctc::Selection sel : {ctc::Selection::canonical, ctc::Selection::max_entropy}) {
    const auto oz = protocol::run_discrimination(c, z, sel);
    const auto ox = protocol::run_discrimination(c, x, sel);
    Json j;
    j["computational"] = outcome_json(oz, c, z, z.rho_ra());
    j["hadamard"] = outcome_json(ox, c, x, x.rho_ra());
    j["trace_distance"] = qmat::trace_distance(oz.rho_out, ox.rho_out);
    if (sel == ctc::Selection::canonical) {
      j["indistinguishable"] = j["trace_distance"].get<double>() <= kSuccessTol;
    }
    res[std::string(ctc::to_string(sel))] = std::move(j);
  }
  return r;
}

Report experiment_computation(const ExperimentOptions& o) {
  constexpr std::size_t kDomain = 4;
  std::vector<ComplexVector> inputs;
  std::vector<std::size_t> table;
  for (std::size_t x = 0; x < kDomain; ++x) {
    inputs.push_back(ket(kDomain, x));
    table.push_back(x);
  }
  protocol::ComputationTask task{kDomain, table, circuit::build_bhw_multi(inputs)};
  const auto out = protocol::run_computation_mixture(task, o.selection);
  std::vector<EnsembleEntry> entries;
  for (std::size_t x = 0; x < kDomain; ++x) entries.push_back({x, 0.25, inputs[x]});
  const LabeledEnsemble e(std::move(entries));

  Json params;
  params["domain_size"] = kDomain;
  params["function"] = "identity";
  params["selection"] = std::string(ctc::to_string(o.selection));
  Report r;
  r.json = envelope("computation", params, o.seed);
  Json& res = r.json["results"];
  res["notes"] = {kProductNote};
  res["outcome"] = outcome_json(out, task.circuit, e, e.rho_ra());
  bool all = true;
  for (const auto& p : out.per_pure_outputs) all = all && p.target_distance <= kSuccessTol;
  res["each_input_correct"] = all;
  return r;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  f << text;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{
      "epr",           "bhw2",           "bhw4",
      "mixture",       "superposition",  "sim-equivalence",
      "identical-mixtures", "computation"};
  return names;
}

std::uint64_t default_seed() {
  const char* env = std::getenv(std::string(kSeedEnv).c_str());
  if (env == nullptr || *env == '\0') return 0;
  try {
    return parse_index(env, kSeedEnv);
  } catch (const std::out_of_range&) {
    throw ValidationError(std::string(kSeedEnv) + ": out of range");
  }
}

DensityMatrix parse_input_spec(std::string_view spec, const Circuit& c) {
  const std::size_t dim = c.cr_dim();
  const auto colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? "" : spec.substr(colon + 1);
  if (spec == "zero") return DensityMatrix::basis(dim, 0);
  if (spec == "one") return on_first_wire(ket(2, 1), c);
  if (spec == "plus") return on_first_wire(plus_state(1.0), c);
  if (spec == "minus") return on_first_wire(plus_state(-1.0), c);
  if (spec == "mixed") return DensityMatrix::maximally_mixed(dim);
  if (spec == "bell") {
    if (dim != 4) {
      throw ValidationError("input 'bell' needs a 4-dimensional CR register, circuit has " +
                            std::to_string(dim));
    }
    ComplexVector b = ComplexVector::Zero(4);
    b(0) = b(3) = 1.0 / std::sqrt(2.0);
    return DensityMatrix::pure(b);
  }
  if (head == "basis" && colon != std::string_view::npos) {
    const std::size_t k = parse_index(arg, "input basis index");
    if (k >= dim) {
      throw ValidationError("input basis index " + std::to_string(k) + " outside CR dimension " +
                            std::to_string(dim));
    }
    return DensityMatrix::basis(dim, k);
  }
  if (head == "theta" && colon != std::string_view::npos) {
    return on_first_wire(qubit(parse_double(arg, "input theta")), c);
  }
  if (head == "file" && colon != std::string_view::npos) {
    return input_from_file(std::string(arg), dim);
  }
  throw ValidationError("unknown input spec '" + std::string(spec) +
                        "' (expected zero, one, plus, minus, bell, mixed, basis:k, theta:x or "
                        "file:path)");
}

Report run_fixed_point(const FixedPointOptions& opts) {
  Circuit c = [&] {
    try {
      return circuit::parse_circuit(read_file(opts.circuit_path));
    } catch (const ValidationError& e) {
      throw ValidationError(opts.circuit_path + ": " + e.what());
    }
  }();
  const DensityMatrix rho = parse_input_spec(opts.input, c);
  const ComplexMatrix u = circuit::compile_unitary(c);
  std::optional<ctc::Evolution> solved;
  if (opts.method == ctc::Method::cesaro) {
    auto fp = ctc::fixed_point_cesaro(
        ctc::induced_superoperator(u, rho, c.cr_dims(), c.ctc_dims()), std::nullopt,
        opts.max_iter);
    DensityMatrix out(ctc::cr_output(u, rho, fp.sigma));
    solved.emplace(ctc::Evolution{std::move(out), std::move(fp)});
  } else {
    solved = ctc::ctc_evolve(c, u, rho, opts.selection);
  }
  const ctc::Evolution& ev = *solved;

  Json params;
  params["circuit"] = opts.circuit_path;
  params["input"] = opts.input;
  params["selection"] = std::string(ctc::to_string(ev.fixed_point.selection));
  params["method"] = std::string(ctc::to_string(opts.method));
  params["verify"] = opts.verify;
  Report r;
  r.json = envelope("fixed-point", params, opts.seed);
  Json& res = r.json["results"];
  res["fixed_point"] = certificate(c, rho, ev.fixed_point);
  res["rho_cr_out"] = matrix_json(ev.rho_cr_out.matrix());
  if (opts.verify) {
    const auto rep = oracle::fixed_point_bruteforce(c, rho, opts.trials,
                                                    oracle::kDefaultIterations, opts.seed);
    double nearest = rep.distinct_limits.empty() ? 1.0 : 2.0;
    for (const auto& lim : rep.distinct_limits) {
      nearest = std::min(nearest, qmat::trace_distance(lim, ev.fixed_point.sigma));
    }
    const bool unique = ev.fixed_point.fixed_space_dim == 1;
    const bool agree = rep.distinct_limits.size() == 1 && nearest <= kVerifyTol;
    Json v;
    v["trials"] = rep.trials;
    v["converged"] = rep.converged;
    v["distinct_limits"] = rep.distinct_limits.size();
    v["limit_residuals"] = rep.limit_residuals;
    v["max_pairwise_distance"] = rep.max_pairwise_distance;
    v["distance_to_exact"] = nearest;
    v["agree"] = unique ? Json(agree) : Json(nullptr);
    res["oracle"] = std::move(v);
    if (unique && !agree) {
      r.exit_code = kExitSolver;
      r.failure = "exact and brute-force fixed points disagree (distance " + num(nearest) + ")";
    }
  }
  return r;
}

Report run_experiment(const ExperimentOptions& opts) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), opts.name) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw ValidationError("unknown experiment '" + opts.name + "'; valid names: " + list);
  }
  if (opts.sweep && opts.name != "mixture" && opts.name != "superposition") {
    throw ValidationError("--sweep applies to the mixture and superposition experiments only");
  }
  if (opts.name == "epr") return experiment_epr(opts);
  if (opts.name == "bhw2") return experiment_bhw2(opts);
  if (opts.name == "bhw4") return experiment_bhw4(opts);
  if (opts.name == "mixture") return experiment_mixture(opts, false);
  if (opts.name == "superposition") return experiment_mixture(opts, true);
  if (opts.name == "sim-equivalence") return experiment_sim_equivalence(opts);
  if (opts.name == "identical-mixtures") return experiment_identical(opts);
  return experiment_computation(opts);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deutsch closed-timelike-curve circuit simulator", "ctcsim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  FixedPointOptions fp;
  std::string fp_selection = "canonical";
  std::optional<std::uint64_t> fp_seed;
  std::string out_path, csv_path;
  auto* fixed = app.add_subcommand("fixed-point", "Solve the CTC fixed point of a circuit file");
  fixed->add_option("circuit", fp.circuit_path, "Circuit JSON file")->required();
  fixed->add_option("--input", fp.input, "CR input state spec");
  fixed->add_option("--selection", fp_selection, "canonical or max-entropy");
  std::string fp_method = "exact";
  fixed->add_option("--method", fp_method, "exact or cesaro")
      ->check(CLI::IsMember({"exact", "cesaro"}));
  fixed->add_option("--max-iter", fp.max_iter, "Cesaro window cap");
  fixed->add_flag("--verify", fp.verify, "Cross-check with the brute-force oracle");
  fixed->add_option("--trials", fp.trials, "Oracle random starts");
  fixed->add_option("--seed", fp_seed, "Master seed (default: $CTC_SIM_SEED or 0)");
  fixed->add_option("--out", out_path, "Report path (default: stdout)");

  ExperimentOptions ex;
  std::string ex_selection = "canonical";
  std::optional<std::uint64_t> ex_seed;
  std::optional<double> theta;
  std::optional<std::size_t> trials;
  std::optional<std::string> sweep;
  auto* experiment = app.add_subcommand("experiment", "Run a named experiment");
  experiment->add_option("name", ex.name, "Experiment name")->required();
  experiment->add_option("--theta", theta, "State angle: cos(t)|0> + sin(t)|1>");
  experiment->add_option("--probs", ex.probs, "Ensemble probabilities")->delimiter(',');
  experiment->add_option("--selection", ex_selection, "canonical or max-entropy");
  experiment->add_option("--seed", ex_seed, "Master seed (default: $CTC_SIM_SEED or 0)");
  experiment->add_option("--trials", trials, "Random trials");
  experiment->add_option("--sweep", sweep, "key=start:stop:step");
  experiment->add_option("--out", out_path, "Report path (default: stdout)");
  experiment->add_option("--csv", csv_path, "CSV path for sweep rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    Report r;
    if (fixed->parsed()) {
      fp.selection = ctc::parse_selection(fp_selection);
      fp.method = fp_method == "cesaro" ? ctc::Method::cesaro : ctc::Method::exact;
      fp.seed = fp_seed ? *fp_seed : default_seed();
      r = run_fixed_point(fp);
    } else {
      ex.selection = ctc::parse_selection(ex_selection);
      ex.seed = ex_seed ? *ex_seed : default_seed();
      ex.theta = theta;
      ex.trials = trials;
      ex.sweep = sweep;
      r = run_experiment(ex);
    }
    const std::string text = r.json.dump(2) + "\n";
    if (out_path.empty()) {
      out << text;
    } else {
      write_text(out_path, text);
    }
    if (!csv_path.empty()) {
      if (r.csv.empty()) throw ValidationError("--csv: this run produced no sweep rows");
      write_text(csv_path, r.csv);
    }
    if (r.exit_code != kExitOk) err << "error: " << r.failure << '\n';
    return r.exit_code;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }
}

}  // namespace ctcsim::cli
