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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ctcsim/cli.hpp"

namespace ctcsim::cli {
namespace {

namespace fs = std::filesystem;

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
  mutable Json doc;
  Json& json() const {
    if (doc.is_null()) doc = Json::parse(out);
    return doc;
  }
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "ctcsim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Invocation r;
  r.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const std::string& name) {
  const char* dir = std::getenv("CTCSIM_DATA");
  return (fs::path(dir != nullptr ? dir : CTCSIM_DEFAULT_DATA) / name).string();
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ctcsim_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

double entry_re(const Json& m, std::size_t i, std::size_t j) { return m[i][j][0].get<double>(); }

TEST(FixedPoint, EprBellInput) {
  const Invocation r = invoke({"fixed-point", data("epr.json"), "--input", "bell"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["schema"], "ctcsim.report/1");
  EXPECT_EQ(j["experiment"], "fixed-point");
  const Json& fp = j["results"]["fixed_point"];
  EXPECT_EQ(fp["fixed_space_dim"], 1);
  EXPECT_NEAR(entry_re(fp["sigma"], 0, 0), 0.5, 1e-12);
  EXPECT_NEAR(entry_re(fp["sigma"], 1, 1), 0.5, 1e-12);
  EXPECT_LE(fp["residual"].get<double>(), 1e-9);
  EXPECT_LE(fp["recomputed_residual"].get<double>(), 1e-9);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(entry_re(j["results"]["rho_cr_out"], i, i), 0.25, 1e-12);
  }
}

TEST(FixedPoint, IdentityReportsDegenerateSpace) {
  const Invocation r = invoke({"fixed-point", data("identity.json"), "--input", "zero"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json& fp = r.json()["results"]["fixed_point"];
  EXPECT_EQ(fp["fixed_space_dim"], 4);
  EXPECT_NEAR(entry_re(fp["sigma"], 0, 0), 0.5, 1e-12);
}

TEST(FixedPoint, Bhw2VerifiedByOracle) {
  const Invocation r = invoke({"fixed-point", data("bhw2.json"), "--input", "plus", "--verify"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json& v = r.json()["results"]["oracle"];
  EXPECT_EQ(v["agree"], true);
  EXPECT_EQ(v["distinct_limits"], 1);
}

TEST(FixedPoint, CesaroMatchesExact) {
  const Invocation exact = invoke({"fixed-point", data("bhw2.json"), "--input", "theta:0.3"});
  const Invocation ces =
      invoke({"fixed-point", data("bhw2.json"), "--input", "theta:0.3", "--method", "cesaro"});
  ASSERT_EQ(exact.code, kExitOk) << exact.err;
  ASSERT_EQ(ces.code, kExitOk) << ces.err;
  const Json& a = exact.json()["results"]["fixed_point"]["sigma"];
  const Json& b = ces.json()["results"]["fixed_point"]["sigma"];
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(entry_re(a, i, k), entry_re(b, i, k), 1e-6);
  }
}

TEST(FixedPoint, CesaroCapIsSolverError) {
  const Invocation r = invoke({"fixed-point", data("bhw2.json"), "--input", "plus", "--method",
                        "cesaro", "--max-iter", "1"});
  EXPECT_EQ(r.code, kExitSolver);
  EXPECT_NE(r.err.find("solver error"), std::string::npos);
}

TEST(FixedPoint, ValidationFailures) {
  const fs::path bad = scratch("bad.json");
  std::ofstream(bad) << R"({"cr_dims": [2], "ctc_dims": [2], "gates": [{"name": "h", "wires": [5]}]})";
  EXPECT_EQ(invoke({"fixed-point", bad.string()}).code, kExitValidation);
  std::ofstream(bad) << "{not json";
  EXPECT_EQ(invoke({"fixed-point", bad.string()}).code, kExitValidation);
  EXPECT_EQ(invoke({"fixed-point", scratch("missing.json").string()}).code, kExitValidation);
  EXPECT_EQ(invoke({"fixed-point", data("epr.json"), "--input", "sideways"}).code,
            kExitValidation);
  EXPECT_EQ(invoke({"fixed-point", data("bhw2.json"), "--input", "bell"}).code, kExitValidation);
  EXPECT_EQ(invoke({"fixed-point", data("bhw2.json"), "--selection", "best"}).code,
            kExitValidation);
  EXPECT_EQ(invoke({"fixed-point", data("bhw2.json"), "--method", "guess"}).code,
            kExitValidation);
}

TEST(FixedPoint, InputFromFile) {
  const fs::path in = scratch("in.json");
  std::ofstream(in) << "[[0.5, 0.5], [0.5, 0.5]]";
  const Invocation r = invoke({"fixed-point", data("bhw2.json"), "--input", "file:" + in.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Invocation p = invoke({"fixed-point", data("bhw2.json"), "--input", "plus"});
  const Json& a = r.json()["results"]["rho_cr_out"];
  const Json& b = p.json()["results"]["rho_cr_out"];
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(entry_re(a, i, k), entry_re(b, i, k), 1e-12);
  }
}

TEST(Experiment, UnknownNameListsValidOnes) {
  const Invocation r = invoke({"experiment", "teleport"});
  EXPECT_EQ(r.code, kExitValidation);
  for (const auto& n : experiment_names()) EXPECT_NE(r.err.find(n), std::string::npos) << n;
}

TEST(Experiment, SweepOnlyForMixtures) {
  EXPECT_EQ(invoke({"experiment", "bhw2", "--sweep", "theta=0.1:0.2:0.1"}).code, kExitValidation);
  EXPECT_EQ(invoke({"experiment", "mixture", "--sweep", "phi=0.1:0.2:0.1"}).code,
            kExitValidation);
  EXPECT_EQ(invoke({"experiment", "mixture", "--probs", "0.5,0.6"}).code, kExitValidation);
}

TEST(Experiment, Epr) {
  const Invocation r = invoke({"experiment", "epr"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json& res = r.json()["results"];
  EXPECT_LE(res["sigma_distance_to_half_identity"].get<double>(), 1e-9);
  EXPECT_LE(res["output_distance_to_quarter_identity"].get<double>(), 1e-9);
  EXPECT_NEAR(res["mutual_info_in_bits"].get<double>(), 2.0, 1e-9);
  EXPECT_LE(res["mutual_info_out_bits"].get<double>(), 1e-9);
  EXPECT_EQ(res["entanglement_destroyed"], true);
}

TEST(Experiment, Bhw2AndBhw4) {
  const Invocation two = invoke({"experiment", "bhw2"});
  ASSERT_EQ(two.code, kExitOk) << two.err;
  EXPECT_EQ(two.json()["results"]["orthogonal"], true);
  EXPECT_NEAR(two.json()["results"]["helstrom_uniform"].get<double>(), 0.85355, 1e-5);
  const Invocation four = invoke({"experiment", "bhw4"});
  ASSERT_EQ(four.code, kExitOk) << four.err;
  EXPECT_EQ(four.json()["results"]["pairwise_orthogonal"], true);
}

TEST(Experiment, MixtureAndSuperpositionAreProducts) {
  for (const char* name : {"mixture", "superposition"}) {
    const Invocation r = invoke({"experiment", name, "--probs", "0.3,0.7", "--theta", "0.6"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const Json& oc = r.json()["results"]["outcome"];
    EXPECT_LE(oc["mutual_info_bits"].get<double>(), 1e-6) << name;
    EXPECT_EQ(oc["success"], false) << name;
  }
}

TEST(Experiment, SimEquivalence) {
  const Invocation r = invoke({"experiment", "sim-equivalence", "--seed", "7", "--trials", "50"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json& res = r.json()["results"];
  EXPECT_EQ(res["trials"].size(), 50u);
  EXPECT_LE(res["max_deviation"].get<double>(), 1e-8);
  EXPECT_EQ(res["equivalent"], true);
}

TEST(Experiment, IdenticalMixturesAndComputation) {
  const Invocation id = invoke({"experiment", "identical-mixtures"});
  ASSERT_EQ(id.code, kExitOk) << id.err;
  EXPECT_EQ(id.json()["results"]["canonical"]["indistinguishable"], true);
  const Invocation comp = invoke({"experiment", "computation"});
  ASSERT_EQ(comp.code, kExitOk) << comp.err;
  EXPECT_EQ(comp.json()["results"]["outcome"]["success"], false);
  EXPECT_EQ(comp.json()["results"]["each_input_correct"], true);
}

TEST(Experiment, SweepCsvRowsInOrder) {
  const fs::path csv = scratch("sweep.csv");
  const fs::path rep = scratch("sweep.json");
  const Invocation r = invoke({"experiment", "mixture", "--sweep", "theta=0.05:1.5:0.05", "--csv",
                        csv.string(), "--out", rep.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::istringstream lines(slurp(csv));
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "theta,mutual_info,product_distance,helstrom");
  std::vector<double> keys;
  while (std::getline(lines, line)) {
    keys.push_back(std::stod(line.substr(0, line.find(','))));
    const double mi = std::stod(line.substr(line.find(',') + 1));
    EXPECT_LE(mi, 1e-6) << line;
  }
  ASSERT_EQ(keys.size(), 30u);
  for (std::size_t k = 0; k < keys.size(); ++k) EXPECT_NEAR(keys[k], 0.05 * (k + 1), 1e-12);
  EXPECT_EQ(Json::parse(slurp(rep))["results"]["sweep"].size(), 30u);
}

TEST(Experiment, CsvWithoutSweepIsAnError) {
  EXPECT_EQ(invoke({"experiment", "epr", "--csv", scratch("none.csv").string()}).code,
            kExitValidation);
}

TEST(Determinism, RepeatedRunsAreByteIdentical) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"experiment", "sim-equivalence", "--seed", "11", "--trials", "10"},
           {"experiment", "mixture", "--sweep", "p0=0.1:0.9:0.1"},
           {"fixed-point", data("bhw2.json"), "--input", "plus", "--verify", "--seed", "3"}}) {
    const Invocation a = invoke(args);
    const Invocation b = invoke(args);
    ASSERT_EQ(a.code, kExitOk) << a.err;
    EXPECT_EQ(a.out, b.out) << args[1];
  }
}

TEST(Seed, EnvironmentSuppliesDefault) {
  ASSERT_EQ(setenv("CTC_SIM_SEED", "1234", 1), 0);
  EXPECT_EQ(invoke({"experiment", "epr"}).json()["seed"], 1234);
  EXPECT_EQ(invoke({"experiment", "epr", "--seed", "5"}).json()["seed"], 5);
  ASSERT_EQ(setenv("CTC_SIM_SEED", "banana", 1), 0);
  EXPECT_EQ(invoke({"experiment", "epr"}).code, kExitValidation);
  ASSERT_EQ(unsetenv("CTC_SIM_SEED"), 0);
  EXPECT_EQ(invoke({"experiment", "epr"}).json()["seed"], 0);
}

TEST(Binary, ExitCodesAndStdout) {
  const char* env = std::getenv("CTCSIM_BIN");
  const std::string bin = env != nullptr ? env : CTCSIM_DEFAULT_BIN;
  const fs::path out = scratch("bin.json");
  const auto status = [&](const std::string& args) {
    const std::string cmd = bin + " " + args + " > " + out.string() + " 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status("fixed-point " + data("epr.json") + " --input bell"), kExitOk);
  EXPECT_EQ(Json::parse(slurp(out))["results"]["fixed_point"]["fixed_space_dim"], 1);
  EXPECT_EQ(status("experiment nope"), kExitValidation);
  EXPECT_EQ(status("fixed-point " + data("bhw2.json") + " --method cesaro --max-iter 1"),
            kExitSolver);
  EXPECT_EQ(status("--version"), kExitOk);
  EXPECT_EQ(status(""), kExitValidation);
}

}  // namespace
}  // namespace ctcsim::cli
