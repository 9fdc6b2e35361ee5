// Copyright 2026 The povmsim Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "povmsim/cli.hpp"
#include "povmsim/errors.hpp"
#include "povmsim/io.hpp"
#include "povmsim/named.hpp"

using namespace povmsim;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "povmsim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("povmsim_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("numbers carry 12 significant digits") {
  CHECK(io::format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(io::format_number(-0.0) == "0");
  CHECK(io::round12(std::sqrt(2.0)) == 1.41421356237);
  CHECK(io::dump(io::Json(io::round12(2.0 / 3.0))) == "0.666666666667\n");
}

TEST_CASE("operators and POVMs round trip through JSON") {
  std::mt19937_64 rng(3);
  const Povm p = random_povm(3, 4, rng);
  const Povm back = io::povm_from_json(io::to_json(p));
  CHECK(back.max_abs_diff(p) < 1e-11);
  const auto h = io::operator_from_json(io::Json::parse(R"({"dim": 2, "bloch": {"a": 0.5, "v": [0, 0, 0.5]}})"));
  CHECK(h.max_abs_diff(named::pauli_z()[0]) < 1e-15);
  CHECK_THROWS_AS(io::operator_from_json(io::Json::parse(R"({"dim": 2, "re": [[1, 0]]})")), InvalidArgument);
  CHECK_THROWS_AS(io::operator_from_json(io::Json::parse(R"({"re": [[1]]})")), InvalidArgument);
  CHECK_THROWS_AS(io::povm_from_json(io::Json::parse(R"({"dim": 2, "effects": [{"dim": 2, "re": [[1, 0], [0, 0.5]]}]})")),
                  InvalidArgument);
}

TEST_CASE("certificates round trip through JSON") {
  const auto set = named::xyz_sigma_set();
  const double third = 1.0 / 3.0;
  std::vector<std::pair<std::vector<Povm>, SimulationCertificate>> cases;
  cases.emplace_back(set, jm_robustness(set).certificate);
  cases.emplace_back(std::vector<Povm>{named::tetrahedral()}, k_outcome_robustness(named::tetrahedral(), 2).certificate);
  cases.emplace_back(std::vector<Povm>{named::tetrahedral()},
                     projective_robustness_qubit(named::tetrahedral()).certificate);
  cases.emplace_back(set, fixed_assignment_robustness(
                              set, {3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {third, third, third}}}).certificate);
  for (const auto& [targets, cert] : cases) {
    const auto j = io::to_json(cert, 0.0);
    CHECK(j.contains("reconstruction_error"));
    CHECK(j.contains("weights"));
    const auto back = io::certificate_from_json(io::Json::parse(io::dump(j)));
    CHECK(back.kind == cert.kind);
    CHECK(oracle::verify_certificate(targets, back, 1e-7).passed);
    CHECK(io::dump(io::to_json(back)) == io::dump(io::to_json(cert)));
  }
  CHECK_THROWS_AS(io::certificate_from_json(io::Json::parse(R"({"kind": "mystery", "visibility": 1})")),
                  InvalidArgument);
}

TEST_CASE("targets load from names and files") {
  CHECK(io::load_targets("pauli-x+pauli-z+tetra").size() == 3);
  const auto file = scratch("set.json");
  io::Json arr = io::Json::array({io::to_json(named::pauli_x()), io::to_json(named::trine())});
  write(file, io::dump(arr));
  const auto loaded = io::load_targets(file.string());
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[1].max_abs_diff(named::trine()) < 1e-11);
  write(file, "{not json");
  CHECK_THROWS_AS(io::load_targets(file.string()), InvalidArgument);
}

TEST_CASE("jm prints t_star and writes a verifiable certificate") {
  const auto dir = scratch("jm");
  const auto r = invoke({"jm", "--set", "paper-set-A", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("t_star = 0.5730") != std::string::npos);
  const auto v = invoke({"verify", "--target", "paper-set-A", "--cert", (dir / "certificate.json").string(), "--states", "200"});
  CHECK(v.code == 0);
  CHECK(v.out.find("reconstruction: PASS") != std::string::npos);
}

TEST_CASE("JSON output is byte identical across runs") {
  const auto a = invoke({"jm", "--set", "pauli-x+pauli-z", "--json"});
  const auto b = invoke({"jm", "--set", "pauli-x+pauli-z", "--json"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto j = io::Json::parse(a.out);
  CHECK(std::abs(j["t_star"].get<double>() - 1.0 / std::sqrt(2.0)) < 1e-6);
  CHECK(j["verified"].get<bool>());
}

TEST_CASE("projective and k-outcome subcommands") {
  const auto z = invoke({"projective", "--povm", "pauli-z"});
  CHECK(z.code == 0);
  CHECK(z.out.find("t_star = 1\n") != std::string::npos);
  const auto k = invoke({"k-outcome", "--povm", "tetra", "--k", "3", "--json"});
  REQUIRE(k.code == 0);
  const auto j = io::Json::parse(k.out);
  CHECK(std::abs(j["t_star"].get<double>() - 0.9428) < 1e-4);
  CHECK(j["certificate"]["components"].size() == 4);
}

TEST_CASE("fixed-assignment from a file") {
  const auto file = scratch("assign.json");
  write(file, R"({"simulators": 3, "weights": [[1,0,0],[0,1,0],[0,0,1],[0.333333333333333333,0.333333333333333333,0.333333333333333333]]})");
  const auto r = invoke({"fixed-assignment", "--set", "paper-set-A", "--assign", file.string(), "--json"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(io::Json::parse(r.out)["t_star"].get<double>() - 0.7746) < 1e-3);
}

TEST_CASE("profile writes CSV and JSON") {
  const auto dir = scratch("profile");
  const auto r = invoke({"profile", "--set", "paper-set-A", "--size", "3", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("subset,t_star\n0;1;2,0.57735026", 0) == 0);
  CHECK(r.out.find("max,0.6235") != std::string::npos);
  CHECK(fs::exists(dir / "profile.csv"));
  CHECK(io::read_file((dir / "profile.json").string())["entries"].size() == 4);
}

TEST_CASE("reproduce-paper subset as JSON") {
  const auto r = invoke({"reproduce-paper", "--only", "tetra", "--json"});
  CHECK(r.code == 0);
  const auto j = io::Json::parse(r.out);
  REQUIRE(j["entries"].size() == 3);
  for (const auto& e : j["entries"]) {
    CHECK(e.contains("computed"));
    CHECK(e.contains("reference"));
    CHECK(e.contains("delta"));
    CHECK(e["passed"].get<bool>());
  }
  CHECK(invoke({"reproduce-paper", "--only", "nothing"}).code == 1);
}

TEST_CASE("exit codes") {
  CHECK(invoke({}).code == 1);
  CHECK(invoke({"jm"}).code == 1);
  CHECK(invoke({"jm", "--set", "bogus"}).code == 1);
  CHECK(invoke({"jm", "--set", "pauli-x"}).code == 1);
  CHECK(invoke({"k-outcome", "--povm", "tetra", "--k", "7"}).code == 1);
  CHECK(invoke({"fixed-assignment", "--set", "paper-set-A", "--assign", "/nonexistent.json"}).code == 1);
  const auto fail = invoke({"jm", "--set", "paper-set-A", "--max-iterations", "1"});
  CHECK(fail.code == 2);
  CHECK(!fail.err.empty());

  const auto dir = scratch("tamper");
  REQUIRE(invoke({"k-outcome", "--povm", "tetra", "--k", "2", "--out", dir.string()}).code == 0);
  auto cert = io::read_file((dir / "certificate.json").string());
  cert["visibility"] = 0.9;
  io::write_file((dir / "bad.json").string(), cert);
  const auto v = invoke({"verify", "--target", "tetra", "--cert", (dir / "bad.json").string()});
  CHECK(v.code == 3);
  CHECK(v.out.find("FAIL") != std::string::npos);
}
