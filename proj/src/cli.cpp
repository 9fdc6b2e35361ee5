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

#include <filesystem>
#include <fstream>
#include <set>

#include <CLI11.hpp>

#include "povmsim/cli.hpp"
#include "povmsim/errors.hpp"
#include "povmsim/io.hpp"
#include "povmsim/named.hpp"
#include "povmsim/oracle.hpp"
#include "povmsim/reference_manifest.hpp"
#include "povmsim/simulability.hpp"

namespace povmsim::cli {

namespace {

using io::Json;

constexpr int kExitMalformed = 1;
constexpr int kExitSolver = 2;
constexpr int kExitVerification = 3;

struct VerificationFailed : Error {
  using Error::Error;
};

struct Common {
  std::string set;
  std::string povm;
  int k = 2;
  int size = 2;
  std::string assign;
  double tol = 1e-7;
  std::uint64_t seed = 1;
  bool json = false;
  std::string out_dir;
  bool bisection = false;
  int max_iterations = 200;
  std::string target;
  std::string cert;
  int states = 1000;
  std::vector<std::string> only;
};

double measure(const std::string& id) {
  static const auto set_a = named::xyz_sigma_set();
  if (id == "t_1povm") return jm_robustness(set_a).t_star;
  if (id == "t_tc") return subset_compat_profile(set_a, 3).min;
  if (id == "t_ti") return subset_compat_profile(set_a, 3).max;
  if (id == "t_pc") return subset_compat_profile(set_a, 2).min;
  if (id == "t_pi") return subset_compat_profile(set_a, 2).max;
  if (id == "t_2povm") return fixed_assignment_robustness(set_a, {2, {{1, 0}, {1, 0}, {0, 1}, {0, 1}}}).t_star;
  if (id == "t_3povm") {
    const double third = 1.0 / 3.0;
    return fixed_assignment_robustness(set_a, {3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {third, third, third}}}).t_star;
  }
  if (id == "tetra_k3") return k_outcome_robustness(named::tetrahedral(), 3).t_star;
  if (id == "trine_k2") return k_outcome_robustness(named::trine(), 2).t_star;
  if (id == "tetra_k2") return k_outcome_robustness(named::tetrahedral(), 2).t_star;
  if (id == "tetra_projective") return projective_robustness_qubit(named::tetrahedral()).t_star;
  throw InvalidArgument("unknown reference entry '" + id + "'");
}

RobustnessOptions options_of(const Common& c) {
  RobustnessOptions o;
  o.bisection = c.bisection;
  o.settings.max_iterations = c.max_iterations;
  return o;
}

void write_artifact(const Common& c, const std::string& name, const std::string& text) {
  if (c.out_dir.empty()) return;
  std::filesystem::create_directories(c.out_dir);
  std::ofstream f(std::filesystem::path(c.out_dir) / name);
  if (!f) throw InvalidArgument("cannot write into '" + c.out_dir + "'");
  f << text;
}

Json diagnostics_json(const SolverDiagnostics& d) {
  Json j;
  j["status"] = sdp::to_string(d.status);
  j["iterations"] = d.iterations;
  j["bisection"] = d.bisection;
  return j;
}

// Verifies the certificate, prints the summary and writes artifacts.
int report_result(const Common& c, const std::string& command, const std::vector<Povm>& targets,
                  const RobustnessResult& r, std::ostream& out) {
  const auto check = oracle::verify_certificate(targets, r.certificate, c.tol);
  const Json cert = io::to_json(r.certificate, check.max_error);
  Json result;
  result["command"] = command;
  result["t_star"] = io::round12(r.t_star);
  result["verified"] = check.passed;
  result["diagnostics"] = diagnostics_json(r.diagnostics);
  write_artifact(c, "certificate.json", io::dump(cert));
  result["certificate"] = cert;
  write_artifact(c, "result.json", io::dump(result));
  if (c.json) {
    out << io::dump(result);
  } else {
    out << "t_star = " << io::format_number(r.t_star) << "\n";
    out << "certificate: " << to_string(r.certificate.kind);
    if (r.certificate.kind == CertificateKind::KOutcome) {
      out << ", " << r.certificate.components.size() << " components";
    } else if (r.certificate.kind == CertificateKind::ProjectiveDecomposition) {
      out << ", " << r.certificate.projective.size() << " projective components";
    }
    out << "\nreconstruction error = " << io::format_number(check.max_error) << "\n";
  }
  if (!check.passed) throw VerificationFailed("certificate failed verification: " + check.notes.front());
  return 0;
}

int cmd_profile(const Common& c, std::ostream& out) {
  const auto targets = io::load_targets(c.set);
  const auto profile = subset_compat_profile(targets, c.size, options_of(c));
  std::string csv = "subset,t_star\n";
  for (const auto& e : profile.entries) {
    std::string name;
    for (std::size_t q = 0; q < e.subset.size(); ++q) name += (q ? ";" : "") + std::to_string(e.subset[q]);
    csv += name + "," + io::format_number(e.t_star) + "\n";
  }
  csv += "min," + io::format_number(profile.min) + "\n";
  csv += "max," + io::format_number(profile.max) + "\n";
  const Json j = io::to_json(profile);
  write_artifact(c, "profile.csv", csv);
  write_artifact(c, "profile.json", io::dump(j));
  out << (c.json ? io::dump(j) : csv);
  return 0;
}

int cmd_verify(const Common& c, std::ostream& out) {
  const auto targets = io::load_targets(c.target);
  const auto cert = io::certificate_from_json(io::read_file(c.cert));
  const auto rec = oracle::verify_certificate(targets, cert, c.tol);
  const auto stats = oracle::statistics_check(targets, cert, c.states, 10.0 * c.tol, c.seed);
  Json j;
  j["reconstruction"] = io::to_json(rec);
  Json s = io::to_json(stats);
  s.erase("errors");
  s["states"] = c.states;
  s["seed"] = c.seed;
  j["statistics"] = s;
  j["passed"] = rec.passed && stats.passed;
  write_artifact(c, "verification.json", io::dump(j));
  if (c.json) {
    out << io::dump(j);
  } else {
    out << "reconstruction: " << (rec.passed ? "PASS" : "FAIL") << " (max error " << io::format_number(rec.max_error)
        << ", tol " << io::format_number(c.tol) << ")\n";
    out << "statistics: " << (stats.passed ? "PASS" : "FAIL") << " (max TVD " << io::format_number(stats.max_error)
        << " over " << c.states << " states)\n";
    for (const auto& n : rec.notes) out << "  " << n << "\n";
  }
  return rec.passed && stats.passed ? 0 : kExitVerification;
}

int cmd_reproduce(const Common& c, std::ostream& out) {
  const auto rows = reproduce_paper(c.only);
  if (rows.empty()) throw InvalidArgument("--only matched no entries");
  bool ok = true;
  Json table = Json::array();
  for (const auto& r : rows) {
    ok = ok && r.passed;
    Json j;
    j["id"] = r.id;
    j["group"] = r.group;
    j["label"] = r.label;
    j["computed"] = io::round12(r.computed);
    j["reference"] = io::round12(r.reference);
    j["delta"] = io::round12(r.computed - r.reference);
    j["tolerance"] = io::round12(r.tolerance);
    j["passed"] = r.passed;
    table.push_back(j);
  }
  Json doc;
  doc["entries"] = table;
  doc["passed"] = ok;
  write_artifact(c, "reproduce.json", io::dump(doc));
  if (c.json) {
    out << io::dump(doc);
  } else {
    char line[256];
    std::snprintf(line, sizeof(line), "%-18s %-12s %-14s %-10s %-10s %s\n", "id", "group", "computed", "reference",
                  "delta", "status");
    out << line;
    for (const auto& r : rows) {
      std::snprintf(line, sizeof(line), "%-18s %-12s %-14.10f %-10.6f %-10.2e %s\n", r.id.c_str(), r.group.c_str(),
                    r.computed, r.reference, r.computed - r.reference, r.passed ? "ok" : "MISS");
      out << line;
    }
  }
  return ok ? 0 : kExitVerification;
}

}  // namespace

std::vector<ReproduceRow> reproduce_paper(const std::vector<std::string>& only) {
  const Json manifest = Json::parse(generated::kReferenceManifest);
  const std::set<std::string> filter(only.begin(), only.end());
  std::vector<ReproduceRow> rows;
  for (const auto& e : manifest.at("entries")) {
    ReproduceRow r;
    r.id = e.at("id").get<std::string>();
    r.group = e.at("group").get<std::string>();
    if (!filter.empty() && !filter.count(r.id) && !filter.count(r.group)) continue;
    r.label = e.at("label").get<std::string>();
    r.reference = e.at("reference").get<double>();
    r.tolerance = e.at("tolerance").get<double>();
    r.computed = measure(r.id);
    r.passed = std::abs(r.computed - r.reference) <= r.tolerance;
    rows.push_back(r);
  }
  return rows;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"White-noise robustness of POVM simulability"};
  app.require_subcommand(1);
  Common c;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", c.tol, "Verification tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_flag("--json", c.json, "Print JSON instead of text");
    sub->add_option("--out", c.out_dir, "Directory for artifacts");
  };
  auto add_robust = [&](CLI::App* sub) {
    add_common(sub);
    sub->add_flag("--bisection", c.bisection, "Bisect over feasibility problems");
    sub->add_option("--max-iterations", c.max_iterations, "Interior-point iteration cap")->check(CLI::NonNegativeNumber);
  };

  auto* jm = app.add_subcommand("jm", "Joint-measurability robustness of a set");
  jm->add_option("--set", c.set, "Named set ('+'-joined names) or JSON file")->required();
  add_robust(jm);

  auto* profile = app.add_subcommand("profile", "Robustness of every subset of a given size");
  profile->add_option("--set", c.set, "Named set or JSON file")->required();
  profile->add_option("--size", c.size, "Subset size")->required();
  add_robust(profile);

  auto* kout = app.add_subcommand("k-outcome", "k-outcome simulability robustness of one POVM");
  kout->add_option("--povm", c.povm, "Named POVM or JSON file")->required();
  kout->add_option("--k", c.k, "Outcome count of the simulators")->required();
  add_robust(kout);

  auto* proj = app.add_subcommand("projective", "Projective simulability robustness of a qubit POVM");
  proj->add_option("--povm", c.povm, "Named POVM or JSON file")->required();
  add_robust(proj);

  auto* fixed = app.add_subcommand("fixed-assignment", "Robustness for a fixed pre-processing");
  fixed->add_option("--set", c.set, "Named set or JSON file")->required();
  fixed->add_option("--assign", c.assign, "Assignment JSON file")->required();
  add_robust(fixed);

  auto* verify = app.add_subcommand("verify", "Check a certificate against its targets");
  verify->add_option("--target", c.target, "Named set or JSON file")->required();
  verify->add_option("--cert", c.cert, "Certificate JSON file")->required();
  verify->add_option("--states", c.states, "Random states for the statistics check")->check(CLI::PositiveNumber);
  add_common(verify);

  auto* repro = app.add_subcommand("reproduce-paper", "Recompute the reference visibility table");
  repro->add_option("--only", c.only, "Restrict to entry ids or groups")->delimiter(',');
  add_common(repro);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitMalformed;
  }

  try {
    auto one = [](const std::vector<Povm>& v) {
      if (v.size() != 1) throw InvalidArgument("expected a single POVM, got " + std::to_string(v.size()));
      return v.front();
    };
    if (*jm) {
      const auto targets = io::load_targets(c.set);
      return report_result(c, "jm", targets, jm_robustness(targets, options_of(c)), out);
    }
    if (*profile) return cmd_profile(c, out);
    if (*kout) {
      const auto p = one(io::load_targets(c.povm));
      return report_result(c, "k-outcome", {p}, k_outcome_robustness(p, c.k, options_of(c)), out);
    }
    if (*proj) {
      const auto p = one(io::load_targets(c.povm));
      return report_result(c, "projective", {p}, projective_robustness_qubit(p, options_of(c)), out);
    }
    if (*fixed) {
      const auto targets = io::load_targets(c.set);
      const auto spec = io::assignment_from_json(io::read_file(c.assign));
      return report_result(c, "fixed-assignment", targets, fixed_assignment_robustness(targets, spec, options_of(c)),
                           out);
    }
    if (*verify) return cmd_verify(c, out);
    if (*repro) return cmd_reproduce(c, out);
  } catch (const VerificationFailed& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerification;
  } catch (const SolverFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const NotPositive& e) {
    err << "error: " << e.what() << " (effect " << e.index() << ")\n";
    return kExitMalformed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitMalformed;
  }
  return kExitMalformed;
}

}  // namespace povmsim::cli
