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

#include "povmsim/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "povmsim/errors.hpp"
#include "povmsim/named.hpp"

namespace povmsim::io {

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", round12(x));
  return buf;
}

namespace {

template <typename T>
T get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidArgument(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("field '") + key + "': " + e.what());
  }
}

Json matrix_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(round12(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

RealMatrix matrix_from(const Json& j, int d, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != d) {
    throw InvalidArgument(std::string(what) + " must be a " + std::to_string(d) + "x" + std::to_string(d) + " array");
  }
  RealMatrix m(d, d);
  for (int r = 0; r < d; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != d) throw InvalidArgument(std::string(what) + " row length");
    for (int c = 0; c < d; ++c) {
      if (!row[static_cast<std::size_t>(c)].is_number()) throw InvalidArgument(std::string(what) + " entry not numeric");
      m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

Json effects_json(const std::vector<HermitianOperator>& effects) {
  Json arr = Json::array();
  for (const auto& e : effects) arr.push_back(to_json(e));
  return arr;
}

std::vector<HermitianOperator> effects_from(const Json& j) {
  if (!j.is_array() || j.empty()) throw InvalidArgument("'effects' must be a nonempty array");
  std::vector<HermitianOperator> out;
  for (const auto& e : j) out.push_back(operator_from_json(e));
  return out;
}

Json weighted_json(const WeightedPovm& w) {
  Json j;
  j["weight"] = round12(w.weight);
  j["effects"] = effects_json(w.povm.effects());
  return j;
}

WeightedPovm weighted_from(const Json& j) {
  return {get<double>(j, "weight"), Povm(effects_from(j.at("effects")))};
}

}  // namespace

Json to_json(const HermitianOperator& h) {
  Json j;
  j["dim"] = h.dim();
  j["re"] = matrix_json(h.matrix().real());
  j["im"] = matrix_json(h.matrix().imag());
  return j;
}

HermitianOperator operator_from_json(const Json& j) {
  const int d = get<int>(j, "dim");
  if (d < 2) throw InvalidArgument("operator dimension must be at least 2");
  if (j.contains("bloch")) {
    const auto& b = j.at("bloch");
    const auto v = get<std::vector<double>>(b, "v");
    return from_bloch(get<double>(b, "a"), Eigen::Map<const RealVector>(v.data(), static_cast<Eigen::Index>(v.size())),
                      d);
  }
  const RealMatrix re = matrix_from(j.at("re"), d, "re");
  const RealMatrix im = j.contains("im") ? matrix_from(j.at("im"), d, "im") : RealMatrix::Zero(d, d);
  ComplexMatrix m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = Complex(re(r, c), im(r, c));
  return HermitianOperator(m);
}

Json to_json(const Povm& p) {
  Json j;
  j["dim"] = p.dim();
  j["effects"] = effects_json(p.effects());
  return j;
}

Povm povm_from_json(const Json& j) {
  const int d = get<int>(j, "dim");
  auto effects = effects_from(j.at("effects"));
  for (const auto& e : effects) {
    if (e.dim() != d) throw DimensionMismatch("effect dimension differs from the declared dimension");
  }
  return Povm(std::move(effects));
}

Json to_json(const JointMeasurement& m) {
  Json j;
  j["shape"] = m.shape();
  j["effects"] = effects_json(m.effects());
  return j;
}

JointMeasurement joint_from_json(const Json& j) {
  return JointMeasurement(get<std::vector<int>>(j, "shape"), effects_from(j.at("effects")));
}

Json to_json(const AssignmentSpec& spec) {
  Json j;
  j["simulators"] = spec.simulators;
  Json rows = Json::array();
  for (const auto& row : spec.weights) {
    Json r = Json::array();
    for (double p : row) r.push_back(round12(p));
    rows.push_back(r);
  }
  j["weights"] = rows;
  return j;
}

AssignmentSpec assignment_from_json(const Json& j) {
  AssignmentSpec spec;
  spec.simulators = get<int>(j, "simulators");
  spec.weights = get<std::vector<std::vector<double>>>(j, "weights");
  return spec;
}

Json to_json(const SimulationCertificate& cert, std::optional<double> reconstruction_error) {
  Json j;
  j["kind"] = to_string(cert.kind);
  j["visibility"] = round12(cert.visibility);
  switch (cert.kind) {
    case CertificateKind::Joint:
      j["weights"] = Json::array({1.0});
      if (cert.joint) {
        j["shape"] = cert.joint->shape();
        j["effects"] = effects_json(cert.joint->effects());
      }
      break;
    case CertificateKind::KOutcome: {
      j["k"] = cert.k;
      Json w = Json::array();
      Json comps = Json::array();
      for (const auto& c : cert.components) {
        w.push_back(round12(c.weight));
        Json cj;
        cj["support"] = c.support;
        cj["weight"] = round12(c.weight);
        cj["effects"] = effects_json(c.povm.effects());
        comps.push_back(cj);
      }
      j["weights"] = w;
      j["components"] = comps;
      break;
    }
    case CertificateKind::FixedAssignment: {
      j["assignment"] = to_json(cert.assignment);
      j["weights"] = j["assignment"]["weights"];
      Json sims = Json::array();
      for (const auto& s : cert.simulators) {
        Json sj;
        sj["simulator"] = s.simulator;
        sj["targets"] = s.targets;
        sj["shape"] = s.joint.shape();
        sj["effects"] = effects_json(s.joint.effects());
        sims.push_back(sj);
      }
      j["simulators"] = sims;
      break;
    }
    case CertificateKind::ProjectiveDecomposition: {
      Json w = Json::array();
      Json comps = Json::array();
      for (const auto& c : cert.projective) {
        w.push_back(round12(c.weight));
        comps.push_back(weighted_json(c));
      }
      if (cert.trivial) {
        w.push_back(round12(cert.trivial->weight));
        j["trivial"] = weighted_json(*cert.trivial);
      }
      j["weights"] = w;
      j["components"] = comps;
      break;
    }
  }
  if (reconstruction_error) j["reconstruction_error"] = round12(*reconstruction_error);
  return j;
}

SimulationCertificate certificate_from_json(const Json& j) {
  SimulationCertificate cert;
  const auto kind = get<std::string>(j, "kind");
  cert.visibility = get<double>(j, "visibility");
  if (kind == "joint") {
    cert.kind = CertificateKind::Joint;
    cert.joint = JointMeasurement(get<std::vector<int>>(j, "shape"), effects_from(j.at("effects")));
  } else if (kind == "k_outcome") {
    cert.kind = CertificateKind::KOutcome;
    cert.k = get<int>(j, "k");
    for (const auto& c : j.at("components")) {
      cert.components.push_back(
          {get<std::vector<int>>(c, "support"), get<double>(c, "weight"), Povm(effects_from(c.at("effects")))});
    }
  } else if (kind == "fixed_assignment") {
    cert.kind = CertificateKind::FixedAssignment;
    cert.assignment = assignment_from_json(j.at("assignment"));
    for (const auto& s : j.at("simulators")) {
      cert.simulators.push_back({get<int>(s, "simulator"), get<std::vector<int>>(s, "targets"),
                                 JointMeasurement(get<std::vector<int>>(s, "shape"), effects_from(s.at("effects")))});
    }
  } else if (kind == "projective_decomposition") {
    cert.kind = CertificateKind::ProjectiveDecomposition;
    for (const auto& c : j.at("components")) cert.projective.push_back(weighted_from(c));
    if (j.contains("trivial")) cert.trivial = weighted_from(j.at("trivial"));
  } else {
    throw InvalidArgument("unknown certificate kind '" + kind + "'");
  }
  return cert;
}

Json to_json(const oracle::VerificationReport& report) {
  Json j;
  j["passed"] = report.passed;
  j["tolerance"] = round12(report.tolerance);
  j["max_error"] = round12(report.max_error);
  Json errs = Json::array();
  for (double e : report.errors) errs.push_back(round12(e));
  j["errors"] = errs;
  j["notes"] = report.notes;
  return j;
}

Json to_json(const SubsetProfile& profile) {
  Json j;
  j["size"] = profile.size;
  Json entries = Json::array();
  for (const auto& e : profile.entries) {
    Json ej;
    ej["subset"] = e.subset;
    ej["t_star"] = round12(e.t_star);
    entries.push_back(ej);
  }
  j["entries"] = entries;
  j["min"] = round12(profile.min);
  j["max"] = round12(profile.max);
  return j;
}

Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << dump(j);
}

std::vector<Povm> load_targets(const std::string& spec) {
  if (!std::filesystem::is_regular_file(spec)) {
    std::vector<Povm> out;
    std::size_t start = 0;
    while (true) {
      const auto plus = spec.find('+', start);
      const auto part = spec.substr(start, plus == std::string::npos ? std::string::npos : plus - start);
      for (auto& p : named::parse(part)) out.push_back(std::move(p));
      if (plus == std::string::npos) break;
      start = plus + 1;
    }
    return out;
  }
  const Json j = read_file(spec);
  std::vector<Povm> out;
  try {
    if (j.is_array()) {
      for (const auto& p : j) out.push_back(povm_from_json(p));
    } else if (j.contains("povms")) {
      for (const auto& p : j.at("povms")) out.push_back(povm_from_json(p));
    } else {
      out.push_back(povm_from_json(j));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("'" + spec + "': " + e.what());
  }
  if (out.empty()) throw InvalidArgument("'" + spec + "' holds no POVMs");
  return out;
}

}  // namespace povmsim::io
