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

#include "povmsim/named.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "povmsim/errors.hpp"

namespace povmsim::named {

namespace {

HermitianOperator qubit(double a, const Eigen::Vector3d& v) {
  RealVector bloch(3);
  bloch << v.x(), v.y(), v.z();
  return from_bloch(a, bloch, 2);
}

std::vector<double> parse_numbers(std::string_view text) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("cannot parse number '" + item + "'");
    }
    if (used != item.size()) throw InvalidArgument("cannot parse number '" + item + "'");
    out.push_back(value);
  }
  return out;
}

Eigen::Vector3d parse_vector(std::string_view text, std::string_view name) {
  const auto v = parse_numbers(text);
  if (v.size() != 3) throw InvalidArgument(std::string(name) + " expects three components");
  return {v[0], v[1], v[2]};
}

}  // namespace

Povm pauli_x() { return direction(Eigen::Vector3d::UnitX()); }
Povm pauli_y() { return direction(Eigen::Vector3d::UnitY()); }
Povm pauli_z() { return direction(Eigen::Vector3d::UnitZ()); }

Povm direction(const Eigen::Vector3d& unit) {
  if (std::abs(unit.norm() - 1.0) > 1e-6) {
    throw InvalidArgument("direction must be a unit vector (norm " + std::to_string(unit.norm()) + ")");
  }
  const Eigen::Vector3d v = unit.normalized();
  return Povm({qubit(0.5, 0.5 * v), qubit(0.5, -0.5 * v)});
}

Povm sigma() { return direction(Eigen::Vector3d(1, 1, 1) / std::sqrt(3.0)); }

const std::vector<Eigen::Vector3d>& tetrahedron_vertices() {
  static const std::vector<Eigen::Vector3d> vertices = {
      Eigen::Vector3d(1, 1, 1) / std::sqrt(3.0),
      Eigen::Vector3d(1, -1, -1) / std::sqrt(3.0),
      Eigen::Vector3d(-1, 1, -1) / std::sqrt(3.0),
      Eigen::Vector3d(-1, -1, 1) / std::sqrt(3.0),
  };
  return vertices;
}

Povm tetrahedral() {
  std::vector<HermitianOperator> effects;
  for (const auto& v : tetrahedron_vertices()) effects.push_back(qubit(0.25, 0.25 * v));
  return Povm(std::move(effects));
}

Povm trine(const Eigen::Vector3d& axis) {
  if (axis.norm() < 1e-12) throw InvalidArgument("trine axis must be non-zero");
  const Eigen::Vector3d r = axis.normalized();
  Eigen::Vector3d seed = Eigen::Vector3d::UnitX();
  if (std::abs(std::abs(r.dot(seed)) - 1.0) < 1e-12) seed = Eigen::Vector3d::UnitY();
  const Eigen::Vector3d u1 = (seed - seed.dot(r) * r).normalized();
  const Eigen::Vector3d w = r.cross(u1);
  std::vector<HermitianOperator> effects;
  for (int k = 0; k < 3; ++k) {
    const double angle = 2.0 * M_PI * k / 3.0;
    const Eigen::Vector3d u = std::cos(angle) * u1 + std::sin(angle) * w;
    effects.push_back(qubit(1.0 / 3.0, u / 3.0));
  }
  return Povm(std::move(effects));
}

Povm trivial(const std::vector<double>& probabilities, int dim) {
  std::vector<HermitianOperator> effects;
  for (double p : probabilities) effects.push_back(p * HermitianOperator::identity(dim));
  return Povm(std::move(effects));
}

std::vector<Povm> xyz_sigma_set() { return {pauli_x(), pauli_y(), pauli_z(), sigma()}; }

std::vector<Povm> parse(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  const std::string_view params = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  const bool has_params = colon != std::string_view::npos;
  auto no_params = [&] {
    if (has_params) throw InvalidArgument("'" + std::string(name) + "' takes no parameters");
  };
  if (name == "pauli-x") return no_params(), std::vector<Povm>{pauli_x()};
  if (name == "pauli-y") return no_params(), std::vector<Povm>{pauli_y()};
  if (name == "pauli-z") return no_params(), std::vector<Povm>{pauli_z()};
  if (name == "sigma") return no_params(), std::vector<Povm>{sigma()};
  if (name == "tetra") return no_params(), std::vector<Povm>{tetrahedral()};
  if (name == "paper-set-A" || name == "xyz-sigma") return no_params(), xyz_sigma_set();
  if (name == "direction") {
    if (!has_params) throw InvalidArgument("direction needs a vector, e.g. direction:0,0,1");
    return {direction(parse_vector(params, "direction"))};
  }
  if (name == "trine") {
    return {has_params ? trine(parse_vector(params, "trine")) : trine()};
  }
  if (name == "trivial") {
    if (!has_params) throw InvalidArgument("trivial needs probabilities, e.g. trivial:0.5,0.5");
    return {trivial(parse_numbers(params))};
  }
  throw InvalidArgument("unknown measurement name '" + std::string(name) + "'");
}

}  // namespace povmsim::named
