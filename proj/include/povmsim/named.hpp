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

#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "povmsim/povm.hpp"

// Frequently used qubit measurement families.
namespace povmsim::named {

Povm pauli_x();
Povm pauli_y();
Povm pauli_z();

/// Projective qubit measurement (I +- v.sigma) / 2 along a unit vector.
Povm direction(const Eigen::Vector3d& unit);

/// direction((1, 1, 1) / sqrt(3)).
Povm sigma();

/// (I + v_i.sigma) / 4 with v_1 = (1,1,1)/sqrt3, v_2 = (1,-1,-1)/sqrt3,
/// v_3 = (-1,1,-1)/sqrt3, v_4 = (-1,-1,1)/sqrt3.
Povm tetrahedral();
const std::vector<Eigen::Vector3d>& tetrahedron_vertices();

/// Three effects (I + u_i.sigma) / 3 with unit u_i at 120 degrees in the plane
/// orthogonal to `axis`. u_1 lies in the plane spanned by `axis` and the x-axis
/// (the y-axis when `axis` is parallel to x).
Povm trine(const Eigen::Vector3d& axis = Eigen::Vector3d::UnitZ());

/// (p_1 I, ..., p_n I).
Povm trivial(const std::vector<double>& probabilities, int dim = 2);

/// {pauli-x, pauli-y, pauli-z, sigma}.
std::vector<Povm> xyz_sigma_set();

/// Parses `name[:comma-separated parameters]`:
///   pauli-x | pauli-y | pauli-z | sigma | tetra
///   direction:vx,vy,vz   trine[:rx,ry,rz]   trivial:p1,...,pn
///   paper-set-A (alias xyz-sigma) -> four POVMs
std::vector<Povm> parse(std::string_view spec);

}  // namespace povmsim::named
