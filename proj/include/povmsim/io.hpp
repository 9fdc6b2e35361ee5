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

#include <string>
#include <vector>

#include <json.hpp>

#include "povmsim/oracle.hpp"
#include "povmsim/simulability.hpp"

// JSON encodings. Numbers are written with 12 significant digits so that
// identical inputs give byte-identical files.
namespace povmsim::io {

using Json = nlohmann::ordered_json;

double round12(double x);

/// {"dim": d, "re": [[...]], "im": [[...]]}. Also accepts {"dim": d, "bloch": {"a": a, "v": [...]}}.
Json to_json(const HermitianOperator& h);
HermitianOperator operator_from_json(const Json& j);

/// {"dim": d, "effects": [operator, ...]}
Json to_json(const Povm& p);
Povm povm_from_json(const Json& j);

Json to_json(const JointMeasurement& m);
JointMeasurement joint_from_json(const Json& j);

/// {"simulators": J, "weights": [[p(1|1), ...], ...]}
Json to_json(const AssignmentSpec& spec);
AssignmentSpec assignment_from_json(const Json& j);

Json to_json(const SimulationCertificate& cert, std::optional<double> reconstruction_error = std::nullopt);
SimulationCertificate certificate_from_json(const Json& j);

Json to_json(const oracle::VerificationReport& report);
Json to_json(const SubsetProfile& profile);

/// Reads a JSON file; throws InvalidArgument when unreadable or malformed.
Json read_file(const std::string& path);
void write_file(const std::string& path, const Json& j);
std::string dump(const Json& j);

/// Names joined by '+' (see named::parse), or a JSON file holding one POVM,
/// an array of POVMs, or {"povms": [...]}.
std::vector<Povm> load_targets(const std::string& spec);

/// 12-significant-digit text for tables.
std::string format_number(double x);

}  // namespace povmsim::io
