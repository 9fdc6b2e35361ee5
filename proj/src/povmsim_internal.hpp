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

#include <vector>

#include "povmsim/hermitian.hpp"

namespace povmsim::internal {

/// Components lighter than this are dropped from extracted certificates.
inline constexpr double kDropWeight = 1e-11;

/// Replaces negative eigenvalues by zero.
HermitianOperator clip_psd(const HermitianOperator& h);

/// Clips every operator and conjugates by S^{-1/2}, S = sum of the clipped
/// operators, so the result sums to the identity exactly.
void normalize_to_identity(std::vector<HermitianOperator>& ops);

}  // namespace povmsim::internal
