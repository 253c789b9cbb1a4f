// Copyright 2026 The cliqueloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace cliqueloc {

using Rng = std::mt19937_64;

/// Derives an independent seed for a named consumer of a master seed, so
/// that adding a new random stream never perturbs the existing ones.
std::uint64_t sub_seed(std::uint64_t seed, std::string_view name);

inline Rng make_rng(std::uint64_t seed, std::string_view name) { return Rng(sub_seed(seed, name)); }

/// Uniformly distributed rotation (Haar measure), via a normalized Gaussian quaternion.
Eigen::Matrix3d random_rotation(Rng& rng);

/// Vector with i.i.d. standard normal components.
Eigen::VectorXd random_gaussian(Rng& rng, int dim);

}  // namespace cliqueloc
