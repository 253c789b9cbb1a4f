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

#include "cliqueloc/random.hpp"

#include <array>
#include <vector>

namespace cliqueloc {

std::uint64_t sub_seed(std::uint64_t seed, std::string_view name) {
  std::vector<std::uint32_t> material{static_cast<std::uint32_t>(seed),
                                      static_cast<std::uint32_t>(seed >> 32)};
  for (const char c : name) material.push_back(static_cast<unsigned char>(c));
  std::seed_seq seq(material.begin(), material.end());
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

Eigen::Matrix3d random_rotation(Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::Quaterniond q;
  do {
    q.coeffs() << normal(rng), normal(rng), normal(rng), normal(rng);
  } while (q.coeffs().norm() < 1e-12);
  q.normalize();
  return q.toRotationMatrix();
}

Eigen::VectorXd random_gaussian(Rng& rng, int dim) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = normal(rng);
  return v;
}

}  // namespace cliqueloc
