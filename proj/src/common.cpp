// Copyright 2026 The aais-pinn Authors
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

#include <aais/common.hpp>

#include <vector>

namespace aais {

Rng make_rng(std::uint64_t seed, std::string_view stream) {
  // FNV-1a over the stream name keeps sub-streams stable across builds.
  std::uint64_t tag = 0xcbf29ce484222325ULL;
  for (const char c : stream) {
    tag ^= static_cast<unsigned char>(c);
    tag *= 0x100000001b3ULL;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
  return Rng(seq);
}

BoxDomain::BoxDomain(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  require_dim(lower_.size(), upper_.size(), "BoxDomain");
  if (lower_.size() == 0) {
    throw InvalidArgument("BoxDomain: dimension must be positive");
  }
  if ((lower_.array() >= upper_.array()).any()) {
    throw InvalidArgument("BoxDomain: lower must be < upper componentwise");
  }
}

BoxDomain BoxDomain::symmetric_unit(Eigen::Index dim) {
  return {Vector::Constant(dim, -1.0), Vector::Constant(dim, 1.0)};
}

double BoxDomain::volume() const { return (upper_ - lower_).prod(); }

bool BoxDomain::contains(const Eigen::Ref<const Vector>& x) const {
  require_dim(dim(), x.size(), "BoxDomain::contains");
  return (x.array() > lower_.array()).all() && (x.array() < upper_.array()).all();
}

PointSet BoxDomain::sample_uniform(Eigen::Index n, Rng& rng) const {
  PointSet points(dim(), n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < dim(); ++j) {
      double x = lower_(j);
      while (x <= lower_(j) || x >= upper_(j)) {
        x = lower_(j) + unit(rng) * (upper_(j) - lower_(j));
      }
      points(j, i) = x;
    }
  }
  return points;
}

}  // namespace aais
