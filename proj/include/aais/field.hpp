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

#ifndef AAIS_FIELD_HPP
#define AAIS_FIELD_HPP

#include <aais/common.hpp>

namespace aais {

/// Value, gradient (d x N) and Laplacian of a scalar field at N points.
struct FieldJets {
  Vector value;
  Matrix gradient;
  Vector laplacian;
};

/// A scalar field u: R^d -> R with exact first derivatives and Laplacian.
class Field {
 public:
  virtual ~Field() = default;

  [[nodiscard]] virtual Eigen::Index dim() const = 0;
  [[nodiscard]] virtual Vector values(const PointSet& points) const = 0;
  [[nodiscard]] virtual FieldJets jets(const PointSet& points) const = 0;

  [[nodiscard]] double value(const Eigen::Ref<const Vector>& x) const;
  [[nodiscard]] Vector gradient(const Eigen::Ref<const Vector>& x) const;
  [[nodiscard]] double laplacian(const Eigen::Ref<const Vector>& x) const;
};

}  // namespace aais

#endif
