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

#ifndef AAIS_COMMON_HPP
#define AAIS_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

/**
 * \file
 * \brief Shared numeric types, error classes and the box domain.
 */

namespace aais {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A batch of points stored column-wise: `points.col(i)` is the i-th point in R^d.
using PointSet = Eigen::MatrixXd;

/// The random engine used everywhere. Always seeded explicitly.
using Rng = std::mt19937_64;

/// Derives an independent engine for a named sub-stream of a run seed.
Rng make_rng(std::uint64_t seed, std::string_view stream = {});

/// Elementwise std::exp. Eigen's vectorized exp clamps its argument, so exp(-inf) comes out as
/// a denormal instead of 0.
inline Eigen::ArrayXd exp_exact(const Eigen::ArrayXd& x) {
  return x.unaryExpr([](double v) { return std::exp(v); });
}

/// Base class of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimensions of two operands disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A covariance could not be made positive definite.
class FactorizationError : public Error {
 public:
  using Error::Error;
};

/// Every importance weight in a batch is zero.
class DegenerateBatchError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument or configuration value.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Axis-aligned box `lower < x < upper`.
class BoxDomain {
 public:
  BoxDomain(Vector lower, Vector upper);

  /// The cube (-1, 1)^d.
  static BoxDomain symmetric_unit(Eigen::Index dim);

  [[nodiscard]] Eigen::Index dim() const { return lower_.size(); }
  [[nodiscard]] const Vector& lower() const { return lower_; }
  [[nodiscard]] const Vector& upper() const { return upper_; }
  [[nodiscard]] double volume() const;

  /// Strict interior test.
  [[nodiscard]] bool contains(const Eigen::Ref<const Vector>& x) const;

  /// i.i.d. uniform points in the open box.
  [[nodiscard]] PointSet sample_uniform(Eigen::Index n, Rng& rng) const;

 private:
  Vector lower_;
  Vector upper_;
};

inline void require_dim(Eigen::Index expected, Eigen::Index actual, const char* what) {
  if (expected != actual) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(expected) + ", got " +
                         std::to_string(actual));
  }
}

}  // namespace aais

#endif
