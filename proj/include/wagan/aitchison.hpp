// Copyright 2026 The wagan Authors.
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

#ifndef WAGAN_AITCHISON_HPP_
#define WAGAN_AITCHISON_HPP_

// Geometry of the open unit simplex under the Aitchison structure: the
// centered log-ratio map into the zero-sum hyperplane H, its softmax inverse,
// perturbation / powering / inner product, and coordinates with respect to
// the orthonormal basis
//
//   e_i = sqrt(i / (i + 1)) * (1/i, ..., 1/i, -1, 0, ..., 0),  i = 1..d-1
//
// (i leading entries equal to 1/i). Batch variants operate on matrices whose
// rows are points.

#include <Eigen/Core>

namespace wagan {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Components at or below this are treated as lying on the boundary.
inline constexpr double kBoundaryTolerance = 1e-300;
inline constexpr double kSimplexSumTolerance = 1e-12;

// A point of the open simplex: strictly positive components summing to one.
class SimplexPoint {
 public:
  // Throws DomainError unless `w` already lies on the open simplex.
  explicit SimplexPoint(Vector w);
  // Rescales a strictly positive vector onto the simplex.
  static SimplexPoint normalized(const Vector& v);
  // The Aitchison zero element, the barycenter 1/d.
  static SimplexPoint center(Eigen::Index d);

  const Vector& values() const { return w_; }
  Eigen::Index size() const { return w_.size(); }
  double operator[](Eigen::Index j) const { return w_[j]; }

 private:
  Vector w_;
};

// d x (d-1) matrix whose columns are the basis vectors e_1..e_{d-1}.
class BasisMatrix {
 public:
  explicit BasisMatrix(Eigen::Index d);

  const Matrix& matrix() const { return v_; }
  // Ambient dimension d.
  Eigen::Index ambient_dim() const { return v_.rows(); }
  // Coordinate dimension d - 1.
  Eigen::Index coord_dim() const { return v_.cols(); }

 private:
  Matrix v_;
};

inline BasisMatrix orthonormal_basis(Eigen::Index d) { return BasisMatrix(d); }

Vector clr(const SimplexPoint& w);
// Softmax; throws DomainError on non-finite input.
SimplexPoint clr_inv(const Vector& x);
Vector softmax(const Vector& x);

Vector to_coordinates(const SimplexPoint& w, const BasisMatrix& basis);
SimplexPoint from_coordinates(const Vector& c, const BasisMatrix& basis);

// Row-wise variants. `points` is K x d with every row on the open simplex;
// `coords` is K x (d-1).
Matrix clr_rows(const Matrix& points);
Matrix softmax_rows(const Matrix& x);
Matrix to_coordinates(const Matrix& points, const BasisMatrix& basis);
Matrix from_coordinates(const Matrix& coords, const BasisMatrix& basis);

// Perturbation v (+) w.
SimplexPoint aitchison_add(const SimplexPoint& v, const SimplexPoint& w);
// Powering alpha (.) v.
SimplexPoint aitchison_scale(double alpha, const SimplexPoint& v);
double aitchison_inner(const SimplexPoint& v, const SimplexPoint& w);

}  // namespace wagan

#endif  // WAGAN_AITCHISON_HPP_
