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

#include "wagan/aitchison.hpp"

#include <cmath>
#include <string>

#include "wagan/error.hpp"

namespace wagan {

namespace {

void check_open_simplex(const Eigen::Ref<const Vector>& w) {
  if (w.size() < 2) {
    throw DomainError("simplex point needs at least 2 components, got " +
                      std::to_string(w.size()));
  }
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    if (!std::isfinite(w[j]) || w[j] <= kBoundaryTolerance) {
      throw DomainError("simplex point component " + std::to_string(j) +
                        " = " + std::to_string(w[j]) +
                        " is not strictly positive (boundary of the simplex)");
    }
  }
  if (std::abs(w.sum() - 1.0) > kSimplexSumTolerance) {
    throw DomainError("simplex point components sum to " +
                      std::to_string(w.sum()) + ", expected 1");
  }
}

void check_finite(const Eigen::Ref<const Matrix>& x, const char* what) {
  if (!x.allFinite()) {
    throw DomainError(std::string(what) + ": non-finite input");
  }
}

}  // namespace

SimplexPoint::SimplexPoint(Vector w) : w_(std::move(w)) {
  check_open_simplex(w_);
}

SimplexPoint SimplexPoint::normalized(const Vector& v) {
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (!(v[j] > 0.0) || !std::isfinite(v[j])) {
      throw DomainError("cannot normalize onto the open simplex: component " +
                        std::to_string(j) + " is not strictly positive");
    }
  }
  return SimplexPoint(v / v.sum());
}

SimplexPoint SimplexPoint::center(Eigen::Index d) {
  return SimplexPoint(Vector::Constant(d, 1.0 / static_cast<double>(d)));
}

BasisMatrix::BasisMatrix(Eigen::Index d) {
  if (d < 2) {
    throw DomainError("orthonormal basis needs d >= 2, got " +
                      std::to_string(d));
  }
  v_ = Matrix::Zero(d, d - 1);
  for (Eigen::Index i = 1; i < d; ++i) {
    const double di = static_cast<double>(i);
    const double norm = std::sqrt(di / (di + 1.0));
    v_.col(i - 1).head(i).setConstant(norm / di);
    v_(i, i - 1) = -norm;
  }
}

Vector clr(const SimplexPoint& w) {
  Vector logs = w.values().array().log().matrix();
  return (logs.array() - logs.mean()).matrix();
}

Vector softmax(const Vector& x) {
  check_finite(x, "softmax");
  Vector out = (x.array() - x.maxCoeff()).exp().matrix();
  return out / out.sum();
}

SimplexPoint clr_inv(const Vector& x) { return SimplexPoint(softmax(x)); }

Vector to_coordinates(const SimplexPoint& w, const BasisMatrix& basis) {
  if (w.size() != basis.ambient_dim()) {
    throw ShapeError("to_coordinates: point has dimension " +
                     std::to_string(w.size()) + ", basis expects " +
                     std::to_string(basis.ambient_dim()));
  }
  return basis.matrix().transpose() * clr(w);
}

SimplexPoint from_coordinates(const Vector& c, const BasisMatrix& basis) {
  if (c.size() != basis.coord_dim()) {
    throw ShapeError("from_coordinates: coordinate vector has dimension " +
                     std::to_string(c.size()) + ", basis expects " +
                     std::to_string(basis.coord_dim()));
  }
  check_finite(c, "from_coordinates");
  return clr_inv(basis.matrix() * c);
}

Matrix clr_rows(const Matrix& points) {
  Matrix out(points.rows(), points.cols());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    check_open_simplex(points.row(i).transpose());
    const Eigen::RowVectorXd logs = points.row(i).array().log().matrix();
    out.row(i) = (logs.array() - logs.mean()).matrix();
  }
  return out;
}

Matrix softmax_rows(const Matrix& x) {
  check_finite(x, "softmax_rows");
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out.row(i) = (x.row(i).array() - x.row(i).maxCoeff()).exp().matrix();
    out.row(i) /= out.row(i).sum();
  }
  return out;
}

Matrix to_coordinates(const Matrix& points, const BasisMatrix& basis) {
  if (points.cols() != basis.ambient_dim()) {
    throw ShapeError("to_coordinates: points have dimension " +
                     std::to_string(points.cols()) + ", basis expects " +
                     std::to_string(basis.ambient_dim()));
  }
  return clr_rows(points) * basis.matrix();
}

Matrix from_coordinates(const Matrix& coords, const BasisMatrix& basis) {
  if (coords.cols() != basis.coord_dim()) {
    throw ShapeError("from_coordinates: coordinates have dimension " +
                     std::to_string(coords.cols()) + ", basis expects " +
                     std::to_string(basis.coord_dim()));
  }
  check_finite(coords, "from_coordinates");
  return softmax_rows(coords * basis.matrix().transpose());
}

SimplexPoint aitchison_add(const SimplexPoint& v, const SimplexPoint& w) {
  if (v.size() != w.size()) {
    throw ShapeError("aitchison_add: dimension mismatch");
  }
  return SimplexPoint::normalized(v.values().cwiseProduct(w.values()));
}

SimplexPoint aitchison_scale(double alpha, const SimplexPoint& v) {
  if (!std::isfinite(alpha)) {
    throw DomainError("aitchison_scale: non-finite scalar");
  }
  // Powering in log space keeps large |alpha| from under/overflowing.
  return clr_inv(alpha * v.values().array().log().matrix());
}

double aitchison_inner(const SimplexPoint& v, const SimplexPoint& w) {
  if (v.size() != w.size()) {
    throw ShapeError("aitchison_inner: dimension mismatch");
  }
  const double log_gv = v.values().array().log().mean();
  const double log_gw = w.values().array().log().mean();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    acc += (std::log(v[i]) - log_gv) * (std::log(w[i]) - log_gw);
  }
  return acc;
}

}  // namespace wagan
