// Copyright 2026 The hotm Authors. All Rights Reserved.
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

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

namespace hotm {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Everything outside core works in double precision.
using Vector = VectorX<double>;
using Matrix = MatrixX<double>;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric input was NaN/Inf or out of its admissible range.
/// `index` is the flat offending position (or -1 when not applicable).
class NumericError : public Error {
 public:
  NumericError(const std::string& what, std::ptrdiff_t index)
      : Error(what), index_(index) {}
  std::ptrdiff_t index() const { return index_; }

 private:
  std::ptrdiff_t index_;
};

/// Argument shapes disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

template <typename Scalar>
struct EigenDecomposition {
  VectorX<Scalar> eigenvalues;   // ascending
  MatrixX<Scalar> eigenvectors;  // orthogonal, columns match eigenvalues
};

/// Throws NumericError carrying the first non-finite flat index (column-major).
template <typename Derived>
void require_finite(const Eigen::DenseBase<Derived>& m, const char* what) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(static_cast<double>(m(i, j)))) {
        const std::ptrdiff_t flat = static_cast<std::ptrdiff_t>(j * m.rows() + i);
        throw NumericError(std::string(what) + ": non-finite entry at index " +
                               std::to_string(flat),
                           flat);
      }
    }
  }
}

/// Symmetric eigendecomposition H = U diag(S) U^T with S ascending.
/// Only the lower triangle of H is read.
template <typename Scalar>
EigenDecomposition<Scalar> evd_symmetric(const MatrixX<Scalar>& H) {
  if (H.rows() != H.cols() || H.rows() < 1) {
    throw DimensionError("evd_symmetric: expected a non-empty square matrix");
  }
  require_finite(H, "evd_symmetric");
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(H, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error("evd_symmetric: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

template <typename Derived>
typename Derived::Scalar euclidean_norm(const Eigen::MatrixBase<Derived>& x) {
  return x.stableNorm();
}

/// Makes a matrix exactly symmetric by averaging with its transpose.
template <typename Scalar>
void symmetrize(MatrixX<Scalar>& H) {
  for (Eigen::Index j = 0; j < H.cols(); ++j) {
    for (Eigen::Index i = j + 1; i < H.rows(); ++i) {
      const Scalar avg = Scalar(0.5) * (H(i, j) + H(j, i));
      H(i, j) = avg;
      H(j, i) = avg;
    }
  }
}

}  // namespace hotm
