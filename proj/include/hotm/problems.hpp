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

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "hotm/core.hpp"

namespace hotm {

/// Bit flags selecting which derivatives an oracle call should produce.
enum Derivative : unsigned {
  kValue = 1u << 0,
  kGradient = 1u << 1,
  kHessian = 1u << 2,
  kThirdDir = 1u << 3,
};

struct OracleResponse {
  double value = 0.0;
  std::optional<Vector> gradient;
  std::optional<Matrix> hessian;
  std::optional<Vector> third_dir;  // D^3 f(x)[h]^2
};

/// A smooth function with derivatives up to the directional third order.
///
/// Implementations are immutable after construction; every method is const and
/// safe to call concurrently.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual Eigen::Index dimension() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual Matrix hessian(const Vector& x) const = 0;
  /// D^3 f(x)[h]^2, i.e. the gradient in x of <hessian(x) h, h>.
  virtual Vector third_dir(const Vector& x, const Vector& h) const = 0;

  /// Evaluates the requested subset. `h` is required iff kThirdDir is requested.
  virtual OracleResponse evaluate(const Vector& x, unsigned request,
                                  const Vector* h = nullptr) const;

 protected:
  void check_dimension(const Vector& x, const char* what) const;
};

enum class LabelKind { kBinary, kCount };

struct Dataset {
  Matrix features;  // n x d, rows are samples
  Vector labels;    // length n
  std::string name;

  Eigen::Index samples() const { return features.rows(); }
  Eigen::Index dimension() const { return features.cols(); }
};

/// Throws NumericError unless the dataset is non-empty, finite and its labels
/// fit `kind` ({-1,+1} or nonnegative integers).
void validate_dataset(const Dataset& data, LabelKind kind);

enum class ProblemKind { kLogistic, kNesterovLowerBound, kPoisson };

std::string to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& name);

/// One of the three benchmark objectives plus the constants the methods need.
class ProblemOracle final : public Objective {
 public:
  /// (1/n) sum log(1 + exp(-b_i <a_i, x>)) + (mu/2)|x|^2, labels in {-1,+1}.
  static ProblemOracle logistic(Dataset data, double mu);
  /// (1/4) sum (x_i - x_{i+1})^4 - x_1 + (mu/2)|x|^2, d >= 2.
  static ProblemOracle nesterov_lower_bound(Eigen::Index d, double mu);
  /// sum exp(<a_i, x>) - b_i <a_i, x> + (mu/2)|x|^2, count labels.
  static ProblemOracle poisson(Dataset data, double mu = 0.0);

  ProblemKind kind() const { return kind_; }
  double mu() const { return mu_; }
  const Dataset* dataset() const { return data_ ? data_.get() : nullptr; }

  /// Lipschitz constant of the p-th derivative, p in {1,2,3}.
  double lipschitz(int p) const;
  bool has_lipschitz(int p) const { return lipschitz_.count(p) > 0; }
  void set_lipschitz(int p, double value);

  std::optional<double> fstar_hint() const { return fstar_hint_; }
  void set_fstar_hint(double fstar) { fstar_hint_ = fstar; }

  Eigen::Index dimension() const override { return dim_; }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Matrix hessian(const Vector& x) const override;
  Vector third_dir(const Vector& x, const Vector& h) const override;
  OracleResponse evaluate(const Vector& x, unsigned request,
                          const Vector* h = nullptr) const override;

 private:
  ProblemOracle(ProblemKind kind, std::shared_ptr<const Dataset> data, Eigen::Index dim,
                double mu);

  ProblemKind kind_;
  std::shared_ptr<const Dataset> data_;  // shared so copies stay cheap
  Eigen::Index dim_;
  double mu_;
  std::map<int, double> lipschitz_;
  std::optional<double> fstar_hint_;
};

struct ParseError : Error {
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
        line(line),
        column(column) {}
  std::size_t line;
  std::size_t column;
};

struct LibsvmOptions {
  /// Forces the feature dimension; must be >= the largest index present.
  std::optional<Eigen::Index> dimension;
  /// Map labels {0,1} to {-1,+1} when every label is 0 or 1.
  bool remap_binary = true;
};

/// Parses LibSVM text: `<label> <idx>:<val> ...` with 1-based strictly
/// increasing indices and `#` comments. Features are densified.
Dataset parse_libsvm(std::istream& in, const LibsvmOptions& options = {},
                     std::string name = "libsvm");
Dataset load_libsvm(const std::string& path, const LibsvmOptions& options = {});

struct NormalizedDataset {
  Dataset data;
  Eigen::Index zero_rows = 0;  // rows left untouched because their norm is 0
};

NormalizedDataset normalize_rows(Dataset data);

enum class SynthKind { kLogistic, kPoisson };

/// Deterministic synthetic instance for a fixed seed.
///
/// logistic: rows drawn N(0, I) and scaled to unit norm; labels are
///   sign(<a_i, x_plant>) with x_plant ~ N(0, I), each flipped with
///   probability 0.1.
/// poisson: entries U(-1, 1) / sqrt(d) (so |a_i| <= 1), x_plant uniform on
///   the unit sphere, so |<a_i, x_plant>| <= 1; labels ~ Poisson(exp(<a_i, x_plant>)).
Dataset synth_instance(SynthKind kind, Eigen::Index n, Eigen::Index d, std::uint64_t seed);

/// The planted parameter used by synth_instance for (kind, d, seed).
Vector synth_planted(SynthKind kind, Eigen::Index d, std::uint64_t seed);

}  // namespace hotm
