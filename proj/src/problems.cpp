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

#include "hotm/problems.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace hotm {
namespace {

// log(1 + e^u) without overflow.
inline double softplus(double u) { return std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u))); }

inline double sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

constexpr double kPoissonExponentLimit = 700.0;

// Returns A^T diag(w) A with w >= 0 as an exactly symmetric matrix.
Matrix weighted_gram(const Matrix& A, const Vector& w) {
  const Matrix scaled = w.cwiseSqrt().asDiagonal() * A;
  Matrix H = Matrix::Zero(A.cols(), A.cols());
  H.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose());
  H.triangularView<Eigen::StrictlyUpper>() = H.transpose();
  return H;
}

}  // namespace

void Objective::check_dimension(const Vector& x, const char* what) const {
  if (x.size() != dimension()) {
    throw DimensionError(std::string(what) + ": expected dimension " +
                         std::to_string(dimension()) + ", got " + std::to_string(x.size()));
  }
}

OracleResponse Objective::evaluate(const Vector& x, unsigned request, const Vector* h) const {
  OracleResponse out;
  if (request & kValue) out.value = value(x);
  if (request & kGradient) out.gradient = gradient(x);
  if (request & kHessian) out.hessian = hessian(x);
  if (request & kThirdDir) {
    if (h == nullptr) throw DimensionError("evaluate: third_dir requested without a direction");
    out.third_dir = third_dir(x, *h);
  }
  return out;
}

void validate_dataset(const Dataset& data, LabelKind kind) {
  if (data.samples() < 1 || data.dimension() < 1) {
    throw DimensionError("dataset '" + data.name + "' is empty");
  }
  if (data.labels.size() != data.samples()) {
    throw DimensionError("dataset '" + data.name + "': label count does not match rows");
  }
  require_finite(data.features, "dataset features");
  require_finite(data.labels, "dataset labels");
  for (Eigen::Index i = 0; i < data.labels.size(); ++i) {
    const double b = data.labels[i];
    const bool ok = kind == LabelKind::kBinary ? (b == 1.0 || b == -1.0)
                                               : (b >= 0.0 && b == std::floor(b));
    if (!ok) {
      throw NumericError("dataset '" + data.name + "': invalid label " + std::to_string(b) +
                             " at row " + std::to_string(i),
                         i);
    }
  }
}

std::string to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kLogistic: return "logistic";
    case ProblemKind::kNesterovLowerBound: return "nesterov_lb";
    case ProblemKind::kPoisson: return "poisson";
  }
  return "unknown";
}

ProblemKind problem_kind_from_string(const std::string& name) {
  if (name == "logistic") return ProblemKind::kLogistic;
  if (name == "nesterov_lb") return ProblemKind::kNesterovLowerBound;
  if (name == "poisson") return ProblemKind::kPoisson;
  throw Error("unknown problem kind '" + name + "'");
}

ProblemOracle::ProblemOracle(ProblemKind kind, std::shared_ptr<const Dataset> data,
                             Eigen::Index dim, double mu)
    : kind_(kind), data_(std::move(data)), dim_(dim), mu_(mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw NumericError("problem oracle: mu must be finite and nonnegative", -1);
  }
}

ProblemOracle ProblemOracle::logistic(Dataset data, double mu) {
  validate_dataset(data, LabelKind::kBinary);
  const Eigen::Index d = data.dimension();
  return ProblemOracle(ProblemKind::kLogistic, std::make_shared<const Dataset>(std::move(data)), d,
                       mu);
}

ProblemOracle ProblemOracle::nesterov_lower_bound(Eigen::Index d, double mu) {
  if (d < 2) throw DimensionError("nesterov_lb: dimension must be at least 2");
  return ProblemOracle(ProblemKind::kNesterovLowerBound, nullptr, d, mu);
}

ProblemOracle ProblemOracle::poisson(Dataset data, double mu) {
  validate_dataset(data, LabelKind::kCount);
  const Eigen::Index d = data.dimension();
  return ProblemOracle(ProblemKind::kPoisson, std::make_shared<const Dataset>(std::move(data)), d,
                       mu);
}

double ProblemOracle::lipschitz(int p) const {
  auto it = lipschitz_.find(p);
  if (it == lipschitz_.end()) {
    throw Error("problem oracle: no Lipschitz constant for order " + std::to_string(p));
  }
  return it->second;
}

void ProblemOracle::set_lipschitz(int p, double value) {
  if (p < 1 || p > 3) throw Error("problem oracle: Lipschitz order must be 1, 2 or 3");
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw NumericError("problem oracle: Lipschitz constants must be positive", p);
  }
  lipschitz_[p] = value;
}

double ProblemOracle::value(const Vector& x) const { return evaluate(x, kValue).value; }

Vector ProblemOracle::gradient(const Vector& x) const { return *evaluate(x, kGradient).gradient; }

Matrix ProblemOracle::hessian(const Vector& x) const { return *evaluate(x, kHessian).hessian; }

Vector ProblemOracle::third_dir(const Vector& x, const Vector& h) const {
  return *evaluate(x, kThirdDir, &h).third_dir;
}

OracleResponse ProblemOracle::evaluate(const Vector& x, unsigned request, const Vector* h) const {
  check_dimension(x, "oracle");
  if (request & kThirdDir) {
    if (h == nullptr) throw DimensionError("oracle: third_dir requested without a direction");
    check_dimension(*h, "oracle direction");
  }
  OracleResponse out;
  const Eigen::Index d = dim_;

  switch (kind_) {
    case ProblemKind::kLogistic: {
      const Matrix& A = data_->features;
      const Vector& b = data_->labels;
      const double inv_n = 1.0 / static_cast<double>(A.rows());
      const Vector t = A * x;
      const Eigen::Index n = t.size();
      // z = b t is the margin; derivatives of l(t) = log(1 + e^{-b t}) in t.
      if (request & kValue) {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) sum += softplus(-b[i] * t[i]);
        out.value = inv_n * sum + 0.5 * mu_ * x.squaredNorm();
      }
      if (request & (kGradient | kHessian | kThirdDir)) {
        Vector sig(n);  // sigma(z_i)
        for (Eigen::Index i = 0; i < n; ++i) sig[i] = sigmoid(b[i] * t[i]);
        if (request & kGradient) {
          // l'(t) = -b sigma(-z)
          const Vector d1 = -(b.array() * (1.0 - sig.array())).matrix();
          out.gradient = inv_n * (A.transpose() * d1) + mu_ * x;
        }
        if (request & kHessian) {
          // l''(t) = sigma(z)(1 - sigma(z))
          const Vector d2 = (sig.array() * (1.0 - sig.array())).matrix();
          Matrix H = weighted_gram(A, d2) * inv_n;
          H.diagonal().array() += mu_;
          out.hessian = std::move(H);
        }
        if (request & kThirdDir) {
          // l'''(t) = b sigma(1 - sigma)(1 - 2 sigma)
          const Vector ah = A * (*h);
          const Vector c = (b.array() * sig.array() * (1.0 - sig.array()) *
                            (1.0 - 2.0 * sig.array()) * ah.array().square())
                               .matrix();
          out.third_dir = inv_n * (A.transpose() * c);
        }
      }
      break;
    }
    case ProblemKind::kNesterovLowerBound: {
      const Vector diff = x.head(d - 1) - x.tail(d - 1);  // x_i - x_{i+1}
      if (request & kValue) {
        out.value = 0.25 * diff.array().pow(4).sum() - x[0] + 0.5 * mu_ * x.squaredNorm();
      }
      if (request & kGradient) {
        Vector g = mu_ * x;
        const Vector cube = diff.array().cube().matrix();
        g.head(d - 1) += cube;
        g.tail(d - 1) -= cube;
        g[0] -= 1.0;
        out.gradient = std::move(g);
      }
      if (request & kHessian) {
        Matrix H = Matrix::Zero(d, d);
        for (Eigen::Index i = 0; i + 1 < d; ++i) {
          const double w = 3.0 * diff[i] * diff[i];
          H(i, i) += w;
          H(i + 1, i + 1) += w;
          H(i, i + 1) -= w;
          H(i + 1, i) -= w;
        }
        H.diagonal().array() += mu_;
        out.hessian = std::move(H);
      }
      if (request & kThirdDir) {
        const Vector hd = h->head(d - 1) - h->tail(d - 1);
        const Vector c = (6.0 * diff.array() * hd.array().square()).matrix();
        Vector r = Vector::Zero(d);
        r.head(d - 1) += c;
        r.tail(d - 1) -= c;
        out.third_dir = std::move(r);
      }
      break;
    }
    case ProblemKind::kPoisson: {
      const Matrix& A = data_->features;
      const Vector& b = data_->labels;
      const Vector t = A * x;
      for (Eigen::Index i = 0; i < t.size(); ++i) {
        if (!(std::abs(t[i]) <= kPoissonExponentLimit)) {
          throw NumericError("poisson: exponent <a_i, x> = " + std::to_string(t[i]) +
                                 " out of range at sample " + std::to_string(i),
                             i);
        }
      }
      const Vector e = t.array().exp().matrix();
      if (request & kValue) {
        out.value = (e - b.cwiseProduct(t)).sum() + 0.5 * mu_ * x.squaredNorm();
      }
      if (request & kGradient) out.gradient = A.transpose() * (e - b) + mu_ * x;
      if (request & kHessian) {
        Matrix H = weighted_gram(A, e);
        H.diagonal().array() += mu_;
        out.hessian = std::move(H);
      }
      if (request & kThirdDir) {
        const Vector ah = A * (*h);
        out.third_dir = A.transpose() * (e.array() * ah.array().square()).matrix();
      }
      break;
    }
  }
  return out;
}

NormalizedDataset normalize_rows(Dataset data) {
  NormalizedDataset out;
  for (Eigen::Index i = 0; i < data.features.rows(); ++i) {
    const double norm = data.features.row(i).stableNorm();
    if (norm == 0.0) {
      ++out.zero_rows;
      continue;
    }
    data.features.row(i) /= norm;
  }
  out.data = std::move(data);
  return out;
}

Vector synth_planted(SynthKind kind, Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x(d);
  for (Eigen::Index j = 0; j < d; ++j) x[j] = normal(rng);
  if (kind == SynthKind::kPoisson) x /= x.norm();
  return x;
}

Dataset synth_instance(SynthKind kind, Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw DimensionError("synth_instance: n and d must be positive");
  // Planted vector first, then rows, from one stream.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector plant(d);
  for (Eigen::Index j = 0; j < d; ++j) plant[j] = normal(rng);

  Dataset out;
  out.features.resize(n, d);
  out.labels.resize(n);
  std::ostringstream name;
  if (kind == SynthKind::kLogistic) {
    std::bernoulli_distribution flip(0.1);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) out.features(i, j) = normal(rng);
      const double norm = out.features.row(i).norm();
      if (norm > 0.0) out.features.row(i) /= norm;
      double label = out.features.row(i).dot(plant) >= 0.0 ? 1.0 : -1.0;
      if (flip(rng)) label = -label;
      out.labels[i] = label;
    }
    name << "synth-logistic(n=" << n << ",d=" << d << ",seed=" << seed
         << ",rows=normal/unit,labels=sign+flip0.1)";
  } else {
    plant /= plant.norm();
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) out.features(i, j) = uniform(rng) * scale;
      std::poisson_distribution<int> counts(std::exp(out.features.row(i).dot(plant)));
      out.labels[i] = static_cast<double>(counts(rng));
    }
    name << "synth-poisson(n=" << n << ",d=" << d << ",seed=" << seed
         << ",rows=uniform/sqrt(d),plant=unit,labels=poisson)";
  }
  out.name = name.str();
  return out;
}

}  // namespace hotm
