/* Copyright 2026 The ReluQC Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef RELUQC_TYPES_HPP_
#define RELUQC_TYPES_HPP_

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace reluqc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Error thrown on contract violations (bad dimensions, invalid parameters,
/// malformed inputs). Numerically negative results (infeasible, falsified,
/// unknown) are ordinary return values, never exceptions.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(msg);
}

void require_finite(const Vector& v, const char* name);
void require_finite(const Matrix& m, const char* name);

/// Dense real symmetric matrix. Construction symmetrizes (M + M^T)/2 and
/// rejects inputs whose asymmetry exceeds 1e-12 * maxabs, so downstream
/// eigenvalue computations stay well-posed.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Matrix& m);

  static SymMatrix zero(Eigen::Index n) { return SymMatrix(Matrix::Zero(n, n)); }
  static SymMatrix identity(Eigen::Index n) {
    return SymMatrix(Matrix::Identity(n, n));
  }
  /// Wraps a matrix that is symmetric by construction, skipping the
  /// asymmetry check (still symmetrizes to kill roundoff).
  static SymMatrix from_symmetric_expr(const Matrix& m);

  Eigen::Index dim() const { return m_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  const Matrix& mat() const { return m_; }

  double maxabs() const {
    return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff();
  }
  double min_eigenvalue() const;
  double max_eigenvalue() const;

 private:
  Matrix m_;
};

/// Symmetric 2*nv x 2*nv matrix defining a (incremental) quadratic
/// constraint on the stacked input/output pair of an nv-channel function.
struct QcMatrix {
  SymMatrix m;
  Eigen::Index nv = 0;

  QcMatrix() = default;
  QcMatrix(SymMatrix matrix, Eigen::Index channels);
};

/// Diagonal +/-1 pattern selecting one orthant.
class SignPattern {
 public:
  explicit SignPattern(std::vector<int> signs);

  Eigen::Index dim() const { return static_cast<Eigen::Index>(signs_.size()); }
  int sign(Eigen::Index i) const { return signs_[static_cast<size_t>(i)]; }
  /// The pattern as a dense diagonal vector of +/-1.
  Vector diagonal() const;
  const std::vector<int>& signs() const { return signs_; }

 private:
  std::vector<int> signs_;
};

/// All 2^n sign patterns in deterministic lexicographic order (+1 sorts
/// before -1, first coordinate most significant). Refuses n above the cap:
/// the 2^n blow-up must fail loudly rather than hang.
std::vector<SignPattern> enumerate_sign_patterns(int n, int cap = 16);

}  // namespace reluqc

#endif  // RELUQC_TYPES_HPP_
