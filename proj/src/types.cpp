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
#include "reluqc/types.hpp"

#include <Eigen/Eigenvalues>

namespace reluqc {

void require_finite(const Vector& v, const char* name) {
  if (!v.allFinite()) throw Error(std::string(name) + ": non-finite entry");
}

void require_finite(const Matrix& m, const char* name) {
  if (!m.allFinite()) throw Error(std::string(name) + ": non-finite entry");
}

SymMatrix::SymMatrix(const Matrix& m) {
  require(m.rows() == m.cols(), "SymMatrix: matrix must be square");
  require_finite(m, "SymMatrix");
  const double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  const double asym =
      m.size() == 0 ? 0.0 : (m - m.transpose()).cwiseAbs().maxCoeff();
  require(asym <= 1e-12 * std::max(scale, 1e-300) || asym == 0.0,
          "SymMatrix: asymmetry " + std::to_string(asym) +
              " exceeds 1e-12 * maxabs");
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::from_symmetric_expr(const Matrix& m) {
  require(m.rows() == m.cols(), "SymMatrix: matrix must be square");
  require_finite(m, "SymMatrix");
  SymMatrix out;
  out.m_ = 0.5 * (m + m.transpose());
  return out;
}

double SymMatrix::min_eigenvalue() const {
  if (dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double SymMatrix::max_eigenvalue() const {
  if (dim() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

QcMatrix::QcMatrix(SymMatrix matrix, Eigen::Index channels)
    : m(std::move(matrix)), nv(channels) {
  require(nv >= 1, "QcMatrix: channel size must be positive");
  require(m.dim() == 2 * nv, "QcMatrix: matrix dim must equal 2*nv");
}

SignPattern::SignPattern(std::vector<int> signs) : signs_(std::move(signs)) {
  require(!signs_.empty(), "SignPattern: empty pattern");
  for (int s : signs_) {
    require(s == 1 || s == -1, "SignPattern: entries must be +1 or -1");
  }
}

Vector SignPattern::diagonal() const {
  Vector d(dim());
  for (Eigen::Index i = 0; i < dim(); ++i) d[i] = sign(i);
  return d;
}

std::vector<SignPattern> enumerate_sign_patterns(int n, int cap) {
  require(n >= 1, "enumerate_sign_patterns: n must be >= 1");
  require(n <= cap, "enumerate_sign_patterns: n = " + std::to_string(n) +
                        " exceeds cap " + std::to_string(cap));
  std::vector<SignPattern> out;
  out.reserve(size_t{1} << n);
  for (uint64_t k = 0; k < (uint64_t{1} << n); ++k) {
    std::vector<int> signs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      signs[static_cast<size_t>(i)] = ((k >> (n - 1 - i)) & 1) ? -1 : +1;
    }
    out.emplace_back(std::move(signs));
  }
  return out;
}

}  // namespace reluqc
