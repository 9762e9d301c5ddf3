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
#include "reluqc/dh.hpp"

#include <algorithm>
#include <map>

namespace reluqc {

bool is_doubly_hyperdominant(const Matrix& Q) {
  if (Q.rows() != Q.cols() || Q.size() == 0) return false;
  if (!Q.allFinite()) return false;
  const Eigen::Index n = Q.rows();
  const double scale = std::max(Q.cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && Q(i, j) > 1e-12 * scale) return false;
    }
  }
  const double sum_tol = -1e-10 * scale;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (Q.row(i).sum() < sum_tol) return false;
    if (Q.col(i).sum() < sum_tol) return false;
  }
  return true;
}

bool is_zero_excess_dh(const Matrix& Q) {
  if (!is_doubly_hyperdominant(Q)) return false;
  const double scale = std::max(Q.cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index i = 0; i < Q.rows(); ++i) {
    if (std::abs(Q.row(i).sum()) > 1e-10 * scale) return false;
    if (std::abs(Q.col(i).sum()) > 1e-10 * scale) return false;
  }
  return true;
}

namespace {

// Augmenting-path bipartite matching on the support graph. support(i, j)
// says whether row i may be matched to column j.
class SupportMatcher {
 public:
  explicit SupportMatcher(const std::vector<std::vector<bool>>& support)
      : support_(support), n_(static_cast<int>(support.size())) {}

  // Returns row -> column matching, or empty if no perfect matching exists.
  std::vector<int> perfect_matching() {
    col_of_row_.assign(n_, -1);
    row_of_col_.assign(n_, -1);
    for (int r = 0; r < n_; ++r) {
      visited_.assign(n_, false);
      if (!augment(r)) return {};
    }
    return col_of_row_;
  }

 private:
  bool augment(int r) {
    for (int c = 0; c < n_; ++c) {
      if (!support_[r][c] || visited_[c]) continue;
      visited_[c] = true;
      if (row_of_col_[c] == -1 || augment(row_of_col_[c])) {
        col_of_row_[r] = c;
        row_of_col_[c] = r;
        return true;
      }
    }
    return false;
  }

  const std::vector<std::vector<bool>>& support_;
  int n_;
  std::vector<int> col_of_row_;
  std::vector<int> row_of_col_;
  std::vector<bool> visited_;
};

}  // namespace

std::vector<BirkhoffTerm> birkhoff(const Matrix& R) {
  require(R.rows() == R.cols() && R.rows() >= 1, "birkhoff: square input");
  require_finite(R, "birkhoff");
  const Eigen::Index n = R.rows();
  require(R.minCoeff() >= -1e-12, "birkhoff: negative entry");
  for (Eigen::Index i = 0; i < n; ++i) {
    require(std::abs(R.row(i).sum() - 1.0) <= 1e-9,
            "birkhoff: row sums must equal 1");
    require(std::abs(R.col(i).sum() - 1.0) <= 1e-9,
            "birkhoff: column sums must equal 1");
  }

  // Entries below 1e-12 of the running scale are treated as structural
  // zeros; strict zero-support tests are brittle after repeated subtraction.
  Matrix residual = R.cwiseMax(0.0);
  std::vector<BirkhoffTerm> terms;
  const size_t max_terms = static_cast<size_t>(n * n - 2 * n + 2);
  const double support_tol = 1e-12 * std::max(1.0, R.maxCoeff());

  while (residual.maxCoeff() > 1e-9) {
    std::vector<std::vector<bool>> support(
        static_cast<size_t>(n), std::vector<bool>(static_cast<size_t>(n)));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        support[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            residual(i, j) > support_tol;
      }
    }
    SupportMatcher matcher(support);
    std::vector<int> perm = matcher.perfect_matching();
    require(!perm.empty(),
            "birkhoff: no perfect matching on support graph (numerical "
            "degeneracy)");

    double alpha = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      alpha = std::min(alpha, residual(i, perm[static_cast<size_t>(i)]));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      double& cell = residual(i, perm[static_cast<size_t>(i)]);
      cell = std::max(0.0, cell - alpha);
    }
    terms.push_back(BirkhoffTerm{alpha, perm});
    require(terms.size() <= max_terms + 1,
            "birkhoff: exceeded the n^2-2n+2 term bound (numerical "
            "degeneracy)");
  }
  return terms;
}

std::vector<PairwiseTerm> decompose_zero_excess(const SymMatrix& T2) {
  const Eigen::Index n = T2.dim();
  require(n >= 1, "decompose_zero_excess: empty matrix");
  require(is_zero_excess_dh(T2.mat()),
          "decompose_zero_excess: input must be symmetric doubly "
          "hyperdominant with zero row sums");

  const double r = T2.mat().maxCoeff();
  if (r <= 1e-14) return {};  // T2 = 0 up to tolerance

  const Matrix R = (Matrix::Identity(n, n) - T2.mat() / r).cwiseMax(0.0);
  const std::vector<BirkhoffTerm> bterms = birkhoff(R);

  // T2 = sum_k beta_k (2I - P_k - P_k^T) with beta_k = r*alpha_k/2; each
  // permutation expands into one pairwise term per non-fixed point.
  std::map<std::pair<int, int>, double> merged;
  for (const BirkhoffTerm& bt : bterms) {
    const double beta = 0.5 * r * bt.alpha;
    for (int i = 0; i < static_cast<int>(bt.perm.size()); ++i) {
      const int j = bt.perm[static_cast<size_t>(i)];
      if (j == i) continue;
      merged[{std::min(i, j), std::max(i, j)}] += beta;
    }
  }

  std::vector<PairwiseTerm> out;
  out.reserve(merged.size());
  for (const auto& [key, lambda] : merged) {
    out.push_back(PairwiseTerm{lambda, key.first, key.second});
  }
  return out;
}

SymMatrix reconstruct(const std::vector<PairwiseTerm>& terms, Eigen::Index n) {
  Matrix sum = Matrix::Zero(n, n);
  for (const PairwiseTerm& t : terms) {
    require(t.i >= 0 && t.j >= 0 && t.i < n && t.j < n && t.i != t.j,
            "reconstruct: index out of range");
    sum(t.i, t.i) += t.lambda;
    sum(t.j, t.j) += t.lambda;
    sum(t.i, t.j) -= t.lambda;
    sum(t.j, t.i) -= t.lambda;
  }
  return SymMatrix::from_symmetric_expr(sum);
}

}  // namespace reluqc
