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
#ifndef RELUQC_DH_HPP_
#define RELUQC_DH_HPP_

#include <vector>

#include "reluqc/types.hpp"

namespace reluqc {

/// One lambda * (e_i - e_j)(e_i - e_j)^T term, canonicalized to i < j.
struct PairwiseTerm {
  double lambda = 0.0;
  int i = 0;
  int j = 0;
};

/// One alpha * perm term of a Birkhoff decomposition; perm[i] is the column
/// carrying the 1 in row i of the permutation matrix.
struct BirkhoffTerm {
  double alpha = 0.0;
  std::vector<int> perm;
};

/// Doubly hyperdominant predicate: non-positive off-diagonal entries,
/// non-negative row and column sums. Tolerances: off-diagonal
/// <= 1e-12 * maxabs, sums >= -1e-10 * maxabs.
bool is_doubly_hyperdominant(const Matrix& Q);

/// Zero-excess variant: doubly hyperdominant with row sums equal to zero
/// (tolerance 1e-10 * maxabs).
bool is_zero_excess_dh(const Matrix& Q);

/// Birkhoff decomposition of a doubly stochastic matrix by greedy perfect
/// matching on the support graph. Subtracting the minimum matched entry
/// zeroes at least one entry per step, so at most n^2 - 2n + 2 terms are
/// produced and sum(alpha_k) = 1. When R is symmetric,
/// sum (alpha_k/2)(P_k + P_k^T) = R as well.
std::vector<BirkhoffTerm> birkhoff(const Matrix& R);

/// Constructive decomposition of a symmetric zero-excess doubly
/// hyperdominant T2 into nonnegative pairwise terms
///   T2 = sum lambda_ij (e_i - e_j)(e_i - e_j)^T.
/// Pipeline: r = max entry; T2 = r(I - R) with R symmetric doubly
/// stochastic; Birkhoff on R; expand each permutation into pairwise terms;
/// merge duplicates under i < j. T2 = 0 returns the empty list.
std::vector<PairwiseTerm> decompose_zero_excess(const SymMatrix& T2);

/// Sums the pairwise terms back into an n x n matrix; the decomposition
/// oracle used throughout the tests.
SymMatrix reconstruct(const std::vector<PairwiseTerm>& terms, Eigen::Index n);

}  // namespace reluqc

#endif  // RELUQC_DH_HPP_
