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
#ifndef RELUQC_SDP_HPP_
#define RELUQC_SDP_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reluqc/types.hpp"

namespace reluqc::sdp {

/// Kind of a decision block.
enum class BlockKind {
  kSymmetric,      // free symmetric matrix
  kDiagonal,       // free diagonal matrix
  kScalar,         // single real
  kNonnegSymmetric // symmetric with every entry >= 0
};

struct VarBlock {
  std::string name;
  BlockKind kind = BlockKind::kScalar;
  Eigen::Index dim = 1;
  int first_var = 0;  // first scalar decision variable owned by this block
  int num_vars = 0;
};

/// Affine matrix-valued expression in the scalar decision variables of an
/// SdpProblem: constant + sum_k x_k * coeff_k. Shapes are checked on every
/// operation; only affine compositions are representable.
class MatExpr {
 public:
  MatExpr() = default;
  explicit MatExpr(Matrix constant) : rows_(constant.rows()), cols_(constant.cols()), constant_(std::move(constant)) {}
  static MatExpr zero(Eigen::Index rows, Eigen::Index cols) {
    return MatExpr(Matrix::Zero(rows, cols));
  }
  static MatExpr constant(const Matrix& c) { return MatExpr(c); }

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  const Matrix& constant_part() const { return constant_; }
  const std::map<int, Matrix>& coefficients() const { return coeffs_; }

  MatExpr operator+(const MatExpr& other) const;
  MatExpr operator-(const MatExpr& other) const;
  MatExpr operator-() const;
  MatExpr scaled(double s) const;
  MatExpr left_multiplied(const Matrix& a) const;   // a * expr
  MatExpr right_multiplied(const Matrix& b) const;  // expr * b
  MatExpr transposed() const;
  /// t^T * expr * t for fixed t.
  MatExpr congruence(const Matrix& t) const;
  MatExpr block(Eigen::Index i, Eigen::Index j, Eigen::Index p,
                Eigen::Index q) const;

  /// Assembles a block grid; each row of the grid must agree on heights,
  /// each column on widths.
  static MatExpr from_blocks(const std::vector<std::vector<MatExpr>>& grid);

  void add_term(int var, const Matrix& coeff);

 private:
  Eigen::Index rows_ = 0, cols_ = 0;
  Matrix constant_;
  std::map<int, Matrix> coeffs_;
};

struct Constraint {
  enum class Sense { kPsd, kEqZero };
  Sense sense = Sense::kPsd;
  MatExpr expr;
};

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kInaccurate, kFailed };

const char* to_string(SolveStatus s);

struct SolveOptions {
  double feas_tol = 1e-8;
  int max_iter = 200;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kFailed;
  double objective = 0.0;
  std::map<std::string, Matrix> assignments;
  double primal_residual = 0.0;  // worst consistency residual of the iterate
  double dual_residual = 0.0;
  double gap = 0.0;  // relative duality gap at termination
  int iterations = 0;
  std::string diagnostic;
};

/// Declarative SDP: named decision blocks, affine matrix constraints
/// (>= 0 in the PSD sense, or == 0), and a linear objective over scalar and
/// diagonal variables. Equality constraints are eliminated before solving;
/// the baseline engine is an in-tree primal-dual interior-point method for
/// small dense problems.
class SdpProblem {
 public:
  int add_symmetric(const std::string& name, Eigen::Index dim);
  int add_diagonal(const std::string& name, Eigen::Index dim);
  int add_scalar(const std::string& name);
  int add_nonneg_symmetric(const std::string& name, Eigen::Index dim);

  /// Affine expression representing the block's matrix value (dim x dim;
  /// 1 x 1 for scalars).
  MatExpr var(int block) const;

  /// x * coeff for a scalar block x and a fixed matrix coeff.
  MatExpr scalar_times(int scalar_block, const Matrix& coeff) const;

  void add_psd(const MatExpr& expr);      // expr >= 0 (PSD)
  void add_eq_zero(const MatExpr& expr);  // expr == 0
  /// Minimize coeff * (scalar block value). May be called repeatedly to
  /// accumulate a linear objective; add_objective_entry targets one diagonal
  /// entry of a diagonal block.
  void add_objective(int scalar_block, double coeff);
  void add_objective_entry(int block, Eigen::Index entry, double coeff);

  const std::vector<VarBlock>& blocks() const { return blocks_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  int num_vars() const { return num_vars_; }
  const std::map<int, double>& objective() const { return objective_; }
  int block_index(const std::string& name) const;

  SolveResult solve(const SolveOptions& opts = {}) const;

 private:
  std::vector<VarBlock> blocks_;
  std::vector<Constraint> constraints_;
  std::map<int, double> objective_;  // scalar var -> coefficient
  int num_vars_ = 0;
};

/// Sparse SDPA (.dat-s) text for the compiled problem: variable count,
/// block structure line (diagonal blocks negative), objective row, then one
/// "matno blkno i j value" entry per line, upper triangle only, 1-based.
std::string export_sdpa(const SdpProblem& p);

/// Parses sparse SDPA text back into an equivalent problem over scalar
/// variables x1..xm.
SdpProblem import_sdpa(const std::string& text);

}  // namespace reluqc::sdp

#endif  // RELUQC_SDP_HPP_
