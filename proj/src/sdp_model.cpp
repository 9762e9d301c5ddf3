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
#include <algorithm>

#include "reluqc/sdp.hpp"
#include "sdp_flat.hpp"

namespace reluqc::sdp {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kInaccurate: return "inaccurate";
    case SolveStatus::kFailed: return "failed";
  }
  return "failed";
}

MatExpr MatExpr::operator+(const MatExpr& other) const {
  require(rows_ == other.rows_ && cols_ == other.cols_,
          "MatExpr: shape mismatch in addition");
  MatExpr out = *this;
  out.constant_ += other.constant_;
  for (const auto& [var, coeff] : other.coeffs_) {
    auto it = out.coeffs_.find(var);
    if (it == out.coeffs_.end()) {
      out.coeffs_.emplace(var, coeff);
    } else {
      it->second += coeff;
    }
  }
  return out;
}

MatExpr MatExpr::operator-(const MatExpr& other) const {
  return *this + other.scaled(-1.0);
}

MatExpr MatExpr::operator-() const { return scaled(-1.0); }

MatExpr MatExpr::scaled(double s) const {
  MatExpr out = *this;
  out.constant_ *= s;
  for (auto& [var, coeff] : out.coeffs_) coeff *= s;
  return out;
}

MatExpr MatExpr::left_multiplied(const Matrix& a) const {
  require(a.cols() == rows_, "MatExpr: shape mismatch in left multiply");
  MatExpr out;
  out.rows_ = a.rows();
  out.cols_ = cols_;
  out.constant_ = a * constant_;
  for (const auto& [var, coeff] : coeffs_) out.coeffs_.emplace(var, a * coeff);
  return out;
}

MatExpr MatExpr::right_multiplied(const Matrix& b) const {
  require(cols_ == b.rows(), "MatExpr: shape mismatch in right multiply");
  MatExpr out;
  out.rows_ = rows_;
  out.cols_ = b.cols();
  out.constant_ = constant_ * b;
  for (const auto& [var, coeff] : coeffs_) out.coeffs_.emplace(var, coeff * b);
  return out;
}

MatExpr MatExpr::transposed() const {
  MatExpr out;
  out.rows_ = cols_;
  out.cols_ = rows_;
  out.constant_ = constant_.transpose();
  for (const auto& [var, coeff] : coeffs_) {
    out.coeffs_.emplace(var, coeff.transpose());
  }
  return out;
}

MatExpr MatExpr::congruence(const Matrix& t) const {
  return left_multiplied(t.transpose()).right_multiplied(t);
}

MatExpr MatExpr::block(Eigen::Index i, Eigen::Index j, Eigen::Index p,
                       Eigen::Index q) const {
  require(i >= 0 && j >= 0 && i + p <= rows_ && j + q <= cols_,
          "MatExpr: block out of range");
  MatExpr out;
  out.rows_ = p;
  out.cols_ = q;
  out.constant_ = constant_.block(i, j, p, q);
  for (const auto& [var, coeff] : coeffs_) {
    out.coeffs_.emplace(var, coeff.block(i, j, p, q));
  }
  return out;
}

MatExpr MatExpr::from_blocks(const std::vector<std::vector<MatExpr>>& grid) {
  require(!grid.empty() && !grid[0].empty(), "MatExpr: empty block grid");
  Eigen::Index total_rows = 0, total_cols = 0;
  for (const auto& e : grid[0]) total_cols += e.cols();
  for (const auto& row : grid) total_rows += row[0].rows();

  MatExpr out = MatExpr::zero(total_rows, total_cols);
  Eigen::Index r0 = 0;
  for (const auto& row : grid) {
    const Eigen::Index h = row[0].rows();
    Eigen::Index c0 = 0;
    for (const auto& e : row) {
      require(e.rows() == h, "MatExpr: inconsistent block heights");
      out.constant_.block(r0, c0, h, e.cols()) = e.constant_part();
      for (const auto& [var, coeff] : e.coefficients()) {
        auto it = out.coeffs_.find(var);
        if (it == out.coeffs_.end()) {
          it = out.coeffs_.emplace(var, Matrix::Zero(total_rows, total_cols))
                   .first;
        }
        it->second.block(r0, c0, h, e.cols()) += coeff;
      }
      c0 += e.cols();
    }
    require(c0 == total_cols, "MatExpr: inconsistent block widths");
    r0 += h;
  }
  return out;
}

void MatExpr::add_term(int var, const Matrix& coeff) {
  require(coeff.rows() == rows_ && coeff.cols() == cols_,
          "MatExpr: coefficient shape mismatch");
  auto it = coeffs_.find(var);
  if (it == coeffs_.end()) {
    coeffs_.emplace(var, coeff);
  } else {
    it->second += coeff;
  }
}

namespace {

int upper_triangle_count(Eigen::Index n) {
  return static_cast<int>(n * (n + 1) / 2);
}

}  // namespace

int SdpProblem::add_symmetric(const std::string& name, Eigen::Index dim) {
  require(dim >= 1, "add_symmetric: dim must be positive");
  blocks_.push_back(VarBlock{name, BlockKind::kSymmetric, dim, num_vars_,
                             upper_triangle_count(dim)});
  num_vars_ += blocks_.back().num_vars;
  return static_cast<int>(blocks_.size()) - 1;
}

int SdpProblem::add_diagonal(const std::string& name, Eigen::Index dim) {
  require(dim >= 1, "add_diagonal: dim must be positive");
  blocks_.push_back(
      VarBlock{name, BlockKind::kDiagonal, dim, num_vars_, static_cast<int>(dim)});
  num_vars_ += blocks_.back().num_vars;
  return static_cast<int>(blocks_.size()) - 1;
}

int SdpProblem::add_scalar(const std::string& name) {
  blocks_.push_back(VarBlock{name, BlockKind::kScalar, 1, num_vars_, 1});
  num_vars_ += 1;
  return static_cast<int>(blocks_.size()) - 1;
}

int SdpProblem::add_nonneg_symmetric(const std::string& name,
                                     Eigen::Index dim) {
  require(dim >= 1, "add_nonneg_symmetric: dim must be positive");
  blocks_.push_back(VarBlock{name, BlockKind::kNonnegSymmetric, dim, num_vars_,
                             upper_triangle_count(dim)});
  num_vars_ += blocks_.back().num_vars;
  return static_cast<int>(blocks_.size()) - 1;
}

MatExpr SdpProblem::var(int block) const {
  require(block >= 0 && block < static_cast<int>(blocks_.size()),
          "var: unknown block");
  const VarBlock& b = blocks_[static_cast<size_t>(block)];
  MatExpr out = MatExpr::zero(b.dim, b.dim);
  int k = b.first_var;
  switch (b.kind) {
    case BlockKind::kSymmetric:
    case BlockKind::kNonnegSymmetric:
      for (Eigen::Index p = 0; p < b.dim; ++p) {
        for (Eigen::Index q = p; q < b.dim; ++q) {
          Matrix coeff = Matrix::Zero(b.dim, b.dim);
          coeff(p, q) = 1.0;
          coeff(q, p) = 1.0;  // overwrites to 1.0 on the diagonal
          out.add_term(k++, coeff);
        }
      }
      break;
    case BlockKind::kDiagonal:
      for (Eigen::Index p = 0; p < b.dim; ++p) {
        Matrix coeff = Matrix::Zero(b.dim, b.dim);
        coeff(p, p) = 1.0;
        out.add_term(k++, coeff);
      }
      break;
    case BlockKind::kScalar: {
      Matrix coeff = Matrix::Identity(1, 1);
      out.add_term(k, coeff);
      break;
    }
  }
  return out;
}

MatExpr SdpProblem::scalar_times(int scalar_block, const Matrix& coeff) const {
  require(scalar_block >= 0 &&
              scalar_block < static_cast<int>(blocks_.size()) &&
              blocks_[static_cast<size_t>(scalar_block)].kind ==
                  BlockKind::kScalar,
          "scalar_times: block must be scalar");
  MatExpr out = MatExpr::zero(coeff.rows(), coeff.cols());
  out.add_term(blocks_[static_cast<size_t>(scalar_block)].first_var, coeff);
  return out;
}

void SdpProblem::add_psd(const MatExpr& expr) {
  require(expr.rows() == expr.cols(), "add_psd: expression must be square");
  constraints_.push_back(Constraint{Constraint::Sense::kPsd, expr});
}

void SdpProblem::add_eq_zero(const MatExpr& expr) {
  constraints_.push_back(Constraint{Constraint::Sense::kEqZero, expr});
}

void SdpProblem::add_objective(int scalar_block, double coeff) {
  require(scalar_block >= 0 && scalar_block < static_cast<int>(blocks_.size()),
          "add_objective: unknown block");
  const VarBlock& b = blocks_[static_cast<size_t>(scalar_block)];
  require(b.kind == BlockKind::kScalar,
          "add_objective: objective terms must target scalar blocks; use "
          "add_objective_entry for diagonal blocks");
  objective_[b.first_var] += coeff;
}

void SdpProblem::add_objective_entry(int block, Eigen::Index entry,
                                     double coeff) {
  require(block >= 0 && block < static_cast<int>(blocks_.size()),
          "add_objective_entry: unknown block");
  const VarBlock& b = blocks_[static_cast<size_t>(block)];
  require(b.kind == BlockKind::kDiagonal || b.kind == BlockKind::kScalar,
          "add_objective_entry: objective is linear over scalar/diagonal "
          "variables only");
  require(entry >= 0 && entry < b.num_vars, "add_objective_entry: bad entry");
  objective_[b.first_var + static_cast<int>(entry)] += coeff;
}

int SdpProblem::block_index(const std::string& name) const {
  for (size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].name == name) return static_cast<int>(i);
  }
  throw Error("block_index: no block named " + name);
}

namespace {

// Extracts the named block values from a full original-variable vector.
std::map<std::string, Matrix> extract_assignments(const SdpProblem& p,
                                                  const Vector& x) {
  std::map<std::string, Matrix> out;
  for (const VarBlock& b : p.blocks()) {
    Matrix value;
    int k = b.first_var;
    switch (b.kind) {
      case BlockKind::kSymmetric:
      case BlockKind::kNonnegSymmetric:
        value = Matrix::Zero(b.dim, b.dim);
        for (Eigen::Index pp = 0; pp < b.dim; ++pp) {
          for (Eigen::Index q = pp; q < b.dim; ++q) {
            value(pp, q) = x[k];
            value(q, pp) = x[k];
            ++k;
          }
        }
        break;
      case BlockKind::kDiagonal:
        value = Matrix::Zero(b.dim, b.dim);
        for (Eigen::Index pp = 0; pp < b.dim; ++pp) value(pp, pp) = x[k++];
        break;
      case BlockKind::kScalar:
        value = Matrix::Constant(1, 1, x[k]);
        break;
    }
    out[b.name] = value;
  }
  return out;
}

}  // namespace

SolveResult SdpProblem::solve(const SolveOptions& opts) const {
  FlatSdp flat = compile(*this);
  SolveResult result;
  if (flat.precompiled_status) {
    result.status = *flat.precompiled_status;
    result.diagnostic = flat.diagnostic;
    if (result.status == SolveStatus::kOptimal) {
      // Fully determined by equality constraints.
      Vector x = flat.particular;
      result.objective = flat.c0;
      result.assignments = extract_assignments(*this, x);
    }
    return result;
  }

  FlatSolution sol = solve_flat(flat, opts);
  result.status = sol.status;
  result.objective = sol.objective;
  result.primal_residual = sol.primal_residual;
  result.dual_residual = sol.dual_residual;
  result.gap = sol.gap;
  result.iterations = sol.iterations;
  result.diagnostic = sol.diagnostic;

  if (sol.status == SolveStatus::kOptimal ||
      sol.status == SolveStatus::kInaccurate) {
    const Vector x = flat.particular + flat.kernel * sol.y;
    result.assignments = extract_assignments(*this, x);

    // The status invariant: optimal means every PSD constraint clears
    // -feas_tol at the reported assignment.
    if (sol.status == SolveStatus::kOptimal) {
      for (const Constraint& con : constraints_) {
        Matrix value = con.expr.constant_part();
        for (const auto& [vid, coeff] : con.expr.coefficients()) {
          value += x[vid] * coeff;
        }
        if (con.sense == Constraint::Sense::kPsd) {
          const double mineig =
              SymMatrix::from_symmetric_expr(value).min_eigenvalue();
          if (mineig < -opts.feas_tol) {
            result.status = SolveStatus::kInaccurate;
            result.diagnostic = "constraint violated beyond feas_tol at "
                                "reported assignment";
            break;
          }
        }
      }
    }
  }
  return result;
}

FlatSdp compile(const SdpProblem& p) {
  FlatSdp flat;
  const int n_orig = p.num_vars();

  // Objective over original variables.
  Vector c_orig = Vector::Zero(n_orig);
  for (const auto& [var, coeff] : p.objective()) c_orig[var] = coeff;

  // Gather equality rows.
  std::vector<double> eq_rhs;
  int eq_rows = 0;
  std::vector<Matrix> eq_dense_rows;  // row-major coefficients
  for (const Constraint& con : p.constraints()) {
    if (con.sense != Constraint::Sense::kEqZero) continue;
    const MatExpr& e = con.expr;
    const bool square = e.rows() == e.cols();
    for (Eigen::Index i = 0; i < e.rows(); ++i) {
      for (Eigen::Index j = square ? i : Eigen::Index{0}; j < e.cols(); ++j) {
        Matrix row = Matrix::Zero(1, n_orig);
        for (const auto& [var, coeff] : e.coefficients()) {
          if (coeff(i, j) != 0.0) row(0, var) = coeff(i, j);
        }
        eq_dense_rows.push_back(row);
        eq_rhs.push_back(-e.constant_part()(i, j));
        ++eq_rows;
      }
    }
  }

  Vector particular = Vector::Zero(n_orig);
  Matrix kernel = Matrix::Identity(n_orig, n_orig);
  if (eq_rows > 0) {
    Matrix E(eq_rows, n_orig);
    Vector g(eq_rows);
    for (int r = 0; r < eq_rows; ++r) {
      E.row(r) = eq_dense_rows[static_cast<size_t>(r)];
      g[r] = eq_rhs[static_cast<size_t>(r)];
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(E);
    particular = cod.solve(g);
    const double res = (E * particular - g).norm();
    const double scale = std::max(1.0, g.norm());
    if (res > 1e-9 * scale) {
      flat.precompiled_status = SolveStatus::kInfeasible;
      flat.diagnostic = "inconsistent equality constraints";
      return flat;
    }
    // Nullspace basis of E.
    Eigen::FullPivLU<Matrix> lu(E);
    lu.setThreshold(1e-10);
    kernel = lu.kernel();
    if (lu.dimensionOfKernel() == 0) kernel = Matrix::Zero(n_orig, 0);
  }

  const int n_red = static_cast<int>(kernel.cols());

  // Lower PSD constraints into flat blocks over reduced variables.
  auto reduce_terms = [&](const MatExpr& e, Matrix& C_out,
                          std::vector<std::pair<int, Matrix>>& terms_out) {
    C_out = e.constant_part();
    for (const auto& [var, coeff] : e.coefficients()) {
      C_out += particular[var] * coeff;
    }
    C_out = 0.5 * (C_out + C_out.transpose());
    for (int k = 0; k < n_red; ++k) {
      Matrix G = Matrix::Zero(e.rows(), e.cols());
      bool nonzero = false;
      for (const auto& [var, coeff] : e.coefficients()) {
        const double w = kernel(var, k);
        if (w != 0.0) {
          G += w * coeff;
          nonzero = true;
        }
      }
      if (nonzero && G.cwiseAbs().maxCoeff() > 0.0) {
        terms_out.emplace_back(k, 0.5 * (G + G.transpose()));
      }
    }
  };

  for (const Constraint& con : p.constraints()) {
    if (con.sense != Constraint::Sense::kPsd) continue;
    require((con.expr.constant_part() -
             con.expr.constant_part().transpose()).cwiseAbs().maxCoeff() <=
                1e-9 * std::max(1.0, con.expr.constant_part().cwiseAbs().maxCoeff()),
            "compile: PSD constraint expression must be symmetric");
    FlatDenseBlock blk;
    blk.size = con.expr.rows();
    reduce_terms(con.expr, blk.C, blk.terms);
    flat.dense.push_back(std::move(blk));
  }

  // Elementwise-nonnegative blocks contribute one diagonal block holding all
  // their entries.
  std::vector<std::pair<int, double>> diag_entries;  // (orig var, lower bound)
  int nonneg_count = 0;
  for (const VarBlock& b : p.blocks()) {
    if (b.kind == BlockKind::kNonnegSymmetric) nonneg_count += b.num_vars;
  }
  if (nonneg_count > 0) {
    FlatDiagBlock dblk;
    dblk.size = nonneg_count;
    dblk.C = Vector::Zero(nonneg_count);
    std::map<int, Vector> term_map;
    int row = 0;
    for (const VarBlock& b : p.blocks()) {
      if (b.kind != BlockKind::kNonnegSymmetric) continue;
      for (int local = 0; local < b.num_vars; ++local) {
        const int var = b.first_var + local;
        dblk.C[row] += particular[var];
        for (int k = 0; k < n_red; ++k) {
          const double w = kernel(var, k);
          if (w != 0.0) {
            auto it = term_map.find(k);
            if (it == term_map.end()) {
              it = term_map.emplace(k, Vector::Zero(nonneg_count)).first;
            }
            it->second[row] += w;
          }
        }
        ++row;
      }
    }
    for (auto& [k, col] : term_map) dblk.terms.emplace_back(k, col);
    flat.diag.push_back(std::move(dblk));
  }

  // Reduced objective.
  flat.num_vars = n_red;
  flat.c = kernel.transpose() * c_orig;
  flat.c0 = c_orig.dot(particular);
  flat.particular = particular;
  flat.kernel = kernel;

  // Pin variables that appear nowhere.
  std::vector<bool> used(static_cast<size_t>(n_red), false);
  for (const auto& blk : flat.dense) {
    for (const auto& [k, G] : blk.terms) used[static_cast<size_t>(k)] = true;
  }
  for (const auto& blk : flat.diag) {
    for (const auto& [k, v] : blk.terms) used[static_cast<size_t>(k)] = true;
  }
  std::vector<int> keep;
  for (int k = 0; k < n_red; ++k) {
    if (used[static_cast<size_t>(k)]) {
      keep.push_back(k);
    } else if (flat.c[k] != 0.0) {
      flat.precompiled_status = SolveStatus::kUnbounded;
      flat.diagnostic = "objective weight on an unconstrained direction";
      return flat;
    }
  }
  if (static_cast<int>(keep.size()) < n_red) {
    Matrix sel = Matrix::Zero(n_red, static_cast<int>(keep.size()));
    for (size_t j = 0; j < keep.size(); ++j) sel(keep[j], static_cast<int>(j)) = 1.0;
    flat.kernel = flat.kernel * sel;
    flat.c = sel.transpose() * flat.c;
    auto remap = [&](int old_k) {
      return static_cast<int>(std::lower_bound(keep.begin(), keep.end(), old_k) -
                              keep.begin());
    };
    for (auto& blk : flat.dense) {
      for (auto& [k, G] : blk.terms) k = remap(k);
    }
    for (auto& blk : flat.diag) {
      for (auto& [k, v] : blk.terms) k = remap(k);
    }
    flat.num_vars = static_cast<int>(keep.size());
  }

  if (flat.num_vars == 0) {
    // Nothing to optimize: the problem is a pure feasibility check of
    // constants. Decide it here.
    bool ok = true;
    for (const auto& blk : flat.dense) {
      if (SymMatrix::from_symmetric_expr(blk.C).min_eigenvalue() < -1e-9) {
        ok = false;
      }
    }
    for (const auto& blk : flat.diag) {
      if (blk.size > 0 && blk.C.minCoeff() < -1e-9) ok = false;
    }
    flat.precompiled_status =
        ok ? SolveStatus::kOptimal : SolveStatus::kInfeasible;
    if (!ok) flat.diagnostic = "constant constraints are infeasible";
  }
  return flat;
}

}  // namespace reluqc::sdp
