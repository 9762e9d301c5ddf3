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
//
// Primal-dual interior-point method (HKM search direction with Mehrotra
// predictor-corrector) for small dense block SDPs in the form
//
//   minimize c.y   s.t.   B_b(y) = C_b + sum_k y_k G_bk  PSD  for all b.
//
// The slack Z_b tracks B_b(y) through an infeasible-start iteration; Y_b are
// the dual blocks. The Schur complement is formed densely, which is the
// right trade-off at the problem sizes this library targets.

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "sdp_flat.hpp"

namespace reluqc::sdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct DenseState {
  Eigen::Index size;
  Matrix C;
  std::vector<std::pair<int, Matrix>> G;
  Matrix Z, Y;
  Matrix Zinv;
  Matrix Rp;           // C + sum y G - Z
  Matrix dZ, dY;       // current search direction
  Matrix dZa, dYa;     // affine (predictor) direction
  std::vector<Matrix> Ht;  // Y * G_k * Zinv per term, rebuilt each iteration
};

struct DiagState {
  Eigen::Index size;
  Vector C;
  std::vector<std::pair<int, Vector>> g;
  Vector z, y;
  Vector rp;
  Vector dz, dy;
  Vector dza, dya;
};

double sym_min_eig(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.transpose()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Largest step alpha with Z + alpha*dZ staying PSD.
double step_to_boundary(const Matrix& Z, const Matrix& dZ) {
  Eigen::LLT<Matrix> llt(Z);
  if (llt.info() != Eigen::Success) return 0.0;
  Matrix W = llt.matrixL().solve(dZ);
  W = llt.matrixL().solve(W.transpose()).transpose();
  const double lmin = sym_min_eig(W);
  if (lmin >= -1e-14) return kInf;
  return -1.0 / lmin;
}

double step_to_boundary_diag(const Vector& z, const Vector& dz) {
  double alpha = kInf;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (dz[i] < 0.0) alpha = std::min(alpha, -z[i] / dz[i]);
  }
  return alpha;
}

struct Residuals {
  double pobj = 0.0;
  double dobj = 0.0;
  double gap_abs = 0.0;
  double rel_gap = 0.0;
  double prim_res = 0.0;
  double dual_res = 0.0;
};

class Ipm {
 public:
  Ipm(const FlatSdp& flat, const SolveOptions& opts)
      : opts_(opts), m_(flat.num_vars) {
    // Block scaling: divide every block by its data magnitude; variable
    // scaling: normalize each variable's largest coefficient to 1.
    var_scale_ = Vector::Ones(m_);
    c_ = flat.c;

    for (const auto& b : flat.dense) {
      DenseState s;
      s.size = b.size;
      double rho = b.C.norm();
      for (const auto& [k, G] : b.terms) rho = std::max(rho, G.norm());
      rho = std::max(rho, 1e-12);
      s.C = b.C / rho;
      for (const auto& [k, G] : b.terms) s.G.emplace_back(k, G / rho);
      dense_.push_back(std::move(s));
    }
    for (const auto& b : flat.diag) {
      DiagState s;
      s.size = b.size;
      double rho = std::max(1e-12, b.C.size() ? b.C.cwiseAbs().maxCoeff() : 0.0);
      for (const auto& [k, v] : b.terms) {
        rho = std::max(rho, v.cwiseAbs().maxCoeff());
      }
      rho = std::max(rho, 1e-12);
      s.C = b.C / rho;
      for (const auto& [k, v] : b.terms) s.g.emplace_back(k, v / rho);
      diag_.push_back(std::move(s));
    }

    for (int k = 0; k < m_; ++k) {
      double mx = 0.0;
      for (const auto& s : dense_) {
        for (const auto& [kk, G] : s.G) {
          if (kk == k) mx = std::max(mx, G.norm());
        }
      }
      for (const auto& s : diag_) {
        for (const auto& [kk, v] : s.g) {
          if (kk == k) mx = std::max(mx, v.cwiseAbs().maxCoeff());
        }
      }
      var_scale_[k] = std::max(mx, 1e-12);
    }
    for (auto& s : dense_) {
      for (auto& [k, G] : s.G) G /= var_scale_[k];
    }
    for (auto& s : diag_) {
      for (auto& [k, v] : s.g) v /= var_scale_[k];
    }
    for (int k = 0; k < m_; ++k) c_[k] /= var_scale_[k];
    obj_scale_ = std::max(1.0, c_.cwiseAbs().maxCoeff());
    c_ /= obj_scale_;

    total_dim_ = 0;
    for (const auto& s : dense_) total_dim_ += s.size;
    for (const auto& s : diag_) total_dim_ += s.size;
  }

  FlatSolution run() {
    initialize();
    FlatSolution best;
    best.status = SolveStatus::kFailed;
    double best_score = kInf;

    const bool verbose = std::getenv("RELUQC_SDP_VERBOSE") != nullptr;
    for (int iter = 0; iter < opts_.max_iter; ++iter) {
      compute_residuals();
      const Residuals r = measure();
      if (verbose) {
        std::fprintf(stderr,
                     "it %3d pobj %.6e dobj %.6e gap %.2e pres %.2e dres "
                     "%.2e\n",
                     iter, r.pobj, r.dobj, r.rel_gap, r.prim_res, r.dual_res);
      }

      // Track the best iterate seen, scored by worst violation.
      const double score =
          std::max({r.rel_gap, r.prim_res, r.dual_res});
      if (score < best_score) {
        best_score = score;
        best = snapshot(r, iter);
      }

      const double stop_tol = std::min(opts_.feas_tol, 1e-8);
      if (r.rel_gap <= stop_tol && r.prim_res <= stop_tol &&
          r.dual_res <= stop_tol) {
        best = snapshot(r, iter);
        best.status = SolveStatus::kOptimal;
        return finalize(best);
      }

      if (auto st = detect_rays(r)) {
        best.status = *st;
        best.diagnostic = ray_diag_;
        return finalize(best);
      }

      if (!iterate(iter)) {
        best.status =
            best_score <= 1e-5 ? SolveStatus::kInaccurate : SolveStatus::kFailed;
        if (best.diagnostic.empty()) {
          best.diagnostic = "numerical breakdown in interior-point iteration";
        }
        return finalize(best);
      }
    }

    best.status =
        best_score <= 1e-5 ? SolveStatus::kInaccurate : SolveStatus::kFailed;
    best.diagnostic = "iteration limit reached";
    return finalize(best);
  }

 private:
  void initialize() {
    y_ = Vector::Zero(m_);
    double cmax = c_.size() ? c_.cwiseAbs().maxCoeff() : 0.0;
    for (auto& s : dense_) {
      const double n = static_cast<double>(s.size);
      double zeta = std::max({10.0, std::sqrt(n), s.C.norm() * 2.0});
      double eta = std::max({10.0, std::sqrt(n), (1.0 + cmax) * std::sqrt(n)});
      s.Z = zeta * Matrix::Identity(s.size, s.size);
      s.Y = eta * Matrix::Identity(s.size, s.size);
    }
    for (auto& s : diag_) {
      const double n = std::max(1.0, static_cast<double>(s.size));
      double zeta = std::max({10.0, std::sqrt(n),
                              s.C.size() ? 2.0 * s.C.cwiseAbs().maxCoeff() : 0.0});
      double eta = std::max(10.0, (1.0 + cmax) * std::sqrt(n));
      s.z = Vector::Constant(s.size, zeta);
      s.y = Vector::Constant(s.size, eta);
    }
  }

  void compute_residuals() {
    for (auto& s : dense_) {
      Matrix B = s.C;
      for (const auto& [k, G] : s.G) B += y_[k] * G;
      s.Rp = B - s.Z;
    }
    for (auto& s : diag_) {
      Vector b = s.C;
      for (const auto& [k, g] : s.g) b += y_[k] * g;
      s.rp = b - s.z;
    }
    rd_ = c_;
    for (const auto& s : dense_) {
      for (const auto& [k, G] : s.G) rd_[k] -= (G.cwiseProduct(s.Y)).sum();
    }
    for (const auto& s : diag_) {
      for (const auto& [k, g] : s.g) rd_[k] -= g.dot(s.y);
    }
  }

  Residuals measure() const {
    Residuals r;
    r.pobj = c_.dot(y_);
    double dual = 0.0;
    for (const auto& s : dense_) dual -= (s.C.cwiseProduct(s.Y)).sum();
    for (const auto& s : diag_) dual -= s.C.dot(s.y);
    r.dobj = dual;
    double gap = 0.0;
    for (const auto& s : dense_) gap += (s.Z.cwiseProduct(s.Y)).sum();
    for (const auto& s : diag_) gap += s.z.dot(s.y);
    r.gap_abs = gap;
    r.rel_gap = std::abs(r.pobj - r.dobj) /
                (1.0 + std::abs(r.pobj) + std::abs(r.dobj));
    double pr = 0.0;
    for (const auto& s : dense_) {
      pr = std::max(pr, s.Rp.cwiseAbs().maxCoeff());
    }
    for (const auto& s : diag_) {
      pr = std::max(pr, s.rp.size() ? s.rp.cwiseAbs().maxCoeff() : 0.0);
    }
    r.prim_res = pr;
    r.dual_res = rd_.size() ? rd_.cwiseAbs().maxCoeff() : 0.0;
    return r;
  }

  std::optional<SolveStatus> detect_rays(const Residuals& r) {
    // Dual improving ray => no feasible point.
    double trY = 0.0;
    for (const auto& s : dense_) trY += s.Y.trace();
    for (const auto& s : diag_) trY += s.y.sum();
    if (trY > 1e7) {
      double cy = 0.0;
      for (const auto& s : dense_) cy += (s.C.cwiseProduct(s.Y)).sum() / trY;
      for (const auto& s : diag_) cy += s.C.dot(s.y) / trY;
      Vector atY = Vector::Zero(m_);
      for (const auto& s : dense_) {
        for (const auto& [k, G] : s.G) atY[k] += (G.cwiseProduct(s.Y)).sum();
      }
      for (const auto& s : diag_) {
        for (const auto& [k, g] : s.g) atY[k] += g.dot(s.y);
      }
      const double viol = atY.size() ? atY.cwiseAbs().maxCoeff() / trY : 0.0;
      if (cy < -1e-9 && viol < 1e-7 * std::abs(cy) + 1e-12) {
        ray_diag_ = "dual improving ray found";
        return SolveStatus::kInfeasible;
      }
    }
    // Primal improving ray => objective unbounded below.
    const double ynorm = y_.size() ? y_.cwiseAbs().maxCoeff() : 0.0;
    if (ynorm > 1e7 && r.pobj < -1e7) {
      Vector yhat = y_ / ynorm;
      bool cone_ok = true;
      for (const auto& s : dense_) {
        Matrix dir = Matrix::Zero(s.size, s.size);
        for (const auto& [k, G] : s.G) dir += yhat[k] * G;
        if (sym_min_eig(dir) < -1e-7) cone_ok = false;
      }
      for (const auto& s : diag_) {
        Vector dir = Vector::Zero(s.size);
        for (const auto& [k, g] : s.g) dir += yhat[k] * g;
        if (dir.size() && dir.minCoeff() < -1e-7) cone_ok = false;
      }
      if (cone_ok && c_.dot(yhat) < -1e-9) {
        ray_diag_ = "primal improving ray found";
        return SolveStatus::kUnbounded;
      }
    }
    return std::nullopt;
  }

  // Builds the Schur complement and the shared per-iteration factors.
  bool prepare_system() {
    O_ = Matrix::Zero(m_, m_);
    h_ = Vector::Zero(m_);
    p_ = Vector::Zero(m_);
    for (auto& s : dense_) {
      Eigen::LLT<Matrix> llt(s.Z);
      if (llt.info() != Eigen::Success) return false;
      s.Zinv = llt.solve(Matrix::Identity(s.size, s.size));
      s.Ht.clear();
      s.Ht.reserve(s.G.size());
      for (const auto& [k, G] : s.G) {
        s.Ht.push_back(s.Y * G * s.Zinv);
      }
      const Matrix Wt = s.Y * s.Rp * s.Zinv;
      for (size_t a = 0; a < s.G.size(); ++a) {
        const int ka = s.G[a].first;
        const Matrix& Ga = s.G[a].second;
        h_[ka] += (Ga.cwiseProduct(s.Zinv)).sum();
        p_[ka] += (Ga.cwiseProduct(Wt)).sum();
        for (size_t b = a; b < s.G.size(); ++b) {
          const int kb = s.G[b].first;
          const double v = (Ga.cwiseProduct(s.Ht[b])).sum();
          O_(ka, kb) += v;
          if (ka != kb) O_(kb, ka) += v;
        }
      }
    }
    for (auto& s : diag_) {
      if (s.z.size() && s.z.minCoeff() <= 0.0) return false;
      const Vector w = s.y.cwiseQuotient(s.z);
      const Vector wt = w.cwiseProduct(s.rp);
      for (size_t a = 0; a < s.g.size(); ++a) {
        const int ka = s.g[a].first;
        const Vector& ga = s.g[a].second;
        h_[ka] += ga.cwiseQuotient(s.z).sum();
        p_[ka] += ga.dot(wt);
        for (size_t b = a; b < s.g.size(); ++b) {
          const int kb = s.g[b].first;
          const double v = ga.cwiseProduct(s.g[b].second).dot(w);
          O_(ka, kb) += v;
          if (ka != kb) O_(kb, ka) += v;
        }
      }
    }

    // Factor with escalating diagonal regularization.
    double shift = 0.0;
    const double base = std::max(1e-30, O_.trace() / std::max(1, m_));
    for (int attempt = 0; attempt < 6; ++attempt) {
      Matrix Oreg = O_;
      if (shift > 0.0) Oreg += shift * base * Matrix::Identity(m_, m_);
      schur_.compute(Oreg);
      if (schur_.info() == Eigen::Success && schur_.isPositive()) {
        if (shift > 0.0 && std::getenv("RELUQC_SDP_VERBOSE") != nullptr) {
          std::fprintf(stderr, "      schur regularized with shift %.1e\n",
                       shift * base);
        }
        return true;
      }
      shift = (shift == 0.0) ? 1e-14 : shift * 1e3;
    }
    return false;
  }

  // Solves O dx = rhs with two rounds of iterative refinement; the Schur
  // matrix turns ill-conditioned near the central path boundary and a plain
  // factor-solve loses several digits there.
  Vector solve_schur(const Vector& rhs) const {
    Vector dx = schur_.solve(rhs);
    for (int round = 0; round < 2; ++round) {
      Vector resid = rhs - O_ * dx;
      dx += schur_.solve(resid);
    }
    if (std::getenv("RELUQC_SDP_VERBOSE") != nullptr) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(O_, Eigen::EigenvaluesOnly);
      std::fprintf(stderr,
                   "      schur solve resid %.3e eigs [%.3e, %.3e]\n",
                   (rhs - O_ * dx).cwiseAbs().maxCoeff(),
                   es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff());
    }
    return dx;
  }

  // One predictor-corrector iteration. Returns false on breakdown.
  bool iterate(int iter) {
    if (!prepare_system()) return false;

    const double mu = current_mu();

    // Predictor: pure Newton step toward complementarity zero.
    Vector rhs(m_);
    for (int k = 0; k < m_; ++k) rhs[k] = -c_[k] - p_[k];
    Vector dya_y = solve_schur(rhs);
    form_direction(dya_y, /*sigma_mu=*/0.0, /*corrector=*/false);
    for (auto& s : dense_) {
      s.dZa = s.dZ;
      s.dYa = s.dY;
    }
    for (auto& s : diag_) {
      s.dza = s.dz;
      s.dya = s.dy;
    }
    if (std::getenv("RELUQC_SDP_VERBOSE") != nullptr) {
      Vector check = Vector::Zero(m_);
      for (const auto& s : dense_) {
        for (const auto& [k, G] : s.G) check[k] += (G.cwiseProduct(s.dY)).sum();
      }
      for (const auto& s : diag_) {
        for (const auto& [k, g] : s.g) check[k] += g.dot(s.dy);
      }
      std::fprintf(stderr, "      predictor newton-err %.3e\n",
                   (check - rd_).cwiseAbs().maxCoeff());
    }

    const auto [ap_aff, ad_aff] = max_steps(1.0);
    const double gap_aff = predicted_gap(std::min(1.0, ap_aff),
                                         std::min(1.0, ad_aff));
    const double gap_now = current_gap();
    double sigma = std::pow(std::max(gap_aff, 0.0) / std::max(gap_now, 1e-300), 3.0);
    sigma = std::clamp(sigma, 1e-6, 1.0);

    // Corrector with Mehrotra second-order term.
    Vector q = Vector::Zero(m_);
    for (auto& s : dense_) {
      const Matrix Ut = s.dYa * s.dZa * s.Zinv;
      for (size_t a = 0; a < s.G.size(); ++a) {
        q[s.G[a].first] += (s.G[a].second.cwiseProduct(Ut)).sum();
      }
    }
    for (auto& s : diag_) {
      const Vector ut = s.dya.cwiseProduct(s.dza).cwiseQuotient(s.z);
      for (size_t a = 0; a < s.g.size(); ++a) {
        q[s.g[a].first] += s.g[a].second.dot(ut);
      }
    }
    const double sigma_mu = sigma * mu;
    for (int k = 0; k < m_; ++k) rhs[k] = sigma_mu * h_[k] - c_[k] - p_[k] - q[k];
    Vector dy = solve_schur(rhs);
    form_direction(dy, sigma_mu, /*corrector=*/true);

    const double tau = iter < 3 ? 0.9 : 0.98;
    auto [ap, ad] = max_steps(tau);
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);
    if (std::getenv("RELUQC_SDP_VERBOSE") != nullptr) {
      // Check the linearized dual-feasibility identity sum G.dY = rd.
      Vector check = Vector::Zero(m_);
      for (const auto& s : dense_) {
        for (const auto& [k, G] : s.G) check[k] += (G.cwiseProduct(s.dY)).sum();
      }
      for (const auto& s : diag_) {
        for (const auto& [k, g] : s.g) check[k] += g.dot(s.dy);
      }
      std::fprintf(stderr,
                   "      sigma %.3e ap %.3e ad %.3e newton-err %.3e\n", sigma,
                   ap, ad, (check - rd_).cwiseAbs().maxCoeff());
    }
    if (!(ap > 1e-12 && ad > 1e-12)) return false;

    y_ += ap * dy;
    for (auto& s : dense_) {
      s.Z += ap * s.dZ;
      s.Y += ad * s.dY;
      s.Z = 0.5 * (s.Z + s.Z.transpose());
      s.Y = 0.5 * (s.Y + s.Y.transpose());
    }
    for (auto& s : diag_) {
      s.z += ap * s.dz;
      s.y += ad * s.dy;
    }
    if (!y_.allFinite()) return false;
    return true;
  }

  // Assembles dZ and dY from the solved dx. corrector=false gives the
  // affine direction (sigma_mu = 0, no second-order term).
  void form_direction(const Vector& dx, double sigma_mu, bool corrector) {
    for (auto& s : dense_) {
      s.dZ = s.Rp;
      for (const auto& [k, G] : s.G) s.dZ += dx[k] * G;
      Matrix rhsm = -s.dZ * s.Y;
      if (corrector) rhsm -= s.dZa * s.dYa;
      s.dY = sigma_mu * s.Zinv - s.Y + s.Zinv * rhsm;
      s.dY = 0.5 * (s.dY + s.dY.transpose());
    }
    for (auto& s : diag_) {
      s.dz = s.rp;
      for (const auto& [k, g] : s.g) s.dz += dx[k] * g;
      Vector rhsv = -s.dz.cwiseProduct(s.y);
      if (corrector) rhsv -= s.dza.cwiseProduct(s.dya);
      s.dy = Vector::Constant(s.size, sigma_mu).cwiseQuotient(s.z) - s.y +
             rhsv.cwiseQuotient(s.z);
    }
  }

  std::pair<double, double> max_steps(double tau) const {
    double ap = kInf, ad = kInf;
    for (const auto& s : dense_) {
      ap = std::min(ap, step_to_boundary(s.Z, s.dZ));
      ad = std::min(ad, step_to_boundary(s.Y, s.dY));
    }
    for (const auto& s : diag_) {
      ap = std::min(ap, step_to_boundary_diag(s.z, s.dz));
      ad = std::min(ad, step_to_boundary_diag(s.y, s.dy));
    }
    return {tau * ap, tau * ad};
  }

  double current_gap() const {
    double gap = 0.0;
    for (const auto& s : dense_) gap += (s.Z.cwiseProduct(s.Y)).sum();
    for (const auto& s : diag_) gap += s.z.dot(s.y);
    return gap;
  }

  double current_mu() const {
    return current_gap() / std::max<Eigen::Index>(1, total_dim_);
  }

  double predicted_gap(double ap, double ad) const {
    double gap = 0.0;
    for (const auto& s : dense_) {
      gap += ((s.Z + ap * s.dZ).cwiseProduct(s.Y + ad * s.dY)).sum();
    }
    for (const auto& s : diag_) {
      gap += (s.z + ap * s.dz).dot(s.y + ad * s.dy);
    }
    return gap;
  }

  FlatSolution snapshot(const Residuals& r, int iter) const {
    FlatSolution out;
    out.y = y_;
    out.objective = r.pobj;
    out.primal_residual = r.prim_res;
    out.dual_residual = r.dual_res;
    out.gap = r.rel_gap;
    out.iterations = iter;
    return out;
  }

  FlatSolution finalize(FlatSolution s) const {
    // Undo variable and objective scaling.
    if (s.y.size() != m_) s.y = Vector::Zero(m_);
    Vector x = s.y;
    for (int k = 0; k < m_; ++k) x[k] = s.y[k] / var_scale_[k];
    s.y = x;
    s.objective *= obj_scale_;
    return s;
  }

  SolveOptions opts_;
  int m_ = 0;
  Eigen::Index total_dim_ = 0;
  std::vector<DenseState> dense_;
  std::vector<DiagState> diag_;
  Vector c_;
  Vector var_scale_;
  double obj_scale_ = 1.0;

  Vector y_, rd_;
  Matrix O_;
  Vector h_, p_;
  Eigen::LDLT<Matrix> schur_;
  std::string ray_diag_;
};

}  // namespace

FlatSolution solve_flat(const FlatSdp& flat, const SolveOptions& opts) {
  if (flat.num_vars == 0) {
    FlatSolution s;
    s.status = SolveStatus::kOptimal;
    s.y = Vector::Zero(0);
    s.objective = 0.0;
    return s;
  }
  Ipm ipm(flat, opts);
  FlatSolution s = ipm.run();
  // Report the objective including the affine offset from eliminated
  // variables.
  if (s.status == SolveStatus::kOptimal || s.status == SolveStatus::kInaccurate) {
    s.objective += flat.c0;
  }
  return s;
}

}  // namespace reluqc::sdp
