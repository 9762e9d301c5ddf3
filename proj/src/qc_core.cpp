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
#include "reluqc/qc_core.hpp"

namespace reluqc {

double qc_form(const QcMatrix& M, const Vector& v, const Vector& w) {
  require(v.size() == M.nv && w.size() == M.nv,
          "qc_form: v and w must have dimension nv");
  Vector z(2 * M.nv);
  z << v, w;
  return z.dot(M.m.mat() * z);
}

double inc_qc_form(const QcMatrix& M, const Vector& vbar, const Vector& vhat,
                   const Vector& wbar, const Vector& what) {
  require(vbar.size() == M.nv && vhat.size() == M.nv && wbar.size() == M.nv &&
              what.size() == M.nv,
          "inc_qc_form: all vectors must have dimension nv");
  return qc_form(M, vbar - vhat, wbar - what);
}

Matrix orthant_selector(const SignPattern& D) {
  const Eigen::Index n = D.dim();
  Matrix s = Matrix::Zero(2 * n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s(i, i) = D.sign(i);
    s(n + i, i) = 0.5 * (1.0 + D.sign(i));
  }
  return s;
}

Matrix orthant_selector_inc(const SignPattern& D1, const SignPattern& D2) {
  require(D1.dim() == D2.dim(), "orthant_selector_inc: pattern dims differ");
  const Eigen::Index n = D1.dim();
  Matrix s = Matrix::Zero(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s(i, i) = D1.sign(i);
    s(i, n + i) = -D2.sign(i);
    s(n + i, i) = 0.5 * (1.0 + D1.sign(i));
    s(n + i, n + i) = -0.5 * (1.0 + D2.sign(i));
  }
  return s;
}

SymMatrix sign_scale(const QcMatrix& M, const SignPattern& D) {
  require(D.dim() == M.nv, "sign_scale: pattern dim must equal nv");
  const Matrix s = orthant_selector(D);
  return SymMatrix::from_symmetric_expr(s.transpose() * M.m.mat() * s);
}

SymMatrix sign_scale_inc(const QcMatrix& M, const SignPattern& D1,
                         const SignPattern& D2) {
  require(D1.dim() == M.nv && D2.dim() == M.nv,
          "sign_scale_inc: pattern dims must equal nv");
  const Matrix s = orthant_selector_inc(D1, D2);
  return SymMatrix::from_symmetric_expr(s.transpose() * M.m.mat() * s);
}

}  // namespace reluqc
