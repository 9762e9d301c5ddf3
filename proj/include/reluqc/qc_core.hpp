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
#ifndef RELUQC_QC_CORE_HPP_
#define RELUQC_QC_CORE_HPP_

#include "reluqc/types.hpp"

namespace reluqc {

/// Quadratic form [v; w]^T M [v; w].
double qc_form(const QcMatrix& M, const Vector& v, const Vector& w);

/// Incremental quadratic form on the difference of two input/output pairs:
/// [vbar - vhat; wbar - what]^T M [vbar - vhat; wbar - what].
double inc_qc_form(const QcMatrix& M, const Vector& vbar, const Vector& vhat,
                   const Vector& wbar, const Vector& what);

/// Orthant scaling M_D = [D; (I+D)/2]^T M [D; (I+D)/2], an nv x nv symmetric
/// matrix. A QC matrix is valid for the repeated ReLU exactly when M_D is
/// copositive for every sign pattern D.
SymMatrix sign_scale(const QcMatrix& M, const SignPattern& D);

/// Incremental orthant scaling: the 2nv x 2nv matrix
///   [D1, -D2; (I+D1)/2, -(I+D2)/2]^T M [D1, -D2; (I+D1)/2, -(I+D2)/2].
/// Equals sign_scale applied to the lifted matrix R^T M R with
/// D = blkdiag(D1, D2) and R = [I -I 0 0; 0 0 I -I].
SymMatrix sign_scale_inc(const QcMatrix& M, const SignPattern& D1,
                         const SignPattern& D2);

/// The 2nv x 2nv selector [D; (I+D)/2] stacked as a dense matrix (column
/// dimension nv).
Matrix orthant_selector(const SignPattern& D);

/// The 4nv x 2nv incremental selector used by sign_scale_inc.
Matrix orthant_selector_inc(const SignPattern& D1, const SignPattern& D2);

}  // namespace reluqc

#endif  // RELUQC_QC_CORE_HPP_
