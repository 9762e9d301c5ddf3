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
#ifndef RELUQC_SRC_SDP_FLAT_HPP_
#define RELUQC_SRC_SDP_FLAT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "reluqc/sdp.hpp"

namespace reluqc::sdp {

// Compiled cone program over free scalar variables y:
//   minimize  c.y + c0   s.t.   C_b + sum_k y_k G_bk  PSD for every block b.
// Dense blocks carry symmetric matrices; diagonal blocks carry vectors.
struct FlatDenseBlock {
  Eigen::Index size = 0;
  Matrix C;                                   // constant part
  std::vector<std::pair<int, Matrix>> terms;  // (variable, coefficient)
};

struct FlatDiagBlock {
  Eigen::Index size = 0;
  Vector C;
  std::vector<std::pair<int, Vector>> terms;
};

struct FlatSdp {
  int num_vars = 0;
  Vector c;
  double c0 = 0.0;
  std::vector<FlatDenseBlock> dense;
  std::vector<FlatDiagBlock> diag;

  // Recovers the original variable vector from the reduced one:
  //   x_original = particular + kernel * y.
  // Identity mapping (kernel = I, particular = 0) when no equality
  // constraints or pinned variables were eliminated.
  Vector particular;
  Matrix kernel;

  // Set when compilation already decided the outcome (inconsistent
  // equalities, or an unused variable with nonzero objective weight).
  std::optional<SolveStatus> precompiled_status;
  std::string diagnostic;
};

// Lowers the declarative problem. Equality constraints are eliminated via a
// nullspace parameterization; variables appearing in no constraint are
// pinned to zero (or flag the problem unbounded when they carry objective
// weight).
FlatSdp compile(const SdpProblem& p);

// Interior-point engine (HKM predictor-corrector) for the compiled form.
struct FlatSolution {
  SolveStatus status = SolveStatus::kFailed;
  Vector y;  // reduced variables
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
  std::string diagnostic;
};

FlatSolution solve_flat(const FlatSdp& flat, const SolveOptions& opts);

}  // namespace reluqc::sdp

#endif  // RELUQC_SRC_SDP_FLAT_HPP_
