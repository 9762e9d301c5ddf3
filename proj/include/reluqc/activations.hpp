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
#ifndef RELUQC_ACTIVATIONS_HPP_
#define RELUQC_ACTIVATIONS_HPP_

#include "reluqc/types.hpp"

namespace reluqc {

/// Elementwise max(v_i, 0).
Vector relu(const Vector& v);

/// Elementwise min(v_i, 0), i.e. -relu(-v). Satisfies exactly the same
/// quadratic constraints as relu (quadratic forms are even).
Vector flipped_relu(const Vector& v);

/// Piecewise linear with slope alpha on v<0 and beta on v>=0. Requires
/// alpha != beta; the degenerate linear case is rejected rather than guessed.
Vector leaky(double alpha, double beta, const Vector& v);

/// Householder activation: identity when h.v >= 0, reflection (I - 2hh^T)v
/// otherwise. h must be a unit vector (tolerance 1e-9). With
/// h = (1,-1)/sqrt(2) this is the MaxMin activation.
Vector householder(const Vector& h, const Vector& v);

}  // namespace reluqc

#endif  // RELUQC_ACTIVATIONS_HPP_
