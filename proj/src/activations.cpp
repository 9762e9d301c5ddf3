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
#include "reluqc/activations.hpp"

#include <cmath>

namespace reluqc {

Vector relu(const Vector& v) {
  require_finite(v, "relu");
  return v.cwiseMax(0.0);
}

Vector flipped_relu(const Vector& v) {
  require_finite(v, "flipped_relu");
  return v.cwiseMin(0.0);
}

Vector leaky(double alpha, double beta, const Vector& v) {
  require(alpha != beta, "leaky: requires alpha != beta");
  require_finite(v, "leaky");
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[i] = (v[i] < 0.0 ? alpha : beta) * v[i];
  }
  return out;
}

Vector householder(const Vector& h, const Vector& v) {
  require_finite(h, "householder");
  require_finite(v, "householder");
  require(h.size() == v.size(), "householder: dimension mismatch");
  require(std::abs(h.norm() - 1.0) <= 1e-9, "householder: h must be a unit vector");
  if (h.dot(v) >= 0.0) return v;
  return v - 2.0 * h * (h.dot(v));
}

}  // namespace reluqc
