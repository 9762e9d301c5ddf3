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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "reluqc/activations.hpp"
#include "reluqc/qc_core.hpp"
#include "support/random_gen.hpp"

using namespace reluqc;

namespace {

Vector vec(std::initializer_list<double> vals) {
  Vector v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

QcMatrix m1_identity(Eigen::Index nv) {
  Matrix m = Matrix::Zero(2 * nv, 2 * nv);
  m.block(0, nv, nv, nv) = Matrix::Identity(nv, nv);
  m.block(nv, 0, nv, nv) = Matrix::Identity(nv, nv);
  m.block(nv, nv, nv, nv) = -2.0 * Matrix::Identity(nv, nv);
  return QcMatrix(SymMatrix(m), nv);
}

}  // namespace

TEST_CASE("relu basics") {
  CHECK(relu(vec({-1, 2})) == vec({0, 2}));
  CHECK(relu(vec({0, 0})) == vec({0, 0}));
  CHECK(relu(vec({3.5})) == vec({3.5}));
}

TEST_CASE("flipped relu basics and min+max decomposition") {
  CHECK(flipped_relu(vec({-1, 2})) == vec({-1, 0}));
  CHECK(flipped_relu(vec({0})) == vec({0}));
  testing::Rng rng(42);
  for (int t = 0; t < 200; ++t) {
    Vector v = rng.normal_vector(rng.uniform_int(1, 6));
    CHECK((relu(v) + flipped_relu(v) - v).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("leaky") {
  CHECK(leaky(0, 1, vec({-2, 3})) == vec({0, 3}));
  Vector out = leaky(0.1, 1, vec({-2, 3}));
  CHECK(out[0] == doctest::Approx(-0.2));
  CHECK(out[1] == doctest::Approx(3.0));
  CHECK(leaky(1, 2, vec({0})) == vec({0}));
  CHECK_THROWS_AS(leaky(0.5, 0.5, vec({1})), Error);
}

TEST_CASE("householder") {
  const double s = 1.0 / std::sqrt(2.0);
  Vector h = vec({s, -s});
  CHECK((householder(h, vec({3, 1})) - vec({3, 1})).norm() == doctest::Approx(0));
  // MaxMin: sorts the pair in decreasing order.
  CHECK((householder(h, vec({1, 3})) - vec({3, 1})).norm() ==
        doctest::Approx(0).epsilon(1e-12));
  CHECK_THROWS_AS(householder(vec({1, 1}), vec({1, 0})), Error);

  testing::Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index n = rng.uniform_int(1, 5);
    Vector hh = rng.normal_vector(n);
    if (hh.norm() < 1e-6) continue;
    hh /= hh.norm();
    Vector v = rng.normal_vector(n);
    CHECK(householder(hh, v).norm() == doctest::Approx(v.norm()).epsilon(1e-12));
  }
}

TEST_CASE("qc_form examples") {
  // Complementarity identity with Q1 = I.
  QcMatrix m1 = m1_identity(2);
  Vector v = vec({1, -1});
  CHECK(qc_form(m1, v, relu(v)) == doctest::Approx(0));

  QcMatrix zero(SymMatrix::zero(4), 2);
  CHECK(qc_form(zero, vec({5, -3}), vec({2, 2})) == 0.0);

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1;
  d(1, 1) = -1;
  QcMatrix m(SymMatrix(d), 1);
  CHECK(qc_form(m, vec({2}), vec({1})) == doctest::Approx(3));

  CHECK_THROWS_AS(qc_form(m1, vec({1}), vec({1, 2})), Error);
}

TEST_CASE("inc_qc_form examples") {
  testing::Rng rng(3);
  // Zero increment kills any form.
  for (int t = 0; t < 20; ++t) {
    QcMatrix m(rng.random_symmetric(4), 2);
    Vector v = rng.normal_vector(2), w = rng.normal_vector(2);
    CHECK(inc_qc_form(m, v, v, w, w) == 0.0);
  }
  // Slope-1 increment on the standard incremental multiplier.
  QcMatrix mi1 = m1_identity(1);
  CHECK(inc_qc_form(mi1, vec({2}), vec({1}), vec({2}), vec({1})) ==
        doctest::Approx(0));
  // T2 = [[1,-1],[-1,1]], S2 = I block form evaluated on a concrete increment.
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 1; m(0, 1) = -1; m(1, 0) = -1; m(1, 1) = 1;
  m(2, 3) = 1; m(3, 2) = 1;
  QcMatrix mi2(SymMatrix(m), 2);
  CHECK(inc_qc_form(mi2, vec({1, -1}), vec({0, 0}), vec({1, 0}), vec({0, 0})) ==
        doctest::Approx(4));
}

TEST_CASE("sign_scale examples") {
  testing::Rng rng(11);
  // Any diagonal Q1 gives the zero matrix for every pattern.
  for (int t = 0; t < 25; ++t) {
    const int nv = rng.uniform_int(1, 4);
    Matrix q1 = Matrix::Zero(nv, nv);
    for (int i = 0; i < nv; ++i) q1(i, i) = rng.normal();
    Matrix m = Matrix::Zero(2 * nv, 2 * nv);
    m.block(0, nv, nv, nv) = q1;
    m.block(nv, 0, nv, nv) = q1;
    m.block(nv, nv, nv, nv) = -2.0 * q1;
    QcMatrix qc(SymMatrix(m), nv);
    for (const SignPattern& d : enumerate_sign_patterns(nv)) {
      CHECK(sign_scale(qc, d).maxabs() <= 1e-14);
    }
  }

  Matrix diagpm = Matrix::Zero(2, 2);
  diagpm(0, 0) = 1;
  diagpm(1, 1) = -1;
  QcMatrix qpm(SymMatrix(diagpm), 1);
  SignPattern plus({+1});
  CHECK(sign_scale(qpm, plus).maxabs() <= 1e-15);

  Matrix low = Matrix::Zero(2, 2);
  low(1, 1) = -1;
  QcMatrix qlow(SymMatrix(low), 1);
  CHECK(sign_scale(qlow, plus)(0, 0) == doctest::Approx(-1));
}

TEST_CASE("sign_scale_inc matches hand evaluation and lifted consistency") {
  QcMatrix m1 = m1_identity(1);
  SignPattern plus({+1});
  SymMatrix scaled = sign_scale_inc(m1, plus, plus);
  CHECK(scaled.maxabs() <= 1e-14);

  QcMatrix zero(SymMatrix::zero(4), 2);
  SignPattern pp({+1, +1});
  CHECK(sign_scale_inc(zero, pp, pp).maxabs() == 0.0);

  // Consistency with sign_scale on the lifted matrix R^T M R under
  // D = blkdiag(D1, D2).
  testing::Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const int nv = rng.uniform_int(1, 3);
    QcMatrix m(rng.random_symmetric(2 * nv), nv);
    Matrix r = Matrix::Zero(2 * nv, 4 * nv);
    r.block(0, 0, nv, nv) = Matrix::Identity(nv, nv);
    r.block(0, nv, nv, nv) = -Matrix::Identity(nv, nv);
    r.block(nv, 2 * nv, nv, nv) = Matrix::Identity(nv, nv);
    r.block(nv, 3 * nv, nv, nv) = -Matrix::Identity(nv, nv);
    QcMatrix lifted(
        SymMatrix::from_symmetric_expr(r.transpose() * m.m.mat() * r), 2 * nv);

    const auto patterns = enumerate_sign_patterns(nv);
    for (const auto& d1 : patterns) {
      for (const auto& d2 : patterns) {
        std::vector<int> joint = d1.signs();
        for (int s : d2.signs()) joint.push_back(s);
        SymMatrix direct = sign_scale_inc(m, d1, d2);
        SymMatrix via_lift = sign_scale(lifted, SignPattern(joint));
        CHECK((direct.mat() - via_lift.mat()).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }
}

TEST_CASE("enumerate_sign_patterns") {
  auto p1 = enumerate_sign_patterns(1);
  REQUIRE(p1.size() == 2);
  CHECK(p1[0].sign(0) == +1);
  CHECK(p1[1].sign(0) == -1);
  CHECK(enumerate_sign_patterns(2).size() == 4);
  CHECK(enumerate_sign_patterns(4).size() == 16);
  CHECK_THROWS_AS(enumerate_sign_patterns(17), Error);
  CHECK(enumerate_sign_patterns(17, 20).size() == size_t{1} << 17);
}

TEST_CASE("relu properties: positivity, complement, complementarity") {
  testing::Rng rng(1234);
  for (int t = 0; t < 1000; ++t) {
    Vector v = rng.normal_vector(rng.uniform_int(1, 6));
    Vector w = relu(v);
    CHECK(w.minCoeff() >= 0.0);
    CHECK((w - v).minCoeff() >= 0.0);
    CHECK((w.array() * (v - w).array()).abs().maxCoeff() == 0.0);
  }
}

TEST_CASE("relu positive homogeneity, exact for powers of two") {
  testing::Rng rng(99);
  for (int t = 0; t < 200; ++t) {
    Vector v = rng.normal_vector(4);
    const double beta = std::ldexp(1.0, rng.uniform_int(-8, 8));
    CHECK((relu(beta * v) - beta * relu(v)).cwiseAbs().maxCoeff() == 0.0);
    const double b2 = rng.uniform(0.0, 10.0);
    CHECK((relu(b2 * v) - b2 * relu(v)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("scalar slope restriction") {
  testing::Rng rng(17);
  for (int t = 0; t < 1000; ++t) {
    const double v1 = rng.normal() * 3.0, v2 = rng.normal() * 3.0;
    if (v1 == v2) continue;
    const double slope =
        (relu(vec({v2}))[0] - relu(vec({v1}))[0]) / (v2 - v1);
    CHECK(slope >= 0.0);
    CHECK(slope <= 1.0);
  }
}

TEST_CASE("pairwise increment inequality for scalar relu") {
  testing::Rng rng(31);
  for (int t = 0; t < 10000; ++t) {
    const double vb1 = rng.normal() * 2, vh1 = rng.normal() * 2;
    const double vb2 = rng.normal() * 2, vh2 = rng.normal() * 2;
    const double dv1 = vb1 - vh1, dv2 = vb2 - vh2;
    const double dw1 = std::max(vb1, 0.0) - std::max(vh1, 0.0);
    const double dw2 = std::max(vb2, 0.0) - std::max(vh2, 0.0);
    CHECK((dv1 - dv2) * (dv1 - dv2) + 2.0 * dw1 * dw2 >= 0.0);
  }
}

TEST_CASE("quadratic forms are even") {
  testing::Rng rng(55);
  for (int t = 0; t < 200; ++t) {
    const int nv = rng.uniform_int(1, 4);
    QcMatrix m(rng.random_symmetric(2 * nv), nv);
    Vector v = rng.normal_vector(nv), w = rng.normal_vector(nv);
    CHECK(qc_form(m, v, w) == qc_form(m, -v, -w));
  }
}

TEST_CASE("sign_scale output is symmetric") {
  testing::Rng rng(77);
  for (int t = 0; t < 100; ++t) {
    const int nv = rng.uniform_int(1, 4);
    QcMatrix m(rng.random_symmetric(2 * nv), nv);
    for (const auto& d : enumerate_sign_patterns(nv)) {
      const Matrix s = sign_scale(m, d).mat();
      CHECK((s - s.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("SymMatrix rejects asymmetric input, symmetrizes small noise") {
  Matrix bad(2, 2);
  bad << 1, 2, 3, 1;
  CHECK_THROWS_AS(SymMatrix{bad}, Error);
  Matrix ok(2, 2);
  ok << 1, 2, 2 + 1e-14, 1;
  SymMatrix s(ok);
  CHECK(s(0, 1) == s(1, 0));
}
