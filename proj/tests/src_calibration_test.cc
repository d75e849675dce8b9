/* Copyright 2026 The harmoq Authors. All Rights Reserved.

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
#include <cmath>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "harmoq/errors.hpp"
#include "harmoq/linalg.hpp"
#include "harmoq/src_calibration.hpp"
#include "oracles.hpp"

namespace harmoq {
namespace {

using testing::CoefficientObjective;
using testing::RandomSrcInstance;
using testing::SrcInstance;

ProjectionMatrix Wrap(Tensor2D h) {
  ProjectionMatrix p;
  p.h = std::move(h);
  return p;
}

Tensor2D NumericalGradient(const SrcInstance& inst, const Tensor2D& at, double h) {
  Tensor2D g(at.rows(), at.cols());
  for (std::size_t i = 0; i < at.size(); ++i) {
    Tensor2D plus = at, minus = at;
    plus.values()[i] += h;
    minus.values()[i] -= h;
    g.values()[i] = (SrcObjective(plus, inst.w, inst.stats, inst.projection, inst.lambda) -
                     SrcObjective(minus, inst.w, inst.stats, inst.projection, inst.lambda)) /
                    (2.0 * h);
  }
  return g;
}

TEST(SrcObjective, ZeroCorrectionLeavesConstantTerm) {
  std::mt19937_64 rng(1);
  const SrcInstance inst = RandomSrcInstance(rng, 3, 6, 2, 1e-2);
  const double want = Trace(MatMulTransB(MatMul(inst.w, inst.stats.dd), inst.w));
  EXPECT_NEAR(SrcObjective(Tensor2D(3, 6), inst.w, inst.stats, inst.projection, 1e-2), want,
              1e-12 * want);
}

TEST(SrcObjective, NoErrorNoCorrectionIsZero) {
  std::mt19937_64 rng(2);
  SrcInstance inst = RandomSrcInstance(rng, 2, 5, 3, 1e-2);
  inst.stats.dx = Tensor2D(5, 5);
  inst.stats.dd = Tensor2D(5, 5);
  EXPECT_EQ(SrcObjective(Tensor2D(2, 5), inst.w, inst.stats, inst.projection, 1e-2), 0.0);
}

TEST(SrcObjective, MatchesMonteCarloEstimate) {
  const std::size_t m = 3, d = 5, k = 3;
  std::mt19937_64 rng(3);
  const Tensor2D w = testing::RandomTensor(m, d, rng);
  const Tensor2D a = testing::RandomTensor(d, d, rng);
  const Tensor2D b = testing::RandomTensor(d, d, rng, -0.3, 0.3);
  const double sigma = 0.1;
  const SecondMoments stats = testing::GaussianModelMoments(a, b, sigma);
  const double lambda = 0.05;

  const Tensor2D z = testing::RandomTensor(m, k, rng, -0.5, 0.5);
  const ProjectionMatrix proj = Wrap(testing::RandomTensor(k, d, rng));
  const Tensor2D in_span = MatMul(z, proj.h);
  const Tensor2D ridge = testing::RandomTensor(m, d, rng, -0.5, 0.5);
  const ProjectionMatrix identity = Wrap(Tensor2D::Identity(d));

  const std::size_t samples = 100000;
  const Tensor2D g = SeededGaussian(samples, d, 77);
  const Tensor2D e = SeededGaussian(samples, d, 78);
  const Tensor2D x = MatMulTransB(g, a);                          // rows A g
  const Tensor2D dx = Add(MatMulTransB(x, b), Scale(e, sigma));  // rows B x + e
  auto mc = [&](const Tensor2D& dw) {
    const Tensor2D r = Add(MatMulTransB(dx, w), MatMulTransB(x, dw));
    return SquaredFrobeniusNorm(r) / static_cast<double>(samples);
  };
  const double mc_span = mc(in_span) + lambda * SquaredFrobeniusNorm(z);
  const double mc_ridge = mc(ridge) + lambda * SquaredFrobeniusNorm(ridge);
  EXPECT_NEAR(SrcObjective(in_span, w, stats, proj, lambda) / mc_span, 1.0, 0.02);
  EXPECT_NEAR(SrcObjective(ridge, w, stats, identity, lambda) / mc_ridge, 1.0, 0.02);
}

TEST(SrcCorrection, HugeLambdaShrinksCorrection) {
  std::mt19937_64 rng(4);
  const SrcInstance inst = RandomSrcInstance(rng, 4, 8, 4, 1e6);
  const Tensor2D dw = ComputeSrcCorrection(inst.w, inst.stats, inst.projection, {1e6, 1e-6});
  EXPECT_LT(FrobeniusNorm(dw), 1e-3 * FrobeniusNorm(inst.w));
}

TEST(SrcCorrection, NoCorrelationNoCorrection) {
  std::mt19937_64 rng(5);
  SrcInstance inst = RandomSrcInstance(rng, 4, 8, 4, 1e-2);
  inst.stats.dx = Tensor2D(8, 8);
  const Tensor2D dw = ComputeSrcCorrection(inst.w, inst.stats, inst.projection, {});
  EXPECT_EQ(MaxAbs(dw), 0.0);
}

TEST(SrcCorrection, SmallInstanceBeatsGradientDescent) {
  std::mt19937_64 rng(6);
  const SrcInstance inst = RandomSrcInstance(rng, 2, 3, 1, 1e-2);
  const CoefficientObjective oracle(inst);
  const auto z = oracle.Descend(testing::Zero(2, 1), 10000);
  const Tensor2D dw = ComputeSrcCorrection(inst.w, inst.stats, inst.projection, {});
  const double closed = SrcObjective(dw, inst.w, inst.stats, inst.projection, inst.lambda);
  EXPECT_LE(closed, oracle.Value(z) + 1e-6);
  // The library objective agrees with the oracle's own evaluation.
  const Tensor2D lifted = testing::LiftCoefficients(z, inst.projection.h);
  EXPECT_NEAR(SrcObjective(lifted, inst.w, inst.stats, inst.projection, inst.lambda),
              oracle.Value(z), 1e-10 * (1.0 + oracle.Value(z)));
}

TEST(SrcCorrection, IdentityProjectionIsRidge) {
  std::mt19937_64 rng(7);
  SrcInstance inst = RandomSrcInstance(rng, 3, 4, 4, 0.1);
  inst.projection = Wrap(Tensor2D::Identity(4));
  const Tensor2D dw = ComputeSrcCorrection(inst.w, inst.stats, inst.projection, {0.1, 0.0});
  // -W S_dx (S_xx + lambda I)^{-1}
  const Tensor2D rhs = Scale(MatMul(inst.w, inst.stats.dx), -1.0);
  const auto want = testing::EliminationSolve(AddScaledIdentity(inst.stats.xx, 0.1), rhs);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(dw(i, j), want[i][j], 1e-10);
}

TEST(SrcCorrection, StationaryOnRandomInstances) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::size_t> dim(3, 8);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = dim(rng);
    const SrcInstance inst = RandomSrcInstance(rng, dim(rng) - 2, d, 1 + trial % (d - 1), 1e-2);
    const Tensor2D dw = ComputeSrcCorrection(inst.w, inst.stats, inst.projection, {});
    const Tensor2D g = NumericalGradient(inst, dw, 1e-5);
    EXPECT_LT(FrobeniusNorm(g), 1e-6 * (1.0 + FrobeniusNorm(inst.w))) << "trial " << trial;
    const double at_zero =
        SrcObjective(Tensor2D(dw.rows(), d), inst.w, inst.stats, inst.projection, inst.lambda);
    EXPECT_LE(SrcObjective(dw, inst.w, inst.stats, inst.projection, inst.lambda), at_zero);
  }
}

TEST(SrcCorrection, DescentFromTwoStartsReachesClosedForm) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const SrcInstance inst = RandomSrcInstance(rng, 3, 6, 3, 0.1);
    const CoefficientObjective oracle(inst);
    const Tensor2D dw = ComputeSrcCorrection(inst.w, inst.stats, inst.projection, {0.1});
    for (double start : {-2.0, 3.0}) {
      auto z0 = testing::Zero(3, 3);
      for (auto& row : z0)
        for (double& v : row) v = start;
      const auto z = oracle.Descend(z0, 200000);
      const Tensor2D lifted = testing::LiftCoefficients(z, inst.projection.h);
      EXPECT_LT(MaxAbs(Subtract(lifted, dw)), 1e-4) << "trial " << trial;
    }
  }
}

TEST(SrcCorrection, ZeroErrorStreamGivesZeroCorrection) {
  std::mt19937_64 rng(10);
  const Tensor2D x = testing::RandomTensor(300, 6, rng);
  CalibStats stats(6);
  stats.Update(x, Tensor2D(300, 6));
  ProjectionRequest req;
  req.dim = 6;
  const Tensor2D w = testing::RandomTensor(4, 6, rng);
  const Tensor2D dw = ComputeSrcCorrection(w, stats.Finalize(), MakeProjection(req), {});
  EXPECT_EQ(MaxAbs(dw), 0.0);
}

TEST(SrcCorrection, Errors) {
  std::mt19937_64 rng(11);
  SrcInstance inst = RandomSrcInstance(rng, 2, 4, 2, 1e-2);
  EXPECT_THROW(ComputeSrcCorrection(inst.w, inst.stats, inst.projection, {0.0}), ConfigError);
  EXPECT_THROW(ComputeSrcCorrection(testing::RandomTensor(2, 5, rng), inst.stats, inst.projection,
                                    {}),
               DimensionError);
  inst.stats.xx = Scale(Tensor2D::Identity(4), -10.0);
  try {
    ComputeSrcCorrection(inst.w, inst.stats, inst.projection, {}, "fc7");
    FAIL() << "expected a singularity error";
  } catch (const SingularityError& e) {
    EXPECT_NE(std::string(e.what()).find("fc7"), std::string::npos);
  }
}

}  // namespace
}  // namespace harmoq
