// Copyright 2026 The langevin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <langevin/schedules.hpp>

#include <gtest/gtest.h>

#include <cmath>

namespace langevin {
namespace {

TEST(Sequence, Kinds) {
  EXPECT_DOUBLE_EQ(Sequence::constant(0.3)(17), 0.3);
  const Sequence p = Sequence::poly(0.5, 0.5);
  EXPECT_DOUBLE_EQ(p(1), 0.5);
  EXPECT_DOUBLE_EQ(p(4), 0.25);
  EXPECT_DOUBLE_EQ(Sequence::poly(1.0, 1.0, 1.0)(3), 0.25);
  const Sequence w = Sequence::piecewise(0.2, 10, 0.05);
  EXPECT_DOUBLE_EQ(w(10), 0.2);
  EXPECT_DOUBLE_EQ(w(11), 0.05);
}

TEST(Sequence, Validation) {
  EXPECT_THROW(Sequence::constant(0.0).validate("g"), std::invalid_argument);
  EXPECT_THROW(Sequence::constant(-1.0).validate("g"), std::invalid_argument);
  EXPECT_THROW(Sequence::poly(1.0, 1.5).validate("g"), std::invalid_argument);
  EXPECT_THROW(Sequence::poly(1.0, 0.5, -1.0).validate("g"), std::invalid_argument);
  EXPECT_THROW(Sequence::piecewise(0.1, 5, 0.2).validate("g"), std::invalid_argument);
  EXPECT_NO_THROW(Sequence::poly(1.0, 1.0).validate("g"));
}

TEST(StepPlan, DefaultWeightsFollowGamma) {
  const StepPlan p = StepPlan::constant(0.1, 7);
  EXPECT_DOUBLE_EQ(p.lambda_at(5), 0.1);
  EXPECT_EQ(p.burn_in, 7u);
  EXPECT_THROW(p.validate(20.0), std::invalid_argument);  // gamma_1 > 1/L
  EXPECT_NO_THROW(p.validate(10.0));
  EXPECT_NO_THROW(p.validate(0.0));  // flat potential: no restriction
}

TEST(StepPlan, PolyPlanShiftsWeights) {
  const StepPlan p = make_poly_plan(0.2, 0.5);
  EXPECT_DOUBLE_EQ(p.gamma_at(4), 0.1);
  EXPECT_DOUBLE_EQ(p.lambda_at(3), 0.1);  // gamma_1 / (3 + 1)^{1/2}
}

TEST(Admissibility, ConstantPlansAreAdmissible) {
  const StepPlan p = StepPlan::constant(0.01);
  EXPECT_TRUE(check_admissible(p, 0.0, Variant::ULA, 1000));
  EXPECT_TRUE(check_admissible(p, 1.0, Variant::ULA, 1000));
  EXPECT_TRUE(check_admissible(p, 1.0, Variant::SGLD, 1000));
}

TEST(Admissibility, PolyPlanUlaCondition) {
  // gamma_k = gamma_1 k^{-1/2}, lambda_k = gamma_{k+1}: the ULA condition with
  // m = 0 reads gamma_{k+2}/gamma_{k+1} <= gamma_{k+1}/gamma_k, which fails
  // because the ratio (k/(k+1))^{1/2} increases in k.
  const StepPlan p = make_poly_plan(0.1, 0.5);
  const Admissibility a = admissibility(p, 0.0, Variant::ULA, 100);
  EXPECT_FALSE(a.ok);
  EXPECT_EQ(a.first_violation, 1u);
  // SGLD condition: lambda_{k+1}/gamma_{k+2} = 1 = lambda_k/gamma_{k+1}.
  EXPECT_TRUE(check_admissible(p, 0.0, Variant::SGLD, 100));
}

TEST(Admissibility, PolyPlanWithUnitWeights) {
  StepPlan p;
  p.gamma = Sequence::poly(0.1, 0.5);
  // lambda_k = gamma_k: ULA condition (1 - m gamma_{k+1}) <= 1 always holds.
  EXPECT_TRUE(check_admissible(p, 0.0, Variant::ULA, 1000));
  // SGLD condition gamma_{k+1}/gamma_{k+2} <= gamma_k/gamma_{k+1} holds for
  // log-convex decreasing sequences such as k^{-1/2}.
  EXPECT_TRUE(check_admissible(p, 0.0, Variant::SGLD, 1000));
}

TEST(Admissibility, IncreasingWeightsRejected) {
  StepPlan p = StepPlan::constant(0.1);
  p.lambda = Sequence::piecewise(0.1, 3, 0.1);
  EXPECT_TRUE(check_admissible(p, 0.0, Variant::ULA, 10));
  p.gamma = Sequence::piecewise(0.1, 3, 0.05);
  // lambda constant while gamma halves: lambda/gamma doubles at k = 4.
  const Admissibility a = admissibility(p, 0.0, Variant::ULA, 10);
  EXPECT_FALSE(a.ok);
  EXPECT_EQ(a.first_violation, 3u);
}

TEST(Cumulative, SumsMatchClosedForms) {
  const StepPlan c = StepPlan::constant(0.25);
  const Cumulative s = cumulative(c, 10, 8);
  EXPECT_DOUBLE_EQ(s.Gamma, 2.0);
  EXPECT_DOUBLE_EQ(s.Lambda, 2.0);
  StepPlan h;
  h.gamma = Sequence::poly(1.0, 1.0);
  // Harmonic numbers: H_100 - H_10.
  double ref = 0.0;
  for (int k = 100; k >= 11; --k) ref += 1.0 / k;
  EXPECT_NEAR(cumulative(h, 10, 90).Gamma, ref, 1e-15);
  EXPECT_THROW(cumulative(c, 0, 0), std::invalid_argument);
}

TEST(Cumulative, CompensatedSummation) {
  // 1e7 terms of 0.1: naive summation drifts by ~1e-9 relative.
  const Cumulative s = cumulative(StepPlan::constant(0.1), 0, 10'000'000);
  EXPECT_NEAR(s.Gamma, 1e6, 1e-8);
}

}  // namespace
}  // namespace langevin
