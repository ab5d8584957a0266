// Copyright 2026 The FockForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fockforge/lie_reps.hpp"

#include <gtest/gtest.h>

namespace ff = fockforge;
using ff::Cutoff;
using ff::SpinJ;
using ff::SpinK;

constexpr double kExact = 1e-12;

TEST(SpinJ, RequiresPositiveTwoJ) {
  EXPECT_THROW(SpinJ{-1}, std::invalid_argument);
  EXPECT_THROW(SpinJ{0}, std::invalid_argument);
  EXPECT_EQ(SpinJ{3}.dim(), 4);
}

TEST(SpinK, RejectsNonPositiveWeight) {
  EXPECT_THROW((SpinK{0, 1, Cutoff{4}}), std::invalid_argument);
  EXPECT_THROW((SpinK{1, 0, Cutoff{4}}), std::invalid_argument);
  EXPECT_DOUBLE_EQ((SpinK{1, 2, Cutoff{4}}).k(), 0.25);
}

TEST(Pochhammer, RisingFactorial) {
  EXPECT_DOUBLE_EQ(ff::pochhammer(0.5, 0), 1.0);
  EXPECT_DOUBLE_EQ(ff::pochhammer(0.5, 3), 0.5 * 1.5 * 2.5);
  EXPECT_DOUBLE_EQ(ff::pochhammer(1.0, 5), 120.0);
  EXPECT_NEAR(ff::log_pochhammer(0.5, 200), std::lgamma(200.5) - std::lgamma(0.5), 1e-9);
}

TEST(Su2Generators, SpinOneMatrices) {
  const auto t = ff::su2_generators(SpinJ{2});
  EXPECT_NEAR(std::abs(t.plus(1, 0) - std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t.plus(2, 1) - std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(t.third(0, 0).real(), -1.0);
  EXPECT_DOUBLE_EQ(t.third(2, 2).real(), 1.0);
  EXPECT_EQ(t.minus.matrix(), t.plus.matrix().adjoint());
}

// Property: the finite spin-J representation closes with no truncation.
TEST(Su2Generators, CloseExactlyUpToEightHalves) {
  for (int two_j = 1; two_j <= 8; ++two_j) {
    const auto rep = ff::check_su2_closure(SpinJ{two_j});
    EXPECT_TRUE(rep.passed) << "twoJ=" << two_j;
    for (const auto& [k, v] : rep.residuals) EXPECT_LE(v, kExact) << k;
  }
}

TEST(Su11Generators, AbstractCloseAtMarginOne) {
  for (long num : {1L, 2L, 3L, 5L}) {
    for (std::size_t n : {1u, 8u, 40u}) {
      const auto t = ff::su11_generators(SpinK{num, 2, Cutoff{n}});
      const auto r = ff::closure_residuals(t, 1);
      EXPECT_LE(r.raise, kExact);
      EXPECT_LE(r.lower, kExact);
      EXPECT_LE(r.cross, kExact);
      EXPECT_EQ(r.dagger_pairing, 0.0);
    }
  }
}

TEST(Su11Generators, TruncationBreaksCrossRelationAtMarginZero) {
  const auto r = ff::closure_residuals(ff::su11_generators(SpinK{1, 2, Cutoff{6}}), 0);
  EXPECT_GT(r.cross, 1.0);
}

TEST(Schwinger, BothAlgebrasCloseAtMarginOne) {
  for (std::size_t n : {1u, 4u, 10u}) {
    const Cutoff c{n};
    EXPECT_TRUE(ff::closure_report("su2", ff::schwinger_su2(c), 1, kExact).passed) << n;
    EXPECT_TRUE(ff::closure_report("su11", ff::schwinger_su11(c), 1, kExact).passed) << n;
  }
}

// J+ = a1^dag a2 preserves N1 + N2, but a per-mode cutoff still clips the
// sectors with an occupation at n_max.
TEST(Schwinger, Su2NeedsMarginOneUnderPerModeCutoff) {
  const auto r = ff::closure_residuals(ff::schwinger_su2(Cutoff{5}), 0);
  EXPECT_GT(r.cross, 0.0);
  const auto s = ff::closure_residuals(ff::schwinger_su2(Cutoff{5}), 1);
  EXPECT_LE(s.cross, kExact);
}

// (a^dag)^2 / 2 steps two levels: the top two rows see truncation.
TEST(SingleModeSu11, NeedsMarginTwo) {
  for (std::size_t n : {4u, 12u, 24u}) {
    const auto t = ff::single_mode_su11(Cutoff{n});
    EXPECT_GT(ff::closure_residuals(t, 1).cross, 1.0) << n;
    EXPECT_TRUE(ff::closure_report("single", t, 2, kExact).passed) << n;
  }
}

TEST(SingleModeSu11, ParitySectorsMatchQuarterAndThreeQuarterSpins) {
  const std::size_t m = 10;
  const Cutoff fock{2 * m + 1};
  const auto single = ff::single_mode_su11(fock);
  for (bool odd : {false, true}) {
    const auto idx = ff::single_mode_spin_subspace(fock, odd);
    ASSERT_EQ(idx.size(), m + 1);
    const auto abstract = ff::su11_generators(SpinK{odd ? 3 : 1, 2, Cutoff{m}});
    EXPECT_LT((ff::restrict_to(single.plus, idx) - abstract.plus.matrix()).norm(), 1e-13);
    EXPECT_LT((ff::restrict_to(single.minus, idx) - abstract.minus.matrix()).norm(), 1e-13);
    EXPECT_LT((ff::restrict_to(single.third, idx) - abstract.third.matrix()).norm(), 1e-13);
  }
}

TEST(Casimir, EqualsJTimesJPlusOne) {
  for (int two_j = 1; two_j <= 12; ++two_j) EXPECT_LE(ff::casimir_defect(SpinJ{two_j}), 1e-12);
}
