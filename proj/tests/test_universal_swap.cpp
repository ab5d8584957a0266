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

#include "fockforge/states.hpp"
#include "fockforge/universal_swap.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>
#include <sstream>

namespace ff = fockforge;
using ff::Cutoff;
using ff::PermutationOperator;

TEST(SwapMatrix, TwoAndThreeMatchHandTypedMatrices) {
  EXPECT_EQ(ff::swap_matrix(2).dense(), oracle::swap2());
  EXPECT_EQ(ff::swap_matrix(3).dense(), oracle::swap3());
}

TEST(SwapMatrix, RejectsDegenerateSizes) {
  EXPECT_THROW(ff::swap_matrix(1), std::invalid_argument);
  EXPECT_THROW(ff::swap_matrix(0), std::invalid_argument);
}

// Properties for every n: involution, symmetric, fixes the diagonal i = j.
TEST(SwapMatrix, IsASymmetricInvolution) {
  for (std::size_t n = 2; n <= 32; ++n) {
    const auto u = ff::swap_matrix(n);
    EXPECT_TRUE(u.is_involution()) << n;
    if (n <= 12) {
      EXPECT_EQ(u.dense(), u.dense().transpose()) << n;
    }
    const auto nn = static_cast<ff::Index>(n);
    for (ff::Index i = 0; i < nn; ++i) EXPECT_EQ(u.column_of(i * nn + i), i * nn + i);
  }
}

TEST(PermutationOperator, RejectsNonPermutations) {
  EXPECT_THROW((PermutationOperator{2, {0, 1, 1, 3}}), std::invalid_argument);
  EXPECT_THROW((PermutationOperator{2, {0, 1, 2}}), std::invalid_argument);
  EXPECT_THROW((PermutationOperator{2, {0, 1, 2, 4}}), std::invalid_argument);
}

TEST(PermutationOperator, ProductMatchesDenseProduct) {
  const auto f = ff::cnot_factorization();
  EXPECT_EQ((f[0] * f[1]).dense(), f[0].dense() * f[1].dense());
  EXPECT_EQ((f[1] * f[0]).dense(), f[1].dense() * f[0].dense());
}

TEST(Cnot, FactorsAreTheHandTypedGatesAndMultiplyToTheSwap) {
  const auto f = ff::cnot_factorization();
  EXPECT_EQ(f[0].dense(), oracle::cnot_first());
  EXPECT_EQ(f[1].dense(), oracle::cnot_second());
  EXPECT_EQ(f[2].dense(), oracle::cnot_first());
  EXPECT_EQ(f[0] * f[1] * f[2], ff::swap_matrix(2));
  EXPECT_EQ(oracle::cnot_first() * oracle::cnot_second() * oracle::cnot_first(), oracle::swap2());
}

TEST(ApplySwap, BasisExampleFollowsFirstFactorMajorStacking) {
  ff::Vector a(2);
  a << 1, 0;
  ff::Vector b(2);
  b << 0, 1;
  ff::Vector expected(4);
  expected << 0, 0, 1, 0;
  EXPECT_EQ(ff::apply_swap(a, b), expected);
}

TEST(ApplySwap, MatchesOuterProductOracleExactly) {
  std::mt19937_64 gen(79);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = oracle::random_vector(10, gen);
    const auto b = oracle::random_vector(10, gen);
    EXPECT_EQ(ff::apply_swap(a, b), oracle::swapped_outer(a, b));
  }
}

TEST(ApplySwap, EqualFactorsAreFixedAndKetVersionKeepsTheCutoff) {
  std::mt19937_64 gen(83);
  const auto a = oracle::random_vector(6, gen);
  EXPECT_EQ(ff::apply_swap(a, a), ff::kron(a, a));
  const Cutoff c{5};
  const ff::Ket x{c, ff::Modes::one, a};
  const auto y = ff::apply_swap(x, ff::vacuum(c));
  EXPECT_EQ(y.modes(), ff::Modes::two);
  EXPECT_EQ(y.amplitudes(), ff::kron(ff::vacuum(c).amplitudes(), a));
  EXPECT_THROW(ff::apply_swap(ff::vacuum(c), ff::vacuum(Cutoff{4})), std::invalid_argument);
}

TEST(Permutation, TextRoundTrip) {
  const auto u = ff::swap_matrix(4);
  std::stringstream s;
  ff::write_permutation(s, u);
  EXPECT_EQ(ff::read_permutation(s), u);
  std::stringstream bad("0 0\n1 1\n2 2\n");
  EXPECT_THROW(ff::read_permutation(bad), std::runtime_error);
}

// --- No-cloning witness -----------------------------------------------------------

TEST(NoCloning, BasisVectorsCloneExactly) {
  for (std::size_t k = 0; k <= 3; ++k) {
    const auto r = ff::no_cloning_witness(ff::number_state(k, Cutoff{3}));
    EXPECT_EQ(r.diagnostics.at("discrepancy"), 0.0);
    EXPECT_TRUE(r.passed);
  }
}

TEST(NoCloning, UniformSuperpositionIsNotCloned) {
  ff::Vector h(2);
  h << 1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2;
  const auto r = ff::no_cloning_witness(ff::Ket{Cutoff{1}, ff::Modes::one, h, true});
  // C(h x e0) = (e00 + e11)/sqrt2 and h x h = (e00 + e01 + e10 + e11)/2:
  // the difference has entries (1/sqrt2 - 1/2, -1/2, -1/2, 1/sqrt2 - 1/2).
  const double d = 1.0 / std::numbers::sqrt2 - 0.5;
  EXPECT_NEAR(r.diagnostics.at("discrepancy"), std::sqrt(2 * d * d + 0.5), 1e-15);
  EXPECT_GT(r.diagnostics.at("discrepancy"), 0.4);
  EXPECT_TRUE(r.passed);
}

TEST(NoCloning, ScalarMismatchIsTwoForTheVacuum) {
  const auto r = ff::no_cloning_witness(ff::number_state(0, Cutoff{2}));
  EXPECT_EQ(r.diagnostics.at("scalar_mismatch"), 2.0);
}

// Property: the discrepancy never falls below the analytic lower bound.
TEST(NoCloning, DiscrepancyRespectsLowerBound) {
  std::mt19937_64 gen(89);
  for (int trial = 0; trial < 20; ++trial) {
    const Cutoff c{5};
    const ff::Ket h{c, ff::Modes::one, oracle::random_vector(c.dim(), gen)};
    const auto r = ff::no_cloning_witness(h);
    EXPECT_GE(r.diagnostics.at("discrepancy") + 1e-12, r.diagnostics.at("lower_bound"));
    EXPECT_TRUE(r.passed);
  }
}

TEST(NoCloning, RejectsTheZeroVector) {
  const Cutoff c{2};
  EXPECT_THROW(ff::no_cloning_witness(ff::Ket{c, ff::Modes::one, ff::Vector::Zero(3)}), std::domain_error);
}
