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

#include "fockforge/protocols.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

namespace ff = fockforge;
using ff::cplx;
using ff::Cutoff;
using ff::PolarParam;

namespace {

constexpr double kPi = std::numbers::pi;

PolarParam draw(std::mt19937_64& gen, double r_max) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return PolarParam::from_polar(r_max * u(gen), 2.0 * kPi * u(gen) - kPi);
}

/// |a> (x) |b> from the closed-form series.
ff::Ket series_pair(cplx a, cplx b, Cutoff c) {
  const auto n = static_cast<int>(c.n_max());
  const ff::Vector va = oracle::coherent_series(a, n);
  const ff::Vector vb = oracle::coherent_series(b, n);
  ff::Vector out(va.size() * vb.size());
  for (ff::Index i = 0; i < va.size(); ++i) out.segment(i * vb.size(), vb.size()) = va(i) * vb;
  return {c, ff::Modes::two, out};
}

}  // namespace

TEST(BeamsplitterUJ, ZeroIsIdentityAndIsUnitary) {
  const Cutoff c{6};
  EXPECT_LT((ff::beamsplitter_UJ(PolarParam{}, c).matrix() - ff::Operator::identity(c, ff::Modes::two).matrix()).norm(),
            1e-15);
  EXPECT_LT(ff::unitarity_defect(ff::beamsplitter_UJ(PolarParam::from_polar(1.1, 0.3), c)), 1e-10);
}

TEST(BeamsplitterUJ, FixesTheTwoModeVacuum) {
  const Cutoff c{8};
  const auto out = ff::apply(ff::beamsplitter_UJ(PolarParam::from_polar(0.9, -2.0), c), ff::vacuum(c, ff::Modes::two));
  EXPECT_NEAR(ff::fidelity(out, ff::vacuum(c, ff::Modes::two)), 1.0, 1e-15);
}

TEST(TwoModeSqueezerUK, ZeroIsIdentityAndGuardApplies) {
  const Cutoff c{5};
  EXPECT_LT((ff::two_mode_squeezer_UK(PolarParam{}, c).matrix() - ff::Operator::identity(c, ff::Modes::two).matrix()).norm(),
            1e-15);
  EXPECT_THROW(ff::two_mode_squeezer_UK(PolarParam::real(2.0), c), std::domain_error);
  EXPECT_LT(ff::unitarity_defect(ff::two_mode_squeezer_UK(PolarParam::from_polar(0.5, 1.0), c)), 1e-10);
}

TEST(ApplyBeamsplitter, ZeroAngleIsTheIdentity) {
  const auto r = ff::apply_beamsplitter(PolarParam::real(0.7), PolarParam::from_complex(cplx{0, 0.4}), PolarParam{},
                                        Cutoff{30});
  EXPECT_NEAR(r.fidelity, 1.0, 1e-14);
  EXPECT_TRUE(r.report.passed);
}

TEST(ApplyBeamsplitter, QuarterTurnOnOneAndI) {
  const Cutoff c{36};
  const auto r = ff::apply_beamsplitter(PolarParam::real(1.0), PolarParam::from_complex(cplx{0, 1}),
                                        PolarParam::real(kPi / 2), c);
  EXPECT_GE(ff::fidelity(r.output, series_pair(cplx{0, 1}, cplx{-1, 0}, c)), 1.0 - 1e-10);
}

TEST(ApplyBeamsplitter, VacuumSecondInputSplitsTheAmplitude) {
  const Cutoff c{36};
  const auto kappa = PolarParam::from_polar(0.6, 0.9);
  const cplx alpha{1.1, -0.3};
  const auto r = ff::apply_beamsplitter(PolarParam::from_complex(alpha), PolarParam{}, kappa, c);
  const cplx out1 = std::cos(0.6) * alpha;
  const cplx out2 = -std::polar(1.0, -0.9) * std::sin(0.6) * alpha;
  EXPECT_GE(ff::fidelity(r.output, series_pair(out1, out2, c)), 1.0 - 1e-10);
}

// Property: U_J conserves the total occupation.
TEST(ApplyBeamsplitter, ConservesEnergyOnRandomInputs) {
  std::mt19937_64 gen(71);
  const Cutoff c{36};
  for (int trial = 0; trial < 5; ++trial) {
    const auto r = ff::apply_beamsplitter(draw(gen, 1.5), draw(gen, 1.5), draw(gen, kPi), c);
    EXPECT_LE(r.report.residuals.at("energy_conservation"), 1e-10);
    EXPECT_GE(r.fidelity, 1.0 - 1e-8);
  }
}

TEST(FullSwap, ExchangesOneAndI) {
  const Cutoff c{36};
  const auto r = ff::full_swap(PolarParam::real(1.0), PolarParam::from_complex(cplx{0, 1}), 0.0, c);
  EXPECT_GE(ff::fidelity(r.output, series_pair(cplx{0, 1}, cplx{1, 0}, c)), 1.0 - 1e-8);
  ASSERT_EQ(r.stages.size(), 2u);
  EXPECT_EQ(r.stages[0].name, "U_J");
  EXPECT_EQ(r.stages[1].name, "V");
}

TEST(FullSwap, EqualInputsAreFixed) {
  const Cutoff c{30};
  const auto a = PolarParam::from_complex(cplx{0.5, 0.5});
  const auto r = ff::full_swap(a, a, 0.7, c);
  EXPECT_GE(ff::fidelity(r.output, series_pair(a.value(), a.value(), c)), 1.0 - 1e-8);
}

// Property: swapping twice restores the input, for any delta.
TEST(FullSwap, DoubleSwapIsTheIdentityOnCoherentPairs) {
  std::mt19937_64 gen(73);
  const Cutoff c{36};
  for (int trial = 0; trial < 3; ++trial) {
    const auto a1 = draw(gen, 1.5);
    const auto a2 = draw(gen, 1.5);
    const double delta = draw(gen, 1.0).phase();
    const auto once = ff::full_swap(a1, a2, delta, c);
    const ff::Operator step = once.stages[1].op * once.stages[0].op;
    const auto twice = ff::apply(step, once.output);
    EXPECT_GE(ff::fidelity(twice, series_pair(a1.value(), a2.value(), c)), 1.0 - 1e-8);
  }
}

TEST(FullSwap, WarnsWhenTheTailRuleFails) {
  const auto r = ff::full_swap(PolarParam::real(5.0), PolarParam{}, 0.0, Cutoff{10});
  EXPECT_FALSE(r.report.warnings.empty());
}

TEST(ImperfectClone, VacuumInputGivesVacuumPair) {
  const auto r = ff::imperfect_clone(PolarParam{}, Cutoff{10});
  EXPECT_NEAR(r.fidelity, 1.0, 1e-15);
  EXPECT_TRUE(r.report.passed);
}

TEST(ImperfectClone, HalvesTheIntensityPerCopy) {
  const Cutoff c{40};
  for (double a : {0.25, 0.5, 1.0, 1.5, 2.0}) {
    const auto r = ff::imperfect_clone(PolarParam::real(a), c);
    const cplx half = a / std::numbers::sqrt2;
    EXPECT_GE(ff::fidelity(r.output, series_pair(half, half, c)), 1.0 - 1e-6) << a;
    EXPECT_NEAR(r.report.diagnostics.at("mean_occupation_1"), a * a / 2, 1e-6);
    EXPECT_NEAR(r.report.diagnostics.at("mean_occupation_2"), a * a / 2, 1e-6);
  }
}

// Property: the beamsplitter phase is undone by the output phase stage.
TEST(ImperfectClone, OutputDoesNotDependOnDelta) {
  const Cutoff c{32};
  const auto alpha = PolarParam::from_complex(cplx{0.8, 0.6});
  const auto ref = ff::imperfect_clone(alpha, c, 0.0);
  for (double delta : {0.4, -1.3, 2.9}) {
    const auto r = ff::imperfect_clone(alpha, c, delta);
    EXPECT_GE(ff::fidelity(r.output, ref.output), 1.0 - 1e-12) << delta;
    EXPECT_TRUE(r.report.passed);
  }
}

// --- Squeezed swap obstruction --------------------------------------------------------

TEST(Obstruction, CrossTermVanishesForRealKappaAndEqualSqueezes) {
  const auto b = PolarParam::real(0.2);
  EXPECT_EQ(ff::obstruction_cross_term(b, b, PolarParam::real(0.9)), cplx{});
}

TEST(Obstruction, ImaginaryKappaGivesISinTwoK) {
  const double beta = 0.25;
  const double k = 0.5;
  const cplx cross = ff::obstruction_cross_term(PolarParam::real(beta), PolarParam::real(beta),
                                                PolarParam::from_complex(cplx{0, k}));
  EXPECT_LT(std::abs(cross - cplx{0, beta * std::sin(2 * k)}), 1e-15);
  EXPECT_GT(std::abs(cross), 1e-3);
}

TEST(Obstruction, MatchedSqueezesAreUnchanged) {
  const auto kappa = PolarParam::from_polar(0.6, 0.8);
  const auto b1 = PolarParam::from_polar(0.2, 0.3);
  const auto b2 = PolarParam::from_complex(b1.value() * std::polar(1.0, -1.6));
  const auto r = ff::squeezed_swap_obstruction(b1, b2, kappa, Cutoff{12}, 3);
  EXPECT_LE(r.diagnostics.at("cross_term_abs"), 1e-15);
  ASSERT_EQ(r.residuals.count("unchanged"), 1u);
  EXPECT_TRUE(r.passed);
}

TEST(Obstruction, MismatchedSqueezesChange) {
  const auto b = PolarParam::real(0.25);
  const auto r = ff::squeezed_swap_obstruction(b, b, PolarParam::from_complex(cplx{0, 0.5}), Cutoff{12}, 3);
  EXPECT_TRUE(r.passed);
  EXPECT_EQ(r.residuals.count("unchanged"), 0u);
  EXPECT_GT(r.diagnostics.at("unchanged_defect"), 1e-3);
  EXPECT_LE(r.residuals.at("conjugation_vs_exp"), 1e-8);
}
