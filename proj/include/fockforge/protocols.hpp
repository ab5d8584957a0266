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

#pragma once

// Two-mode protocols built on the beamsplitter U_J: coherent-state swap,
// imperfect cloning, and the squeezed-pair obstruction.

#include "fockforge/bulk.hpp"
#include "fockforge/core.hpp"
#include "fockforge/formulas.hpp"
#include "fockforge/report.hpp"
#include "fockforge/states.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fockforge {

struct Stage {
  std::string name;
  Operator op;
};

struct TwoModeProtocolResult {
  Ket output;
  Ket predicted;
  double fidelity;
  std::vector<Stage> stages;
  Report report;
};

namespace detail {

inline Operator two_mode_operator(const bulk::SparseOp& g, Cutoff c) {
  return {c, Modes::two, Matrix(g)};
}

/// kappa a1^dag a2 - conj(kappa) a2^dag a1 on the truncated two-mode space.
inline bulk::SparseOp uj_generator(cplx kappa, std::size_t n_max) {
  const auto a1 = bulk::mode_ladder(1, n_max);
  const auto a2 = bulk::mode_ladder(2, n_max);
  return kappa * bulk::SparseOp(a1.adjoint()) * a2 -
         std::conj(kappa) * bulk::SparseOp(a2.adjoint()) * a1;
}

/// e^{i(theta1 N1 + theta2 N2)} as an exact diagonal.
inline Operator two_mode_phase(double theta1, double theta2, Cutoff c) {
  const auto d = c.dim();
  Matrix v = Matrix::Zero(d * d, d * d);
  for (Index n1 = 0; n1 < d; ++n1) {
    for (Index n2 = 0; n2 < d; ++n2) {
      v(n1 * d + n2, n1 * d + n2) =
          std::polar(1.0, theta1 * static_cast<double>(n1) + theta2 * static_cast<double>(n2));
    }
  }
  return {c, Modes::two, std::move(v)};
}

inline double total_occupation(const Ket& k) { return mean_occupation(k, 1) + mean_occupation(k, 2); }

inline Ket coherent_pair(cplx a1, cplx a2, Cutoff c) {
  return tensor(coherent(PolarParam::from_complex(a1), c), coherent(PolarParam::from_complex(a2), c));
}

inline Report protocol_report(std::string name, std::vector<PolarParam> params, Cutoff c) {
  Report r;
  r.name = std::move(name);
  r.params = std::move(params);
  r.n_max = c.n_max();
  r.margin = 0;
  r.tolerance = kDefaultTolerances.fidelity_deficit;
  return r;
}

}  // namespace detail

/// U_J(kappa) = exp(kappa a1^dag a2 - conj(kappa) a2^dag a1).
inline Operator beamsplitter_UJ(PolarParam kappa, Cutoff c) {
  return expm(detail::two_mode_operator(detail::uj_generator(kappa.value(), c.n_max()), c));
}

/// U_K(kappa) = exp(kappa a1^dag a2^dag - conj(kappa) a2 a1).
inline Operator two_mode_squeezer_UK(PolarParam kappa, Cutoff c) {
  require_cosh_guard(kappa.modulus(), "two_mode_squeezer_UK");
  const auto a1 = bulk::mode_ladder(1, c.n_max());
  const auto a2 = bulk::mode_ladder(2, c.n_max());
  const bulk::SparseOp g = kappa.value() * bulk::SparseOp(a1.adjoint()) * bulk::SparseOp(a2.adjoint()) -
                           std::conj(kappa.value()) * a2 * a1;
  return expm(detail::two_mode_operator(g, c));
}

/// U_J(kappa) (|a1> x |a2>), predicted |cos a1 + e^{i delta} sin a2> x |cos a2 - e^{-i delta} sin a1>
/// with cos, sin of |kappa| and delta = phase(kappa).
inline TwoModeProtocolResult apply_beamsplitter(PolarParam a1, PolarParam a2, PolarParam kappa,
                                                Cutoff c) {
  auto rep = detail::protocol_report("apply_beamsplitter", {a1, a2, kappa}, c);
  detail::note_tail(rep, std::max(a1.modulus(), a2.modulus()), c);
  const double co = std::cos(kappa.modulus());
  const double si = std::sin(kappa.modulus());
  const cplx e = std::polar(1.0, kappa.phase());
  const Ket input = detail::coherent_pair(a1.value(), a2.value(), c);
  auto u = beamsplitter_UJ(kappa, c);
  Ket output = apply(u, input);
  Ket predicted = detail::coherent_pair(co * a1.value() + e * si * a2.value(),
                                        co * a2.value() - std::conj(e) * si * a1.value(), c);
  const double f = fidelity(output, predicted);
  rep.fidelities["output"] = f;
  rep.residuals["energy_conservation"] =
      std::abs(detail::total_occupation(output) - detail::total_occupation(input));
  rep.finalize();
  return {std::move(output), std::move(predicted), f, {{"U_J", std::move(u)}}, std::move(rep)};
}

/// U_J with |kappa| = pi/2 and phase delta, then V = e^{-i delta N} x e^{i(delta+pi) N}:
/// |a1> x |a2>  ->  |a2> x |a1>.
inline TwoModeProtocolResult full_swap(PolarParam a1, PolarParam a2, double delta, Cutoff c) {
  auto rep = detail::protocol_report("full_swap", {a1, a2, PolarParam::real(delta)}, c);
  detail::note_tail(rep, std::max(a1.modulus(), a2.modulus()), c);
  const Ket input = detail::coherent_pair(a1.value(), a2.value(), c);
  auto u = beamsplitter_UJ(PolarParam::from_polar(std::numbers::pi / 2, delta), c);
  auto v = detail::two_mode_phase(-delta, delta + std::numbers::pi, c);
  Ket output = apply(v, apply(u, input));
  Ket predicted = detail::coherent_pair(a2.value(), a1.value(), c);
  const double f = fidelity(output, predicted);
  rep.fidelities["output"] = f;
  rep.finalize();
  std::vector<Stage> stages;
  stages.push_back({"U_J", std::move(u)});
  stages.push_back({"V", std::move(v)});
  return {std::move(output), std::move(predicted), f, std::move(stages), std::move(rep)};
}

/// U_J with |kappa| = pi/4 and phase delta, then I x e^{i(delta+pi) N}:
/// |alpha> x |0>  ->  |alpha/sqrt2> x |alpha/sqrt2>.
inline TwoModeProtocolResult imperfect_clone(PolarParam alpha, Cutoff c, double delta = 0.0) {
  auto rep = detail::protocol_report("imperfect_clone", {alpha, PolarParam::real(delta)}, c);
  detail::note_tail(rep, alpha.modulus(), c);
  const Ket input = detail::coherent_pair(alpha.value(), cplx{}, c);
  auto u = beamsplitter_UJ(PolarParam::from_polar(std::numbers::pi / 4, delta), c);
  auto v = detail::two_mode_phase(0.0, delta + std::numbers::pi, c);
  Ket output = apply(v, apply(u, input));
  const cplx half = alpha.value() / std::numbers::sqrt2;
  Ket predicted = detail::coherent_pair(half, half, c);
  const double f = fidelity(output, predicted);
  const double expected = 0.5 * alpha.modulus() * alpha.modulus();
  const double n1 = mean_occupation(output, 1);
  const double n2 = mean_occupation(output, 2);
  rep.fidelities["output"] = f;
  rep.residuals["marginal1_occupation"] = std::abs(n1 - expected);
  rep.residuals["marginal2_occupation"] = std::abs(n2 - expected);
  rep.diagnostics["mean_occupation_1"] = n1;
  rep.diagnostics["mean_occupation_2"] = n2;
  rep.finalize();
  std::vector<Stage> stages;
  stages.push_back({"U_J", std::move(u)});
  stages.push_back({"V", std::move(v)});
  return {std::move(output), std::move(predicted), f, std::move(stages), std::move(rep)};
}

/// (b2 kappa - b1 conj(kappa)) sin(2|kappa|) / (2|kappa|).
inline cplx obstruction_cross_term(PolarParam b1, PolarParam b2, PolarParam kappa) {
  const double k2 = 2.0 * kappa.modulus();
  return (b2.value() * kappa.value() - b1.value() * std::conj(kappa.value())) * sin_over(k2);
}

namespace detail {

/// P e^{X} P on the full (n_max+1)^2 block, X the quadratic form q, evaluated
/// with padding by the Chebyshev action of X on the block's basis vectors.
inline bulk::PaddedBlock quadratic_exponential_block(const QuadraticForm& q, Cutoff c) {
  auto eval = [&](std::size_t w) -> Matrix {
    const bulk::SparseOp a1 = bulk::mode_ladder(1, w);
    const bulk::SparseOp a2 = bulk::mode_ladder(2, w);
    const bulk::SparseOp a1d = a1.adjoint();
    const bulk::SparseOp a2d = a2.adjoint();
    const bulk::SparseOp x = q.a1dag_sq * a1d * a1d + q.a1_sq * a1 * a1 + q.a2dag_sq * a2d * a2d +
                             q.a2_sq * a2 * a2 + q.cross_dag * a1d * a2d + q.cross * a1 * a2;
    const auto rows = bulk::block_indices(c.n_max(), w);
    Matrix basis = Matrix::Zero(x.rows(), static_cast<Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) basis(rows[k], static_cast<Index>(k)) = 1.0;
    const Matrix cols = bulk::expm_multiply_skew(x, basis);
    Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Index>(k)) = cols.row(rows[k]);
    return out;
  };
  return bulk::converge_padding(eval, single_start(c), kMaxTwoModePadding,
                                bulk_measure(c, Modes::two));
}

}  // namespace detail

/// U_J(kappa) S1(b1) S2(b2) U_J(kappa)^dag = e^{X}, with X's six coefficients
/// in closed form. When the a1^dag a2^dag coefficient vanishes the
/// conjugation leaves S1(b1) S2(b2) unchanged; otherwise it does not.
inline Report squeezed_swap_obstruction(PolarParam b1, PolarParam b2, PolarParam kappa, Cutoff c,
                                        std::optional<std::size_t> margin = {},
                                        double tol = kDefaultTolerances.identity_residual) {
  require_cosh_guard(b1.modulus(), "squeezed_swap_obstruction");
  require_cosh_guard(b2.modulus(), "squeezed_swap_obstruction");
  const auto m = resolve_margin(c, margin);
  auto rep = detail::start("squeezed_swap_obstruction", {b1, b2, kappa}, c, m, tol);
  const auto q = squeeze_mixing_coefficients(kappa, b1.value(), b2.value());
  const cplx cross = obstruction_cross_term(b1, b2, kappa);
  rep.diagnostics["cross_term_re"] = cross.real();
  rep.diagnostics["cross_term_im"] = cross.imag();
  rep.diagnostics["cross_term_abs"] = std::abs(cross);
  rep.residuals["cross_term_formula"] = std::abs(q.cross_dag - cross);
  rep.residuals["cross_term_adjoint"] = std::abs(q.cross + std::conj(q.cross_dag));

  const auto pair = detail::uj_conjugated_pair(kappa, b1.value(), b2.value(), c);
  detail::note_padding(rep, "s1", pair.s1);
  detail::note_padding(rep, "s2", pair.s2);
  const auto ex = detail::quadratic_exponential_block(q, c);
  detail::note_padding(rep, "exp_x", ex);
  rep.residuals["conjugation_vs_exp"] =
      detail::safe_norm(pair.conjugated - ex.block, c, m, Modes::two);
  const double unchanged = detail::safe_norm(pair.conjugated - pair.product, c, m, Modes::two);
  if (std::abs(cross) <= 1e-12) {
    rep.residuals["unchanged"] = unchanged;
  } else {
    rep.diagnostics["unchanged_defect"] = unchanged;
  }
  return rep.finalize();
}

}  // namespace fockforge
