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

// Operator-identity checks. Each returns a Report whose residuals are
// Frobenius norms of (computed - closed form) on the safe block.
//
// The computed side is evaluated on a padded working cutoff (see bulk.hpp)
// for the full (n_max+1)-per-mode block; `margin` only selects the
// sub-block that enters the residual.

#include "fockforge/bulk.hpp"
#include "fockforge/core.hpp"
#include "fockforge/report.hpp"
#include "fockforge/states.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fockforge {

inline constexpr double kSmallModulus = 1e-8;
inline constexpr double kCoshGuard = 3.0;
inline constexpr std::size_t kMaxSingleModePadding = 2048;
inline constexpr std::size_t kMaxTwoModePadding = 512;

/// sin(x)/x with its Taylor limit near 0.
inline double sin_over(double x) {
  return std::abs(x) < kSmallModulus ? 1.0 - x * x / 6.0 : std::sin(x) / x;
}

inline double sinh_over(double x) {
  return std::abs(x) < kSmallModulus ? 1.0 + x * x / 6.0 : std::sinh(x) / x;
}

/// t/|t|, with the modulus-0 convention phase = 0.
inline cplx unit_phase(PolarParam t) { return std::polar(1.0, t.phase()); }

inline void require_cosh_guard(double modulus, const char* who) {
  if (std::cosh(modulus) > kCoshGuard) {
    throw std::domain_error(std::string(who) + ": cosh|param| exceeds the amplification guard 3");
  }
}

inline std::size_t resolve_margin(Cutoff c, std::optional<std::size_t> margin) {
  const auto m = margin.value_or(auto_margin(c.n_max()));
  if (m > c.n_max()) throw std::invalid_argument("margin exceeds n_max");
  return m;
}

/// Coefficients of X in U_J(t) S1(b1) S2(b2) U_J(t)^dag = e^X, where
/// X = A (a1^dag)^2 + B a1^2 + C (a2^dag)^2 + D a2^2 + E a1^dag a2^dag + F a1 a2.
struct QuadraticForm {
  cplx a1dag_sq, a1_sq, a2dag_sq, a2_sq, cross_dag, cross;
};

inline QuadraticForm squeeze_mixing_coefficients(PolarParam t, cplx b1, cplx b2) {
  const double c = std::cos(t.modulus());
  const double s = sin_over(t.modulus());
  const cplx tv = t.value();
  const cplx tc = std::conj(tv);
  const double cs = c * s;  // sin(2|t|) / (2|t|)
  QuadraticForm q;
  q.a1dag_sq = 0.5 * (c * c * b1 + tv * tv * s * s * b2);
  q.a1_sq = -0.5 * (c * c * std::conj(b1) + tc * tc * s * s * std::conj(b2));
  q.a2dag_sq = 0.5 * (c * c * b2 + tc * tc * s * s * b1);
  q.a2_sq = -0.5 * (c * c * std::conj(b2) + tv * tv * s * s * std::conj(b1));
  q.cross_dag = (b2 * tv - b1 * tc) * cs;
  q.cross = -(std::conj(b2) * tc - std::conj(b1) * tv) * cs;
  return q;
}

namespace detail {

/// Frobenius norm of the sub-block of `diff` (a full (n_max+1)^modes block)
/// whose per-mode occupations are <= n_max - margin. `diff` may hold several
/// such blocks side by side.
inline double safe_norm(const Matrix& diff, Cutoff c, std::size_t margin, Modes modes) {
  const auto idx = safe_indices(c, margin, modes);
  const auto width = space_dim(c, modes);
  double sum = 0.0;
  for (Index off = 0; off < diff.cols(); off += width) {
    for (auto col : idx) {
      for (auto row : idx) sum += std::norm(diff(row, off + col));
    }
  }
  return std::sqrt(sum);
}

inline void note_padding(Report& r, const std::string& key, const bulk::PaddedBlock& p) {
  r.diagnostics[key + "_cutoff"] = static_cast<double>(p.cutoff);
  r.diagnostics[key + "_change"] = p.change;
  if (!p.converged) {
    std::ostringstream os;
    os << "padding for " << key << " did not converge by working cutoff " << p.cutoff
       << " (last change " << p.change << ")";
    r.warnings.push_back(os.str());
  }
}

inline void note_tail(Report& r, double modulus, Cutoff c) {
  if (!tail_rule_ok(modulus, c)) r.warnings.push_back(tail_warning(modulus, c));
}

inline Report start(std::string name, std::vector<PolarParam> params, Cutoff c,
                    std::size_t margin, double tol) {
  Report r;
  r.name = std::move(name);
  r.params = std::move(params);
  r.n_max = c.n_max();
  r.margin = margin;
  r.tolerance = tol;
  return r;
}

inline std::size_t single_start(Cutoff c) { return 2 * (c.n_max() + 1); }

/// Padding convergence is judged on the default-margin safe block, whatever
/// margin the caller compares at, so the working cutoff does not depend on
/// the requested margin.
inline auto bulk_measure(Cutoff c, Modes modes) {
  return [c, modes](const Matrix& m) { return safe_norm(m, c, auto_margin(c.n_max()), modes); };
}

/// Top-left (keep+1) block of S(z), evaluated with padding.
inline bulk::PaddedBlock squeeze_block(cplx z, std::size_t keep) {
  auto eval = [&](std::size_t w) -> Matrix {
    return bulk::squeeze_matrix(z, w).topLeftCorner(keep + 1, keep + 1);
  };
  return bulk::converge_padding(eval, 2 * (keep + 1), kMaxSingleModePadding);
}

/// P U A U^dag P, given the rows of U that span the range of P.
inline Matrix conjugated_block(const bulk::SparseOp& a, const bulk::SparseRows& rows_of_u) {
  const bulk::SparseOp ua = rows_of_u * a;
  const bulk::SparseOp ud = rows_of_u.adjoint();
  return Matrix(ua * ud);
}

/// P U_J(t) (S1(b1) x S2(b2)) U_J(t)^dag P and P (S1 x S2) P on the full
/// (n_max+1)^2 block. U_J preserves n1 + n2, so rows of the safe block only
/// reach per-mode occupations <= 2 n_max; the squeeze blocks at that size
/// are padded.
struct ConjugatedPair {
  Matrix conjugated;
  Matrix product;
  bulk::PaddedBlock s1;
  bulk::PaddedBlock s2;
};

inline ConjugatedPair uj_conjugated_pair(PolarParam t, cplx b1, cplx b2, Cutoff c) {
  const std::size_t w = 2 * c.n_max();
  ConjugatedPair out;
  out.s1 = squeeze_block(b1, w);
  out.s2 = squeeze_block(b2, w);
  const auto d = static_cast<Index>(w + 1);
  Matrix k(d * d, d * d);
  for (Index i = 0; i < d; ++i) {
    for (Index kk = 0; kk < d; ++kk) {
      k.block(i * d, kk * d, d, d) = out.s1.block(i, kk) * out.s2.block;
    }
  }
  const auto a1 = bulk::mode_ladder(1, w);
  const auto a2 = bulk::mode_ladder(2, w);
  const bulk::SparseOp g =
      t.value() * bulk::SparseOp(a1.adjoint()) * a2 - std::conj(t.value()) * bulk::SparseOp(a2.adjoint()) * a1;
  const auto rows = bulk::block_indices(c.n_max(), w);
  const auto r = bulk::expm_rows(g, rows);
  const bulk::SparseOp rd = r.adjoint();
  out.conjugated = (r * k) * rd;
  out.product.resize(static_cast<Index>(rows.size()), static_cast<Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out.product(static_cast<Index>(i), static_cast<Index>(j)) = k(rows[i], rows[j]);
    }
  }
  return out;
}

}  // namespace detail

// --- Two-mode rotations ---------------------------------------------------------

/// U_J(t) a1 U_J(t)^dag = cos|t| a1 - t sin|t|/|t| a2, and the a2 counterpart.
/// U_J conserves n1 + n2, so a per-mode working cutoff of 2 n_max is exact.
inline Report check_J_rotation(PolarParam t, Cutoff c, std::optional<std::size_t> margin = {},
                               double tol = kDefaultTolerances.identity_residual) {
  const auto m = resolve_margin(c, margin);
  auto rep = detail::start("check_J_rotation", {t}, c, m, tol);
  const std::size_t w = 2 * c.n_max();
  const double co = std::cos(t.modulus());
  const cplx ts = t.value() * sin_over(t.modulus());
  const auto a1 = bulk::mode_ladder(1, w);
  const auto a2 = bulk::mode_ladder(2, w);
  const bulk::SparseOp g = t.value() * bulk::SparseOp(a1.adjoint()) * a2 -
                           std::conj(t.value()) * bulk::SparseOp(a2.adjoint()) * a1;
  const auto rows = bulk::block_indices(c.n_max(), w);
  const auto r = bulk::expm_rows(g, rows);
  const bulk::SparseOp e1 = co * a1 - ts * a2;
  const bulk::SparseOp e2 = co * a2 + std::conj(ts) * a1;
  const Matrix d1 = detail::conjugated_block(a1, r) - bulk::extract(e1, rows, rows);
  const Matrix d2 = detail::conjugated_block(a2, r) - bulk::extract(e2, rows, rows);
  rep.residuals["a1"] = detail::safe_norm(d1, c, m, Modes::two);
  rep.residuals["a2"] = detail::safe_norm(d2, c, m, Modes::two);
  rep.diagnostics["working_cutoff"] = static_cast<double>(w);

  Eigen::Matrix2cd coef;
  coef << co, -ts, std::conj(ts), co;
  rep.residuals["su2_unitarity"] = (coef.adjoint() * coef - Eigen::Matrix2cd::Identity()).norm();
  rep.residuals["su2_determinant"] = std::abs(coef.determinant() - 1.0);
  return rep.finalize();
}

/// U_K(t) a1 U_K(t)^dag = cosh|t| a1 - t sinh|t|/|t| a2^dag, and the a2^dag counterpart.
inline Report check_K_rotation(PolarParam t, Cutoff c, std::optional<std::size_t> margin = {},
                               double tol = kDefaultTolerances.identity_residual) {
  require_cosh_guard(t.modulus(), "check_K_rotation");
  const auto m = resolve_margin(c, margin);
  auto rep = detail::start("check_K_rotation", {t}, c, m, tol);
  const double ch = std::cosh(t.modulus());
  const cplx ts = t.value() * sinh_over(t.modulus());
  auto eval = [&](std::size_t w) -> Matrix {
    const auto a1 = bulk::mode_ladder(1, w);
    const bulk::SparseOp a2 = bulk::mode_ladder(2, w);
    const bulk::SparseOp a2d = a2.adjoint();
    const bulk::SparseOp g = t.value() * bulk::SparseOp(a1.adjoint()) * a2d -
                             std::conj(t.value()) * a2 * a1;
    const auto rows = bulk::block_indices(c.n_max(), w);
    const auto r = bulk::expm_rows(g, rows);
    const bulk::SparseOp e1 = ch * a1 - ts * a2d;
    const bulk::SparseOp e2 = ch * a2d - std::conj(ts) * a1;
    const auto n = static_cast<Index>(rows.size());
    Matrix out(n, 2 * n);
    out.leftCols(n) = detail::conjugated_block(a1, r) - bulk::extract(e1, rows, rows);
    out.rightCols(n) = detail::conjugated_block(a2d, r) - bulk::extract(e2, rows, rows);
    return out;
  };
  const auto padded = bulk::converge_padding(eval, detail::single_start(c), kMaxTwoModePadding,
                                             detail::bulk_measure(c, Modes::two));
  detail::note_padding(rep, "padding", padded);
  const auto n = padded.block.rows();
  rep.residuals["a1"] = detail::safe_norm(padded.block.leftCols(n), c, m, Modes::two);
  rep.residuals["a2dag"] = detail::safe_norm(padded.block.rightCols(n), c, m, Modes::two);

  Eigen::Matrix2cd coef;
  coef << ch, -ts, -std::conj(ts), ch;
  const Eigen::Matrix2cd eta = Eigen::Vector2cd(1.0, -1.0).asDiagonal();
  rep.residuals["su11_metric"] = (coef.adjoint() * eta * coef - eta).norm();
  rep.residuals["su11_determinant"] = std::abs(coef.determinant() - 1.0);
  rep.residuals["hyperbolic_normalization"] =
      std::abs(ch * ch - std::sinh(t.modulus()) * std::sinh(t.modulus()) - 1.0);
  return rep.finalize();
}

// --- Single-mode squeeze identities -------------------------------------------

/// S(e) a S(e)^dag = cosh|e| a - e^{i phi} sinh|e| a^dag.
inline Report check_squeeze_conjugation(PolarParam eps, Cutoff c,
                                        std::optional<std::size_t> margin = {},
                                        double tol = kDefaultTolerances.identity_residual) {
  require_cosh_guard(eps.modulus(), "check_squeeze_conjugation");
  const auto m = resolve_margin(c, margin);
  auto rep = detail::start("check_squeeze_conjugation", {eps}, c, m, tol);
  const auto keep = c.dim();
  auto eval = [&](std::size_t w) -> Matrix {
    const Matrix top = bulk::squeeze_matrix(eps.value(), w).topRows(keep);
    const bulk::SparseOp a = bulk::ladder(w);
    return top * a * top.adjoint();
  };
  const auto padded = bulk::converge_padding(eval, detail::single_start(c), kMaxSingleModePadding,
                                             detail::bulk_measure(c, Modes::one));
  detail::note_padding(rep, "padding", padded);
  const Matrix a = annihilation(c).matrix();
  const Matrix expected =
      std::cosh(eps.modulus()) * a -
      std::polar(std::sinh(eps.modulus()), eps.phase()) * Matrix(a.adjoint());
  rep.residuals["conjugation"] = detail::safe_norm(padded.block - expected, c, m, Modes::one);
  return rep.finalize();
}

/// cosh|e| alpha + e^{i phi} sinh|e| conj(alpha).
inline cplx squeezed_displacement_label(PolarParam eps, PolarParam alpha) {
  return std::cosh(eps.modulus()) * alpha.value() +
         std::polar(std::sinh(eps.modulus()), eps.phase()) * std::conj(alpha.value());
}

namespace detail {

struct SdsEvaluation {
  bulk::PaddedBlock difference;  // P S D S^dag P - P D(alpha') P
  Vector state;                  // P S D S^dag |0>
};

inline SdsEvaluation evaluate_sds(cplx eps, cplx alpha, cplx alpha_out, Cutoff c) {
  const auto keep = c.dim();
  auto eval = [&](std::size_t w) -> Matrix {
    const Matrix s = bulk::squeeze_matrix(eps, w);
    const Matrix top = s.topRows(keep);
    return top * bulk::displacement_matrix(alpha, w) * top.adjoint() -
           bulk::displacement_matrix(alpha_out, w).topLeftCorner(keep, keep);
  };
  SdsEvaluation out;
  out.difference =
      bulk::converge_padding(eval, single_start(c), kMaxSingleModePadding, bulk_measure(c, Modes::one));
  const Matrix s = bulk::squeeze_matrix(eps, out.difference.cutoff);
  const Vector pulled = s.row(0).adjoint();
  out.state = s.topRows(keep) * (bulk::displacement_matrix(alpha, out.difference.cutoff) * pulled);
  return out;
}

}  // namespace detail

/// S(e) D(alpha) S(e)^dag = D(cosh|e| alpha + e^{i phi} sinh|e| conj(alpha)),
/// plus the two phase-aligned special cases phi = 2 chi and phi = 2 chi + pi.
inline Report check_SDS(PolarParam eps, PolarParam alpha, Cutoff c,
                        std::optional<std::size_t> margin = {},
                        double tol = kDefaultTolerances.identity_residual) {
  require_cosh_guard(eps.modulus(), "check_SDS");
  const auto m = resolve_margin(c, margin);
  auto rep = detail::start("check_SDS", {eps, alpha}, c, m, tol);
  auto run = [&](const std::string& key, PolarParam e, cplx predicted) {
    const auto ev = detail::evaluate_sds(e.value(), alpha.value(), predicted, c);
    detail::note_padding(rep, key, ev.difference);
    detail::note_tail(rep, std::abs(predicted), c);
    rep.residuals[key] = detail::safe_norm(ev.difference.block, c, m, Modes::one);
    const Ket got{c, Modes::one, ev.state, false};
    rep.fidelities[key + "_state"] = fidelity(got, coherent(PolarParam::from_complex(predicted), c));
  };
  run("general", eps, squeezed_displacement_label(eps, alpha));
  const double chi = alpha.phase();
  const double r = eps.modulus();
  run("scale_up", PolarParam::from_polar(r, 2.0 * chi), std::exp(r) * alpha.value());
  run("scale_down", PolarParam::from_polar(r, 2.0 * chi + std::numbers::pi),
      std::exp(-r) * alpha.value());
  return rep.finalize();
}

/// S(e) S(a) = S(a) S(e) when the phases agree. With differing phases the
/// commutator norm is recorded as the diagnostic "commutator" and does not
/// enter the verdict.
inline Report check_SSS_commute(PolarParam eps, PolarParam alpha, Cutoff c,
                                std::optional<std::size_t> margin = {},
                                double tol = kDefaultTolerances.identity_residual) {
  require_cosh_guard(eps.modulus(), "check_SSS_commute");
  require_cosh_guard(alpha.modulus(), "check_SSS_commute");
  const auto m = resolve_margin(c, margin);
  auto rep = detail::start("check_SSS_commute", {eps, alpha}, c, m, tol);
  const auto keep = c.dim();
  auto eval = [&](std::size_t w) -> Matrix {
    const Matrix se = bulk::squeeze_matrix(eps.value(), w);
    const Matrix sa = bulk::squeeze_matrix(alpha.value(), w);
    return se.topRows(keep) * sa.leftCols(keep) - sa.topRows(keep) * se.leftCols(keep);
  };
  const auto padded = bulk::converge_padding(eval, detail::single_start(c), kMaxSingleModePadding,
                                             detail::bulk_measure(c, Modes::one));
  detail::note_padding(rep, "padding", padded);
  const double norm = detail::safe_norm(padded.block, c, m, Modes::one);
  const bool matched = eps.modulus() == 0.0 || alpha.modulus() == 0.0 ||
                       std::abs(PolarParam::wrap_phase(eps.phase() - alpha.phase())) <= 1e-12;
  rep.diagnostics["phase_matched"] = matched ? 1.0 : 0.0;
  if (matched) {
    rep.residuals["commutator"] = norm;
  } else {
    rep.diagnostics["commutator"] = norm;
  }
  return rep.finalize();
}

// --- Phase rotation -----------------------------------------------------------

/// V(t) = e^{itN} as an exact diagonal.
inline Operator phase_rotation(double t, Cutoff c) {
  Matrix v = Matrix::Zero(c.dim(), c.dim());
  for (Index n = 0; n < c.dim(); ++n) v(n, n) = std::polar(1.0, t * static_cast<double>(n));
  return {c, Modes::one, std::move(v)};
}

/// V(t) D(alpha) V(t)^dag = D(e^{it} alpha), V(t)|alpha> = |e^{it} alpha>, V(t)|0> = |0>.
/// Diagonal conjugation commutes with truncation, so no padding is needed.
inline Report check_phase_formula(double t, PolarParam alpha, Cutoff c,
                                  std::optional<std::size_t> margin = {},
                                  double tol = kDefaultTolerances.identity_residual) {
  const auto m = resolve_margin(c, margin);
  auto rep = detail::start("check_phase_formula", {PolarParam::real(t), alpha}, c, m, tol);
  detail::note_tail(rep, alpha.modulus(), c);
  const auto v = phase_rotation(t, c);
  const auto rotated = PolarParam::from_complex(std::polar(1.0, t) * alpha.value());
  rep.residuals["operator"] =
      residual(conjugate_by(v, displacement(alpha, c)), displacement(rotated, c), m);
  rep.fidelities["rotated_state"] = fidelity(apply(v, coherent(alpha, c)), coherent(rotated, c));
  rep.residuals["vacuum_fixed"] =
      (apply(v, vacuum(c)).amplitudes() - vacuum(c).amplitudes()).norm();
  return rep.finalize();
}

// --- Squeeze pair invariance under U_J ------------------------------------------

/// With b = alpha conj(t)/t, U_J(t) S1(alpha) S2(b) U_J(t)^dag = S1(alpha) S2(b).
/// Also checks the three X coefficients that make this work.
inline Report check_UJ_squeeze_invariance(PolarParam t, PolarParam alpha, Cutoff c,
                                          std::optional<std::size_t> margin = {},
                                          double tol = kDefaultTolerances.identity_residual) {
  require_cosh_guard(alpha.modulus(), "check_UJ_squeeze_invariance");
  const auto m = resolve_margin(c, margin);
  auto rep = detail::start("check_UJ_squeeze_invariance", {t, alpha}, c, m, tol);
  if (t.modulus() == 0.0) {
    rep.diagnostics["degenerate_t"] = 1.0;
    rep.residuals["invariance"] = 0.0;
    return rep.finalize();
  }
  const cplx u = unit_phase(t);
  const cplx beta = alpha.value() * std::conj(u) * std::conj(u);
  const auto q = squeeze_mixing_coefficients(t, alpha.value(), beta);
  rep.residuals["coef_a1dag_sq"] = std::abs(q.a1dag_sq - 0.5 * alpha.value());
  rep.residuals["coef_a2dag_sq"] = std::abs(q.a2dag_sq - 0.5 * beta);
  rep.residuals["coef_cross"] = std::abs(q.cross_dag);
  rep.diagnostics["coef_cross_violated"] =
      std::abs(squeeze_mixing_coefficients(t, alpha.value(), -beta).cross_dag);

  const auto pair = detail::uj_conjugated_pair(t, alpha.value(), beta, c);
  detail::note_padding(rep, "s1", pair.s1);
  detail::note_padding(rep, "s2", pair.s2);
  rep.residuals["invariance"] = detail::safe_norm(pair.conjugated - pair.product, c, m, Modes::two);
  return rep.finalize();
}

}  // namespace fockforge
