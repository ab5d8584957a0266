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

#include "fockforge/core.hpp"
#include "fockforge/report.hpp"

#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fockforge {

/// Permutation matrix on C^n (x) C^n, stored as the column index of the
/// single 1 in each row.
class PermutationOperator {
 public:
  PermutationOperator(std::size_t n, std::vector<Index> column_of_row)
      : n_(n), col_(std::move(column_of_row)) {
    if (n < 1) throw std::invalid_argument("PermutationOperator: n must be positive");
    const auto size = static_cast<std::size_t>(n * n);
    if (col_.size() != size) throw std::invalid_argument("PermutationOperator: need n^2 rows");
    std::vector<bool> hit(size, false);
    for (auto c : col_) {
      if (c < 0 || static_cast<std::size_t>(c) >= size || hit[static_cast<std::size_t>(c)]) {
        throw std::invalid_argument("PermutationOperator: not a permutation");
      }
      hit[static_cast<std::size_t>(c)] = true;
    }
  }

  std::size_t n() const noexcept { return n_; }
  Index size() const noexcept { return static_cast<Index>(col_.size()); }
  Index column_of(Index row) const { return col_.at(static_cast<std::size_t>(row)); }

  Eigen::MatrixXi dense() const {
    Eigen::MatrixXi m = Eigen::MatrixXi::Zero(size(), size());
    for (Index r = 0; r < size(); ++r) m(r, column_of(r)) = 1;
    return m;
  }

  /// (P x)_r = x_{col(r)}: a coordinate permutation, no arithmetic.
  Vector apply(const Vector& x) const {
    if (x.size() != size()) throw std::invalid_argument("PermutationOperator: dimension mismatch");
    Vector out(size());
    for (Index r = 0; r < size(); ++r) out(r) = x(column_of(r));
    return out;
  }

  /// Matrix product (*this) * o.
  PermutationOperator operator*(const PermutationOperator& o) const {
    if (o.n_ != n_) throw std::invalid_argument("PermutationOperator: dimension mismatch");
    std::vector<Index> c(col_.size());
    for (std::size_t r = 0; r < col_.size(); ++r) c[r] = o.column_of(col_[r]);
    return {n_, std::move(c)};
  }

  bool is_involution() const {
    for (Index r = 0; r < size(); ++r) {
      if (column_of(column_of(r)) != r) return false;
    }
    return true;
  }

  friend bool operator==(const PermutationOperator& a, const PermutationOperator& b) {
    return a.n_ == b.n_ && a.col_ == b.col_;
  }

 private:
  std::size_t n_;
  std::vector<Index> col_;
};

/// U with U_{ij,kl} = delta_il delta_jk, composite index ij -> i n + j.
inline PermutationOperator swap_matrix(std::size_t n) {
  if (n < 2) throw std::invalid_argument("swap_matrix: n must be at least 2");
  const auto nn = static_cast<Index>(n);
  std::vector<Index> col(n * n);
  for (Index i = 0; i < nn; ++i) {
    for (Index j = 0; j < nn; ++j) col[static_cast<std::size_t>(i * nn + j)] = j * nn + i;
  }
  return {n, std::move(col)};
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline Vector apply_swap(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("apply_swap: dimension mismatch");
  return swap_matrix(static_cast<std::size_t>(a.size())).apply(kron(a, b));
}

/// U (a x b) = b x a.
inline Ket apply_swap(const Ket& a, const Ket& b) {
  if (a.dim() != b.dim() || a.modes() != Modes::one || b.modes() != Modes::one) {
    throw std::invalid_argument("apply_swap: need two single-mode kets of equal dimension");
  }
  return {a.cutoff(), Modes::two, apply_swap(a.amplitudes(), b.amplitudes()), false};
}

/// Three CNOT gates whose ordered product is swap_matrix(2); the outer two
/// are controlled on the first qubit, the middle one on the second.
inline std::array<PermutationOperator, 3> cnot_factorization() {
  const PermutationOperator outer{2, {0, 1, 3, 2}};
  const PermutationOperator middle{2, {0, 3, 2, 1}};
  return {outer, middle, outer};
}

/// Export: one "row col" line per unit entry.
inline void write_permutation(std::ostream& os, const PermutationOperator& p) {
  for (Index r = 0; r < p.size(); ++r) os << r << ' ' << p.column_of(r) << '\n';
}

inline PermutationOperator read_permutation(std::istream& is) {
  std::vector<std::pair<Index, Index>> entries;
  Index r = 0;
  Index c = 0;
  while (is >> r >> c) entries.emplace_back(r, c);
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(entries.size()))));
  if (n * n != entries.size()) throw std::runtime_error("read_permutation: entry count is not n^2");
  std::vector<Index> col(entries.size(), -1);
  for (auto [row, column] : entries) {
    if (row < 0 || static_cast<std::size_t>(row) >= col.size() || col[static_cast<std::size_t>(row)] != -1) {
      throw std::runtime_error("read_permutation: bad row index");
    }
    col[static_cast<std::size_t>(row)] = column;
  }
  return {n, std::move(col)};
}

// --- No-cloning witness -------------------------------------------------------

/// The linear extension C of basis cloning, C(e_k x e_0) = e_k x e_k, applied
/// to h x e_0.
inline Vector linear_basis_cloner(const Vector& h) {
  const auto n = h.size();
  Vector out = Vector::Zero(n * n);
  for (Index k = 0; k < n; ++k) out(k * n + k) = h(k);
  return out;
}

/// Compares C(h x e_0) with h x h. For h with two or more nonzero amplitudes
/// the distance is at least sqrt(||h||^4 - sum |h_k|^4) > 0; for a basis
/// vector it is 0. Also evaluates the scaling argument at 2h: linearity gives
/// C(2h x e_0) = 2 C(h x e_0), while cloning would demand 4 (h x h).
inline Report no_cloning_witness(const Ket& h) {
  if (h.norm() == 0.0) throw std::domain_error("no_cloning_witness: zero vector");
  const Vector& v = h.amplitudes();
  const Vector cloned = linear_basis_cloner(v);
  const Vector product = kron(v, v);
  const double discrepancy = (cloned - product).norm();
  const double n2 = v.squaredNorm();
  const double quartic = v.cwiseAbs2().cwiseAbs2().sum();
  const double bound = std::sqrt(std::max(0.0, n2 * n2 - quartic));
  Index support = 0;
  for (Index k = 0; k < v.size(); ++k) support += v(k) != cplx{} ? 1 : 0;

  Report rep;
  rep.name = "no_cloning_witness";
  rep.n_max = h.cutoff().n_max();
  rep.margin = 0;
  rep.tolerance = 1e-12;
  rep.diagnostics["discrepancy"] = discrepancy;
  rep.diagnostics["lower_bound"] = bound;
  rep.diagnostics["support"] = static_cast<double>(support);
  if (support >= 2) {
    rep.residuals["bound_violation"] = std::max(0.0, bound - discrepancy);
  } else {
    rep.residuals["basis_discrepancy"] = discrepancy;
  }
  const Vector lhs = 4.0 * product;  // cloning of 2h
  const Vector rhs = 2.0 * product;  // linearity applied to a cloned h
  const double mismatch = (lhs - rhs).norm();
  rep.diagnostics["scalar_mismatch"] = mismatch;
  rep.diagnostics["linear_vs_clone_at_2h"] = (2.0 * cloned - lhs).norm();
  rep.residuals["scalar_mismatch_defect"] = std::abs(mismatch - 2.0 * n2);
  return rep.finalize();
}

}  // namespace fockforge
