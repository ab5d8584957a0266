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

// Bulk evaluation of operator identities.
//
// A conjugation U A U^dagger compared on the safe block P(.)P depends on
// where U^dagger carries the safe states, and squeezing-type unitaries carry
// them far above the comparison cutoff. The helpers here evaluate such
// expressions on a padded working cutoff W and keep only the safe block;
// W grows geometrically until the block stops changing. Two-mode generators are held
// sparse so that W can reach a few hundred per mode.

#include "fockforge/core.hpp"
#include "fockforge/linalg.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fockforge::bulk {

using SparseOp = Eigen::SparseMatrix<cplx>;
using SparseRows = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

inline SparseOp ladder(std::size_t n_max) {
  const auto d = static_cast<Index>(n_max + 1);
  SparseOp a(d, d);
  a.reserve(Eigen::VectorXi::Constant(d, 1));
  for (Index n = 1; n < d; ++n) a.insert(n - 1, n) = std::sqrt(static_cast<double>(n));
  a.makeCompressed();
  return a;
}

inline SparseOp kron(const SparseOp& a, const SparseOp& b) {
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
  for (Index ca = 0; ca < a.outerSize(); ++ca) {
    for (SparseOp::InnerIterator ia(a, ca); ia; ++ia) {
      for (Index cb = 0; cb < b.outerSize(); ++cb) {
        for (SparseOp::InnerIterator ib(b, cb); ib; ++ib) {
          trip.emplace_back(ia.row() * b.rows() + ib.row(), ca * b.cols() + cb,
                            ia.value() * ib.value());
        }
      }
    }
  }
  SparseOp out(a.rows() * b.rows(), a.cols() * b.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

inline SparseOp identity(std::size_t n_max) {
  const auto d = static_cast<Index>(n_max + 1);
  SparseOp id(d, d);
  id.setIdentity();
  return id;
}

/// Annihilation operator of mode 1 or 2 on the two-mode space with per-mode cutoff n_max.
inline SparseOp mode_ladder(int mode, std::size_t n_max) {
  return mode == 1 ? kron(ladder(n_max), identity(n_max)) : kron(identity(n_max), ladder(n_max));
}

/// Two-mode indices (n1, n2) with n1, n2 <= keep, first factor major, on a
/// space with per-mode cutoff n_max.
inline std::vector<Index> block_indices(std::size_t keep, std::size_t n_max) {
  std::vector<Index> out;
  const auto d = static_cast<Index>(n_max + 1);
  for (Index i = 0; i <= static_cast<Index>(keep); ++i) {
    for (Index j = 0; j <= static_cast<Index>(keep); ++j) out.push_back(i * d + j);
  }
  return out;
}

/// Dense submatrix op[rows, cols].
inline Matrix extract(const SparseOp& op, const std::vector<Index>& rows,
                      const std::vector<Index>& cols) {
  std::map<Index, Index> row_pos;
  for (std::size_t k = 0; k < rows.size(); ++k) row_pos[rows[k]] = static_cast<Index>(k);
  Matrix out = Matrix::Zero(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    for (SparseOp::InnerIterator it(op, cols[k]); it; ++it) {
      auto hit = row_pos.find(it.row());
      if (hit != row_pos.end()) out(hit->second, static_cast<Index>(k)) = it.value();
    }
  }
  return out;
}

/// Rows `rows` of e^{G}. Only the connected components of G's sparsity graph
/// that contain a requested row are exponentiated.
inline SparseRows expm_rows(const SparseOp& g, const std::vector<Index>& rows) {
  const auto n = g.rows();
  linalg::UnionFind uf(n);
  for (Index c = 0; c < g.outerSize(); ++c) {
    for (SparseOp::InnerIterator it(g, c); it; ++it) {
      if (it.value() != cplx{}) uf.unite(it.row(), c);
    }
  }
  std::map<Index, std::vector<Index>> members;
  std::map<Index, bool> wanted;
  for (auto r : rows) wanted[uf.find(r)] = true;
  for (Index i = 0; i < n; ++i) {
    const auto root = uf.find(i);
    if (wanted.count(root)) members[root].push_back(i);
  }
  auto local = [&](Index root, Index global) {
    const auto& idx = members[root];
    return static_cast<Index>(std::lower_bound(idx.begin(), idx.end(), global) - idx.begin());
  };
  std::map<Index, std::vector<Index>> local_rows;
  for (auto r : rows) local_rows[uf.find(r)].push_back(local(uf.find(r), r));
  for (auto& [_, lr] : local_rows) {
    std::sort(lr.begin(), lr.end());
    lr.erase(std::unique(lr.begin(), lr.end()), lr.end());
  }
  // Components with identical blocks and row requests (e.g. mirror-image
  // chains) share one computation.
  struct Done {
    Matrix block;
    std::vector<Index> rows;
    Index root;
  };
  std::vector<Done> seen;
  std::map<Index, Matrix> computed;
  for (const auto& [root, idx] : members) {
    Matrix block = extract(g, idx, idx);
    const auto& lr = local_rows[root];
    auto hit = std::find_if(seen.begin(), seen.end(), [&](const Done& d) {
      return d.rows == lr && d.block.rows() == block.rows() && d.block == block;
    });
    if (hit != seen.end()) {
      computed[root] = computed[hit->root];
    } else {
      computed[root] = linalg::expm_block_rows(block, lr);
      seen.push_back({std::move(block), lr, root});
    }
  }
  std::vector<Eigen::Triplet<cplx>> trip;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto root = uf.find(rows[k]);
    const auto& idx = members[root];
    const auto& lr = local_rows[root];
    const auto pos = static_cast<Index>(
        std::lower_bound(lr.begin(), lr.end(), local(root, rows[k])) - lr.begin());
    const auto& e = computed[root];
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const cplx v = e(pos, static_cast<Index>(j));
      if (v != cplx{}) trip.emplace_back(static_cast<Index>(k), idx[j], v);
    }
  }
  SparseRows out(static_cast<Index>(rows.size()), n);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

/// Dense single-mode D(alpha) at cutoff w, built from its banded generator.
inline Matrix displacement_matrix(cplx alpha, std::size_t w) {
  const auto d = static_cast<Index>(w + 1);
  Matrix g = Matrix::Zero(d, d);
  for (Index n = 0; n + 1 < d; ++n) {
    const double s = std::sqrt(static_cast<double>(n + 1));
    g(n + 1, n) = alpha * s;
    g(n, n + 1) = -std::conj(alpha) * s;
  }
  return linalg::expm(g);
}

/// Dense single-mode S(z) = exp((z a^dag^2 - conj(z) a^2)/2) at cutoff w.
inline Matrix squeeze_matrix(cplx z, std::size_t w) {
  const auto d = static_cast<Index>(w + 1);
  Matrix g = Matrix::Zero(d, d);
  for (Index n = 0; n + 2 < d; ++n) {
    const double s = 0.5 * std::sqrt(static_cast<double>((n + 1) * (n + 2)));
    g(n + 2, n) = z * s;
    g(n, n + 2) = -std::conj(z) * s;
  }
  return linalg::expm(g);
}

/// Upper bound on the spectral radius: max absolute column sum.
inline double norm1(const SparseOp& g) {
  double best = 0.0;
  for (Index c = 0; c < g.outerSize(); ++c) {
    double s = 0.0;
    for (SparseOp::InnerIterator it(g, c); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

/// e^{G} V for anti-Hermitian sparse G, by Chebyshev expansion of e^{-iH}
/// with H = iG and spectrum bounded by R = ||G||_1.
inline Matrix expm_multiply_skew(const SparseOp& g, const Matrix& v) {
  const double radius = norm1(g);
  if (radius == 0.0) return v;
  const cplx i_unit{0.0, 1.0};
  const SparseOp h = (i_unit / radius) * g;  // spectrum in [-1, 1]
  Matrix t_prev = v;
  Matrix t_curr = h * v;
  Matrix out = std::cyl_bessel_j(0.0, radius) * t_prev;
  cplx phase = -i_unit;
  out += 2.0 * phase * std::cyl_bessel_j(1.0, radius) * t_curr;
  for (int k = 2;; ++k) {
    Matrix t_next = 2.0 * (h * t_curr) - t_prev;
    phase *= -i_unit;
    const double jk = std::cyl_bessel_j(static_cast<double>(k), radius);
    out += 2.0 * phase * jk * t_next;
    t_prev = std::move(t_curr);
    t_curr = std::move(t_next);
    if (k > radius && std::abs(jk) < 1e-18) break;
    if (k > 100000) throw std::runtime_error("expm_multiply_skew: expansion did not terminate");
  }
  return out;
}

/// Result of a padding sweep.
struct PaddedBlock {
  Matrix block;
  std::size_t cutoff = 0;  // working cutoff of the accepted evaluation
  double change = 0.0;     // Frobenius change against the previous cutoff
  bool converged = false;
};

inline constexpr double kPaddingTolerance = 1e-10;

/// Evaluates eval(W) for W = start, then growing by half each step, until measure(block change)
/// <= kPaddingTolerance * max(1, measure(block)), or W would exceed
/// max_cutoff. `measure` is a norm on the part of the block that matters.
template <class Eval, class Measure>
PaddedBlock converge_padding(Eval&& eval, std::size_t start, std::size_t max_cutoff,
                             Measure&& measure) {
  PaddedBlock out;
  out.cutoff = std::max<std::size_t>(start, 1);
  out.block = eval(out.cutoff);
  out.change = std::numeric_limits<double>::infinity();
  while (out.cutoff + out.cutoff / 2 <= max_cutoff) {
    const auto next_cutoff = out.cutoff + out.cutoff / 2;
    Matrix next = eval(next_cutoff);
    out.change = measure(Matrix(next - out.block));
    out.block = std::move(next);
    out.cutoff = next_cutoff;
    if (out.change <= kPaddingTolerance * std::max(1.0, measure(out.block))) {
      out.converged = true;
      break;
    }
  }
  return out;
}

template <class Eval>
PaddedBlock converge_padding(Eval&& eval, std::size_t start, std::size_t max_cutoff) {
  return converge_padding(std::forward<Eval>(eval), start, max_cutoff,
                          [](const Matrix& m) { return m.norm(); });
}

}  // namespace fockforge::bulk
