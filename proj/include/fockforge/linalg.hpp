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

// Dense matrix exponential kernels.
//
// expm() splits the matrix into the connected components of its sparsity
// graph and exponentiates each block independently; the result is exact
// block-for-block because e^{P^T G P} = P^T e^{G} P for a permutation P.
// Every generator in this library conserves some occupation quantity
// (total number, number difference, parity), so the blocks are small.
//
// Per block:
//   * anti-Hermitian + tridiagonal: phase-gauge to a real symmetric
//     tridiagonal matrix and use its eigendecomposition (LAPACK dstemr);
//   * anti-Hermitian: Hermitian eigendecomposition of iG;
//   * otherwise: scaling and squaring with a degree-13 Pade approximant.

#include <Eigen/Dense>

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace fockforge {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

namespace linalg {

/// Disjoint-set forest over matrix indices.
class UnionFind {
 public:
  explicit UnionFind(Index n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), Index{0});
  }

  Index find(Index i) {
    auto root = i;
    while (parent_[static_cast<std::size_t>(root)] != root) {
      root = parent_[static_cast<std::size_t>(root)];
    }
    while (parent_[static_cast<std::size_t>(i)] != root) {
      auto next = parent_[static_cast<std::size_t>(i)];
      parent_[static_cast<std::size_t>(i)] = root;
      i = next;
    }
    return root;
  }

  void unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Smaller root wins so component ordering is deterministic.
    if (a < b) {
      parent_[static_cast<std::size_t>(b)] = a;
    } else {
      parent_[static_cast<std::size_t>(a)] = b;
    }
  }

 private:
  std::vector<Index> parent_;
};

/// Groups indices by root; each group is sorted ascending and groups are
/// ordered by their smallest member.
inline std::vector<std::vector<Index>> collect_components(UnionFind& uf, Index n) {
  std::vector<Index> slot(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<Index>> groups;
  for (Index i = 0; i < n; ++i) {
    const auto root = uf.find(i);
    auto& s = slot[static_cast<std::size_t>(root)];
    if (s < 0) {
      s = static_cast<Index>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(s)].push_back(i);
  }
  return groups;
}

inline std::vector<std::vector<Index>> connected_components(const Matrix& g) {
  const auto n = g.rows();
  UnionFind uf(n);
  for (Index c = 0; c < n; ++c) {
    for (Index r = 0; r < n; ++r) {
      if (r != c && g(r, c) != cplx{}) uf.unite(r, c);
    }
  }
  return collect_components(uf, n);
}

inline double frobenius(const Matrix& m) { return m.norm(); }

inline bool is_anti_hermitian(const Matrix& g, double rel_tol = 1e-12) {
  const auto scale = g.norm();
  if (scale == 0.0) return true;
  return (g + g.adjoint()).norm() <= rel_tol * scale;
}

inline bool is_tridiagonal(const Matrix& g) {
  const auto n = g.rows();
  for (Index c = 0; c < n; ++c) {
    for (Index r = 0; r < n; ++r) {
      if (std::abs(r - c) > 1 && g(r, c) != cplx{}) return false;
    }
  }
  return true;
}

/// Scaling and squaring, degree-13 Pade (Higham 2005 coefficients).
inline Matrix expm_pade(const Matrix& a) {
  constexpr double theta13 = 5.371920351148152;
  constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                          1187353796428800.0,  129060195264000.0,   10559470521600.0,
                          670442572800.0,      33522128640.0,       1323241920.0,
                          40840800.0,          960960.0,            16380.0,
                          182.0,               1.0};
  const auto n = a.rows();
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  }
  const Matrix x = a / std::ldexp(1.0, squarings);
  const Matrix id = Matrix::Identity(n, n);
  const Matrix x2 = x * x;
  const Matrix x4 = x2 * x2;
  const Matrix x6 = x4 * x2;
  const Matrix u_inner = x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2) + b[7] * x6 + b[5] * x4 +
                         b[3] * x2 + b[1] * id;
  const Matrix u = x * u_inner;
  const Matrix v = x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2) + b[6] * x6 + b[4] * x4 +
                   b[2] * x2 + b[0] * id;
  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  return r;
}

/// e^{G} for anti-Hermitian G via the Hermitian eigenproblem of iG.
inline Matrix expm_skew(const Matrix& g) {
  const Matrix h = cplx{0.0, 1.0} * g;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  if (es.info() != Eigen::Success) throw std::runtime_error("expm: eigensolver failed");
  const auto& lambda = es.eigenvalues();
  Vector phases(lambda.size());
  for (Index k = 0; k < lambda.size(); ++k) phases(k) = std::polar(1.0, -lambda(k));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Eigendecomposition of a real symmetric tridiagonal matrix: LAPACK's MRRR
/// driver (dstemr), with Eigen's implicit QR as a fallback.
struct TridiagonalEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

inline TridiagonalEigen tridiagonal_eigen(Eigen::VectorXd diag, const Eigen::VectorXd& sub) {
  const auto n = diag.size();
  TridiagonalEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  Eigen::VectorXd e(n);
  e.head(n - 1) = sub;
  e(n - 1) = 0.0;
  std::vector<lapack_int> support(static_cast<std::size_t>(2 * n));
  lapack_int found = 0;
  lapack_logical tryrac = 1;
  const Eigen::VectorXd diag_copy = diag;
  const auto ln = static_cast<lapack_int>(n);
  const lapack_int info = LAPACKE_dstemr(LAPACK_COL_MAJOR, 'V', 'A', ln, diag.data(), e.data(),
                                         0.0, 0.0, 0, 0, &found, out.values.data(),
                                         out.vectors.data(), ln, ln, support.data(), &tryrac);
  if (info == 0 && found == ln) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag_copy, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw std::runtime_error("expm: tridiagonal eigensolver failed");
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  return out;
}

/// Rows `rows` of e^{G} for anti-Hermitian tridiagonal G. iG is gauged to a
/// real symmetric tridiagonal T by a diagonal unitary D (iG = D T D^dagger).
inline Matrix expm_skew_tridiagonal_rows(const Matrix& g, const std::vector<Index>& rows) {
  const auto n = g.rows();
  const auto k = static_cast<Index>(rows.size());
  if (n == 1) return Matrix::Constant(k, 1, std::exp(g(0, 0)));
  const cplx i_unit{0.0, 1.0};
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n - 1);
  Eigen::VectorXd gauge(n);
  gauge(0) = 0.0;
  for (Index j = 0; j < n; ++j) diag(j) = std::real(i_unit * g(j, j));
  for (Index j = 0; j + 1 < n; ++j) {
    const cplx h = i_unit * g(j + 1, j);
    sub(j) = std::abs(h);
    gauge(j + 1) = gauge(j) + std::arg(h);
  }
  const auto es = tridiagonal_eigen(std::move(diag), sub);
  const auto& v = es.vectors;
  Eigen::MatrixXd vr(k, n);
  for (Index r = 0; r < k; ++r) vr.row(r) = v.row(rows[static_cast<std::size_t>(r)]);
  const Eigen::VectorXd c = es.values.array().cos().matrix();
  const Eigen::VectorXd s = es.values.array().sin().matrix();
  const Eigen::MatrixXd re = vr * c.asDiagonal() * v.transpose();
  const Eigen::MatrixXd im = vr * s.asDiagonal() * v.transpose();
  Matrix out(k, n);
  for (Index col = 0; col < n; ++col) {
    for (Index r = 0; r < k; ++r) {
      const auto row = rows[static_cast<std::size_t>(r)];
      out(r, col) = std::polar(1.0, gauge(row) - gauge(col)) * cplx{re(r, col), -im(r, col)};
    }
  }
  return out;
}

inline std::vector<Index> all_rows(Index n) {
  std::vector<Index> rows(static_cast<std::size_t>(n));
  std::iota(rows.begin(), rows.end(), Index{0});
  return rows;
}

/// e^{G} for anti-Hermitian tridiagonal G.
inline Matrix expm_skew_tridiagonal(const Matrix& g) {
  return expm_skew_tridiagonal_rows(g, all_rows(g.rows()));
}

/// Exponential of one irreducible block.
inline Matrix expm_block(const Matrix& g) {
  if (g.rows() == 1) return Matrix::Constant(1, 1, std::exp(g(0, 0)));
  if (is_anti_hermitian(g)) {
    return is_tridiagonal(g) ? expm_skew_tridiagonal(g) : expm_skew(g);
  }
  return expm_pade(g);
}

/// Selected rows of the exponential of one irreducible block.
inline Matrix expm_block_rows(const Matrix& g, const std::vector<Index>& rows) {
  if (g.rows() > 1 && is_anti_hermitian(g) && is_tridiagonal(g)) {
    return expm_skew_tridiagonal_rows(g, rows);
  }
  const Matrix full = expm_block(g);
  Matrix out(static_cast<Index>(rows.size()), g.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = full.row(rows[r]);
  return out;
}

inline Matrix expm(const Matrix& g) {
  if (g.rows() != g.cols()) throw std::invalid_argument("expm: matrix must be square");
  if (!g.allFinite()) throw std::domain_error("expm: non-finite entries");
  const auto n = g.rows();
  Matrix out = Matrix::Zero(n, n);
  for (const auto& comp : connected_components(g)) {
    const auto m = static_cast<Index>(comp.size());
    Matrix block(m, m);
    for (Index c = 0; c < m; ++c) {
      for (Index r = 0; r < m; ++r) block(r, c) = g(comp[r], comp[c]);
    }
    const Matrix e = expm_block(block);
    for (Index c = 0; c < m; ++c) {
      for (Index r = 0; r < m; ++r) out(comp[r], comp[c]) = e(r, c);
    }
  }
  return out;
}

}  // namespace linalg
}  // namespace fockforge
