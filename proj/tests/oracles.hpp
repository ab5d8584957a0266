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

// Reference values computed without the library's kernels: closed-form
// series, a plain power-series exponential, and hand-written matrices.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// e^{-|a|^2/2} a^n / sqrt(n!), n = 0..n_max.
inline Vector coherent_series(cplx a, int n_max) {
  Vector v(n_max + 1);
  v(0) = std::exp(-0.5 * std::norm(a));
  for (int n = 1; n <= n_max; ++n) v(n) = v(n - 1) * a / std::sqrt(static_cast<double>(n));
  return v;
}

/// |<a|b>|^2 for untruncated coherent states.
inline double coherent_overlap(cplx a, cplx b) { return std::exp(-std::norm(a - b)); }

/// Taylor series summed until the terms vanish; only for small dense inputs.
inline Matrix expm_series(const Matrix& g) {
  const auto d = g.rows();
  Matrix sum = Matrix::Identity(d, d);
  Matrix term = Matrix::Identity(d, d);
  for (int k = 1; k < 400; ++k) {
    term = term * g / static_cast<double>(k);
    sum += term;
    if (term.norm() < 1e-20 * sum.norm()) break;
  }
  return sum;
}

/// Eigen's own scaling-and-squaring exponential, for dimensions past the
/// reach of the series.
inline Matrix expm_dense(const Matrix& g) { return g.exp(); }

/// Truncated ladder operator built directly from sqrt(n).
inline Matrix ladder(int n_max) {
  Matrix a = Matrix::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

/// exp([[0, z], [-conj z, 0]]).
inline Matrix su2_rotation(cplx z) {
  const double r = std::abs(z);
  Matrix m(2, 2);
  const cplx u = r == 0.0 ? cplx{1.0} : z / r;
  m << std::cos(r), u * std::sin(r), -std::conj(u) * std::sin(r), std::cos(r);
  return m;
}

/// Spin-J Perelomov amplitudes from the lowest weight:
/// (e^{i phi} tan r)^n sqrt(C(2J, n)) cos(r)^{2J}.
inline Vector su2_perelomov(cplx z, int two_j) {
  const double r = std::abs(z);
  const cplx u = r == 0.0 ? cplx{1.0} : z / r;
  Vector v(two_j + 1);
  for (int n = 0; n <= two_j; ++n) {
    const double binom = std::exp(std::lgamma(two_j + 1.0) - std::lgamma(n + 1.0) - std::lgamma(two_j - n + 1.0));
    v(n) = std::pow(u, n) * std::pow(std::sin(r), n) * std::pow(std::cos(r), two_j - n) * std::sqrt(binom);
  }
  return v;
}

/// Spin-K Perelomov amplitudes: (e^{i phi} tanh r)^n sqrt((2K)_n / n!) (1 - tanh^2 r)^K.
inline Vector su11_perelomov(cplx z, double two_k, int n_max) {
  const double r = std::abs(z);
  const double t = std::tanh(r);
  const cplx u = r == 0.0 ? cplx{1.0} : z / r;
  Vector v(n_max + 1);
  v(0) = std::pow(1.0 - t * t, 0.5 * two_k);
  for (int n = 1; n <= n_max; ++n) {
    v(n) = v(n - 1) * u * t * std::sqrt((two_k + n - 1.0) / n);
  }
  return v;
}

/// Squeezed vacuum: even amplitudes (e^{i phi} tanh r)^m sqrt((2m)!) / (2^m m!) / sqrt(cosh r).
inline Vector squeezed_vacuum(cplx z, int n_max) {
  const double r = std::abs(z);
  const cplx u = r == 0.0 ? cplx{1.0} : z / r;
  Vector v = Vector::Zero(n_max + 1);
  cplx c = 1.0 / std::sqrt(std::cosh(r));
  for (int m = 0; 2 * m <= n_max; ++m) {
    v(2 * m) = c;
    c *= u * std::tanh(r) * std::sqrt((2.0 * m + 1.0) * (2.0 * m + 2.0)) / (2.0 * (m + 1.0));
  }
  return v;
}

/// b (x) a by explicit index loops, first factor major.
inline Vector swapped_outer(const Vector& a, const Vector& b) {
  const auto n = a.size();
  Vector out(n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out(i * n + j) = b(i) * a(j);
  }
  return out;
}

/// The two-qutrit exchange matrix, typed in by hand.
inline Eigen::MatrixXi swap3() {
  Eigen::MatrixXi m(9, 9);
  m << 1, 0, 0, 0, 0, 0, 0, 0, 0,
       0, 0, 0, 1, 0, 0, 0, 0, 0,
       0, 0, 0, 0, 0, 0, 1, 0, 0,
       0, 1, 0, 0, 0, 0, 0, 0, 0,
       0, 0, 0, 0, 1, 0, 0, 0, 0,
       0, 0, 0, 0, 0, 0, 0, 1, 0,
       0, 0, 1, 0, 0, 0, 0, 0, 0,
       0, 0, 0, 0, 0, 1, 0, 0, 0,
       0, 0, 0, 0, 0, 0, 0, 0, 1;
  return m;
}

inline Eigen::MatrixXi swap2() {
  Eigen::MatrixXi m(4, 4);
  m << 1, 0, 0, 0,
       0, 0, 1, 0,
       0, 1, 0, 0,
       0, 0, 0, 1;
  return m;
}

/// CNOT with control on the first qubit, then on the second.
inline Eigen::MatrixXi cnot_first() {
  Eigen::MatrixXi m(4, 4);
  m << 1, 0, 0, 0,
       0, 1, 0, 0,
       0, 0, 0, 1,
       0, 0, 1, 0;
  return m;
}

inline Eigen::MatrixXi cnot_second() {
  Eigen::MatrixXi m(4, 4);
  m << 1, 0, 0, 0,
       0, 0, 0, 1,
       0, 0, 1, 0,
       0, 1, 0, 0;
  return m;
}

inline Matrix random_matrix(Eigen::Index d, std::mt19937_64& gen, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Matrix m(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) m(r, c) = cplx{n(gen), n(gen)};
  }
  return m;
}

inline Vector random_vector(Eigen::Index d, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = cplx{u(gen), u(gen)};
  return v;
}

}  // namespace oracle
