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

// su(2) and su(1,1) generator triples.
//
// Spin-J matrices live on a single-mode space with n_max = 2J, basis |J,n>.
// Truncated spin-K matrices live on a single-mode space with the caller's
// cutoff, basis |K,n>.

#include "fockforge/core.hpp"
#include "fockforge/report.hpp"

#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace fockforge {

/// Spin J stored as the integer 2J.
class SpinJ {
 public:
  explicit SpinJ(int two_j) : two_j_(two_j) {
    if (two_j < 1) throw std::invalid_argument("SpinJ: 2J must be positive");
  }
  int two_j() const noexcept { return two_j_; }
  double j() const noexcept { return 0.5 * two_j_; }
  Index dim() const noexcept { return two_j_ + 1; }
  Cutoff space() const { return Cutoff{static_cast<std::size_t>(two_j_)}; }

 private:
  int two_j_;
};

/// Spin K stored as the reduced fraction 2K = numerator / denominator.
class SpinK {
 public:
  SpinK(long numerator, long denominator, Cutoff cutoff) : cutoff_(cutoff) {
    if (numerator <= 0 || denominator <= 0) {
      throw std::invalid_argument("SpinK: 2K must be a positive fraction");
    }
    const long g = std::gcd(numerator, denominator);
    num_ = numerator / g;
    den_ = denominator / g;
  }
  long two_k_numerator() const noexcept { return num_; }
  long two_k_denominator() const noexcept { return den_; }
  double two_k() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  double k() const noexcept { return 0.5 * two_k(); }
  Cutoff cutoff() const noexcept { return cutoff_; }

 private:
  long num_ = 1;
  long den_ = 1;
  Cutoff cutoff_;
};

enum class Algebra { su2, su11 };

struct LieTriple {
  Operator plus;
  Operator minus;
  Operator third;
  Algebra algebra;

  /// z * plus - conj(z) * minus: the anti-Hermitian generator of the
  /// Perelomov-type coherent operator.
  Operator coherent_generator(cplx z) const { return z * plus - std::conj(z) * minus; }
};

// --- Pochhammer symbol --------------------------------------------------------

inline constexpr std::size_t kPochhammerLogThreshold = 120;

inline double log_pochhammer(double a, std::size_t n) {
  if (a <= 0.0) throw std::invalid_argument("log_pochhammer: a must be positive");
  return std::lgamma(a + static_cast<double>(n)) - std::lgamma(a);
}

/// Rising factorial (a)_n = a (a+1) ... (a+n-1).
inline double pochhammer(double a, std::size_t n) {
  if (n > kPochhammerLogThreshold) return std::exp(log_pochhammer(a, n));
  double p = 1.0;
  for (std::size_t k = 0; k < n; ++k) p *= a + static_cast<double>(k);
  return p;
}

// --- Representations ------------------------------------------------------------

inline LieTriple su2_generators(SpinJ spin) {
  const auto c = spin.space();
  const auto d = spin.dim();
  const double two_j = spin.two_j();
  Matrix plus = Matrix::Zero(d, d);
  Matrix third = Matrix::Zero(d, d);
  for (Index n = 0; n < d; ++n) {
    const double nd = static_cast<double>(n);
    third(n, n) = -spin.j() + nd;
    if (n + 1 < d) plus(n + 1, n) = std::sqrt((nd + 1.0) * (two_j - nd));
  }
  Operator p{c, Modes::one, std::move(plus)};
  return {p, dagger(p), Operator{c, Modes::one, std::move(third)}, Algebra::su2};
}

inline LieTriple su11_generators(const SpinK& spin) {
  const auto c = spin.cutoff();
  const auto d = c.dim();
  const double two_k = spin.two_k();
  Matrix plus = Matrix::Zero(d, d);
  Matrix third = Matrix::Zero(d, d);
  for (Index n = 0; n < d; ++n) {
    const double nd = static_cast<double>(n);
    third(n, n) = spin.k() + nd;
    if (n + 1 < d) plus(n + 1, n) = std::sqrt((nd + 1.0) * (two_k + nd));
  }
  Operator p{c, Modes::one, std::move(plus)};
  return {p, dagger(p), Operator{c, Modes::one, std::move(third)}, Algebra::su11};
}

/// J+ = a1^dag a2, J- = a2^dag a1, J3 = (N1 - N2)/2.
inline LieTriple schwinger_su2(Cutoff c) {
  const auto a1 = on_mode(annihilation(c), 1);
  const auto a2 = on_mode(annihilation(c), 2);
  const auto n1 = dagger(a1) * a1;
  const auto n2 = dagger(a2) * a2;
  return {dagger(a1) * a2, dagger(a2) * a1, cplx{0.5} * (n1 - n2), Algebra::su2};
}

/// K+ = a1^dag a2^dag, K- = a2 a1, K3 = (N1 + N2 + 1)/2.
inline LieTriple schwinger_su11(Cutoff c) {
  const auto a1 = on_mode(annihilation(c), 1);
  const auto a2 = on_mode(annihilation(c), 2);
  const auto n1 = dagger(a1) * a1;
  const auto n2 = dagger(a2) * a2;
  return {dagger(a1) * dagger(a2), a2 * a1,
          cplx{0.5} * (n1 + n2 + Operator::identity(c, Modes::two)), Algebra::su11};
}

/// K+ = (a^dag)^2 / 2, K- = a^2 / 2, K3 = (N + 1/2) / 2.
inline LieTriple single_mode_su11(Cutoff c) {
  const auto a = annihilation(c);
  const auto ad = dagger(a);
  const auto id = Operator::identity(c);
  return {cplx{0.5} * (ad * ad), cplx{0.5} * (a * a), cplx{0.5} * (number(c) + cplx{0.5} * id),
          Algebra::su11};
}

/// Fock indices carrying spin K = 1/4 (even occupations) and K = 3/4 (odd).
inline std::vector<Index> single_mode_spin_subspace(Cutoff c, bool odd) {
  std::vector<Index> out;
  for (Index n = odd ? 1 : 0; n < c.dim(); n += 2) out.push_back(n);
  return out;
}

inline Matrix restrict_to(const Operator& op, const std::vector<Index>& idx) {
  const auto m = static_cast<Index>(idx.size());
  Matrix out(m, m);
  for (Index c = 0; c < m; ++c) {
    for (Index r = 0; r < m; ++r) out(r, c) = op(idx[r], idx[c]);
  }
  return out;
}

// --- Closure relations ------------------------------------------------------------

/// Residuals of [T3,T+] = T+, [T3,T-] = -T-, and [T+,T-] = 2T3 (su2) or
/// [T+,T-] = -2T3 (su11), each measured through the margin projector.
struct ClosureResiduals {
  double raise = 0.0;
  double lower = 0.0;
  double cross = 0.0;
  double dagger_pairing = 0.0;
};

inline ClosureResiduals closure_residuals(const LieTriple& t, std::size_t margin) {
  const auto zero = Operator::zero(t.plus.cutoff(), t.plus.modes());
  const double sign = t.algebra == Algebra::su2 ? -2.0 : 2.0;
  ClosureResiduals r;
  r.raise = residual(commutator(t.third, t.plus) - t.plus, zero, margin);
  r.lower = residual(commutator(t.third, t.minus) + t.minus, zero, margin);
  r.cross = residual(commutator(t.plus, t.minus) + cplx{sign} * t.third, zero, margin);
  r.dagger_pairing = (t.minus.matrix() - t.plus.matrix().adjoint()).norm();
  return r;
}

/// J3^2 + (J+J- + J-J+)/2 - J(J+1) I on the spin-J representation.
inline double casimir_defect(SpinJ spin) {
  const auto t = su2_generators(spin);
  const Matrix c = t.third.matrix() * t.third.matrix() +
                   0.5 * (t.plus.matrix() * t.minus.matrix() + t.minus.matrix() * t.plus.matrix());
  const double jj = spin.j() * (spin.j() + 1.0);
  return (c - jj * Matrix::Identity(spin.dim(), spin.dim())).norm();
}

inline Report closure_report(std::string name, const LieTriple& t, std::size_t margin,
                             double tolerance) {
  const auto r = closure_residuals(t, margin);
  Report rep;
  rep.name = std::move(name);
  rep.n_max = t.plus.cutoff().n_max();
  rep.margin = margin;
  rep.tolerance = tolerance;
  rep.residuals = {{"raise", r.raise},
                   {"lower", r.lower},
                   {"cross", r.cross},
                   {"dagger_pairing", r.dagger_pairing}};
  return rep.finalize();
}

inline Report check_su2_closure(SpinJ spin, double tolerance = 1e-12) {
  auto rep = closure_report("su2_closure", su2_generators(spin), 0, tolerance);
  rep.residuals["casimir"] = casimir_defect(spin);
  rep.params.push_back(PolarParam::real(spin.j()));
  return rep.finalize();
}

}  // namespace fockforge
