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

// Truncated one- and two-mode Fock spaces.
//
// Basis index n of a single mode is the occupation number, 0 <= n <= n_max.
// Two-mode index (n1, n2) maps to n1 * (n_max + 1) + n2 (first factor major).

#include "fockforge/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fockforge {

/// Centralized numerical tolerances.
struct Tolerances {
  double unitarity = 1e-10;
  double identity_residual = 1e-8;
  double fidelity_deficit = 1e-6;
};

inline constexpr Tolerances kDefaultTolerances{};

/// ceil(n_max / 4): the default comparison margin.
constexpr std::size_t auto_margin(std::size_t n_max) noexcept { return (n_max + 3) / 4; }

class Cutoff {
 public:
  explicit Cutoff(std::size_t n_max) : n_max_(n_max) {
    if (n_max < 1) throw std::invalid_argument("Cutoff: n_max must be at least 1");
  }

  std::size_t n_max() const noexcept { return n_max_; }
  Index dim() const noexcept { return static_cast<Index>(n_max_ + 1); }

  friend bool operator==(Cutoff, Cutoff) = default;

 private:
  std::size_t n_max_;
};

enum class Modes : int { one = 1, two = 2 };

inline Index space_dim(Cutoff c, Modes m) noexcept {
  return m == Modes::one ? c.dim() : c.dim() * c.dim();
}

inline std::string to_string(Modes m) { return m == Modes::one ? "1" : "2"; }

/// Complex parameter carried with its polar decomposition; phase in (-pi, pi].
class PolarParam {
 public:
  PolarParam() = default;

  static PolarParam from_complex(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw std::invalid_argument("PolarParam: non-finite value");
    }
    PolarParam p;
    p.value_ = z;
    p.modulus_ = std::abs(z);
    p.phase_ = p.modulus_ == 0.0 ? 0.0 : wrap_phase(std::arg(z));
    return p;
  }

  static PolarParam from_polar(double modulus, double phase) {
    if (!(modulus >= 0.0) || !std::isfinite(modulus) || !std::isfinite(phase)) {
      throw std::invalid_argument("PolarParam: modulus must be finite and non-negative");
    }
    PolarParam p;
    p.modulus_ = modulus;
    p.phase_ = modulus == 0.0 ? 0.0 : wrap_phase(phase);
    p.value_ = std::polar(modulus, p.phase_);
    return p;
  }

  static PolarParam real(double x) { return from_complex(cplx{x, 0.0}); }

  cplx value() const noexcept { return value_; }
  double modulus() const noexcept { return modulus_; }
  double phase() const noexcept { return phase_; }

  /// Maps any angle into (-pi, pi].
  static double wrap_phase(double phase) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double p = std::remainder(phase, two_pi);
    if (p <= -std::numbers::pi) p += two_pi;
    return p;
  }

 private:
  cplx value_{};
  double modulus_ = 0.0;
  double phase_ = 0.0;
};

/// Dense operator on a truncated one- or two-mode space.
class Operator {
 public:
  Operator(Cutoff cutoff, Modes modes, Matrix entries)
      : cutoff_(cutoff), modes_(modes), entries_(std::move(entries)) {
    const auto d = space_dim(cutoff_, modes_);
    if (entries_.rows() != d || entries_.cols() != d) {
      throw std::invalid_argument("Operator: entries must be (n_max+1)^modes square");
    }
  }

  static Operator identity(Cutoff c, Modes m = Modes::one) {
    const auto d = space_dim(c, m);
    return {c, m, Matrix::Identity(d, d)};
  }
  static Operator zero(Cutoff c, Modes m = Modes::one) {
    const auto d = space_dim(c, m);
    return {c, m, Matrix::Zero(d, d)};
  }

  Cutoff cutoff() const noexcept { return cutoff_; }
  Modes modes() const noexcept { return modes_; }
  Index dim() const noexcept { return entries_.rows(); }
  const Matrix& matrix() const noexcept { return entries_; }
  cplx operator()(Index r, Index c) const { return entries_(r, c); }

  Operator& operator+=(const Operator& o) {
    require_same_space(o);
    entries_ += o.entries_;
    return *this;
  }
  Operator& operator-=(const Operator& o) {
    require_same_space(o);
    entries_ -= o.entries_;
    return *this;
  }
  Operator& operator*=(cplx s) {
    entries_ *= s;
    return *this;
  }

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator*(cplx s, Operator a) { return a *= s; }
  friend Operator operator*(Operator a, cplx s) { return a *= s; }
  friend Operator operator*(const Operator& a, const Operator& b) {
    a.require_same_space(b);
    return {a.cutoff_, a.modes_, a.entries_ * b.entries_};
  }

  void require_same_space(const Operator& o) const {
    if (!(cutoff_ == o.cutoff_) || modes_ != o.modes_) {
      throw std::invalid_argument("Operator: cutoff/mode mismatch");
    }
  }

 private:
  Cutoff cutoff_;
  Modes modes_;
  Matrix entries_;
};

/// Amplitude vector on a truncated space.
class Ket {
 public:
  Ket(Cutoff cutoff, Modes modes, Vector amplitudes, bool normalized = false)
      : cutoff_(cutoff), modes_(modes), amplitudes_(std::move(amplitudes)), normalized_(normalized) {
    if (amplitudes_.size() != space_dim(cutoff_, modes_)) {
      throw std::invalid_argument("Ket: amplitude count must be (n_max+1)^modes");
    }
    if (normalized_ && std::abs(amplitudes_.norm() - 1.0) > 1e-12) {
      throw std::invalid_argument("Ket: flagged normalized but norm differs from 1");
    }
  }

  Cutoff cutoff() const noexcept { return cutoff_; }
  Modes modes() const noexcept { return modes_; }
  Index dim() const noexcept { return amplitudes_.size(); }
  const Vector& amplitudes() const noexcept { return amplitudes_; }
  cplx operator[](Index i) const { return amplitudes_(i); }
  bool normalized() const noexcept { return normalized_; }
  double norm() const { return amplitudes_.norm(); }

  /// 1 - norm before the most recent renormalization (0 if never renormalized).
  double norm_deficit() const noexcept { return norm_deficit_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

  Ket renormalized() const {
    const double n = norm();
    if (n == 0.0) throw std::domain_error("Ket: cannot normalize the zero vector");
    Ket out(cutoff_, modes_, amplitudes_ / n, true);
    out.norm_deficit_ = 1.0 - n;
    out.warnings_ = warnings_;
    return out;
  }

 private:
  Cutoff cutoff_;
  Modes modes_;
  Vector amplitudes_;
  bool normalized_;
  double norm_deficit_ = 0.0;
  std::vector<std::string> warnings_;
};

inline Ket apply(const Operator& op, const Ket& k) {
  if (!(op.cutoff() == k.cutoff()) || op.modes() != k.modes()) {
    throw std::invalid_argument("apply: operator and ket live on different spaces");
  }
  Ket out(k.cutoff(), k.modes(), op.matrix() * k.amplitudes());
  for (const auto& w : k.warnings()) out.add_warning(w);
  return out;
}

inline Operator annihilation(Cutoff c) {
  const auto d = c.dim();
  Matrix a = Matrix::Zero(d, d);
  for (Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {c, Modes::one, std::move(a)};
}

inline Operator dagger(const Operator& op) {
  return {op.cutoff(), op.modes(), op.matrix().adjoint()};
}

inline Operator creation(Cutoff c) { return dagger(annihilation(c)); }

inline Operator number(Cutoff c) {
  const auto d = c.dim();
  Matrix n = Matrix::Zero(d, d);
  for (Index k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
  return {c, Modes::one, std::move(n)};
}

/// Kronecker product, first factor major: (A x B)[(i,j),(k,l)] = A[i,k] B[j,l].
inline Operator tensor(const Operator& a, const Operator& b) {
  if (a.modes() != Modes::one || b.modes() != Modes::one) {
    throw std::invalid_argument("tensor: factors must be single-mode");
  }
  if (!(a.cutoff() == b.cutoff())) throw std::invalid_argument("tensor: cutoff mismatch");
  const auto d = a.dim();
  Matrix out(d * d, d * d);
  for (Index i = 0; i < d; ++i) {
    for (Index k = 0; k < d; ++k) out.block(i * d, k * d, d, d) = a(i, k) * b.matrix();
  }
  return {a.cutoff(), Modes::two, std::move(out)};
}

inline Ket tensor(const Ket& a, const Ket& b) {
  if (a.modes() != Modes::one || b.modes() != Modes::one) {
    throw std::invalid_argument("tensor: factors must be single-mode");
  }
  if (!(a.cutoff() == b.cutoff())) throw std::invalid_argument("tensor: cutoff mismatch");
  const auto d = a.dim();
  Vector out(d * d);
  for (Index i = 0; i < d; ++i) out.segment(i * d, d) = a[i] * b.amplitudes();
  return {a.cutoff(), Modes::two, std::move(out)};
}

/// Single-mode operator lifted onto factor `mode` (1 or 2) of the two-mode space.
inline Operator on_mode(const Operator& single, int mode) {
  const auto id = Operator::identity(single.cutoff());
  if (mode == 1) return tensor(single, id);
  if (mode == 2) return tensor(id, single);
  throw std::invalid_argument("on_mode: mode must be 1 or 2");
}

inline Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

inline Operator expm(const Operator& g) {
  return {g.cutoff(), g.modes(), linalg::expm(g.matrix())};
}

inline double unitarity_defect(const Operator& u) {
  return (u.matrix().adjoint() * u.matrix() - Matrix::Identity(u.dim(), u.dim())).norm();
}

/// U A U^dagger; U must be unitary to 1e-10.
inline Operator conjugate_by(const Operator& u, const Operator& a) {
  u.require_same_space(a);
  if (unitarity_defect(u) > kDefaultTolerances.unitarity) {
    throw std::invalid_argument("conjugate_by: U is not unitary");
  }
  return {a.cutoff(), a.modes(), u.matrix() * a.matrix() * u.matrix().adjoint()};
}

/// Projector onto occupations <= n_max - margin (per factor for two modes).
inline Operator safe_projector(Cutoff c, std::size_t margin, Modes modes = Modes::one) {
  if (margin > c.n_max()) throw std::invalid_argument("safe_projector: margin exceeds n_max");
  const auto d = c.dim();
  const auto keep = static_cast<Index>(c.n_max() - margin);
  Matrix p = Matrix::Zero(d, d);
  for (Index k = 0; k <= keep; ++k) p(k, k) = 1.0;
  Operator single{c, Modes::one, std::move(p)};
  return modes == Modes::one ? single : tensor(single, single);
}

/// Indices retained by safe_projector, ascending.
inline std::vector<Index> safe_indices(Cutoff c, std::size_t margin, Modes modes) {
  if (margin > c.n_max()) throw std::invalid_argument("safe_indices: margin exceeds n_max");
  const auto keep = static_cast<Index>(c.n_max() - margin);
  std::vector<Index> out;
  if (modes == Modes::one) {
    for (Index k = 0; k <= keep; ++k) out.push_back(k);
  } else {
    for (Index i = 0; i <= keep; ++i) {
      for (Index j = 0; j <= keep; ++j) out.push_back(i * c.dim() + j);
    }
  }
  return out;
}

/// ||P (A - B) P||_F with P = safe_projector(margin).
inline double residual(const Operator& a, const Operator& b, std::size_t margin) {
  a.require_same_space(b);
  const auto idx = safe_indices(a.cutoff(), margin, a.modes());
  const Matrix diff = a.matrix() - b.matrix();
  double sum = 0.0;
  for (auto c : idx) {
    for (auto r : idx) sum += std::norm(diff(r, c));
  }
  return std::sqrt(sum);
}

// --- Coherent-state cutoff rule -------------------------------------------

/// Poisson tail  sum_{n > n_max} e^{-x} x^n / n!  with x = |alpha|^2.
inline double poisson_tail(double modulus, std::size_t n_max) {
  const double x = modulus * modulus;
  if (x == 0.0) return 0.0;
  double sum = 0.0;
  const double log_x = std::log(x);
  for (std::size_t n = n_max + 1;; ++n) {
    const double term =
        std::exp(-x + static_cast<double>(n) * log_x - std::lgamma(static_cast<double>(n) + 1.0));
    sum += term;
    if (static_cast<double>(n) > x && term < 1e-300 + 1e-17 * sum) break;
  }
  return sum;
}

inline constexpr double kTailTolerance = 1e-12;

/// Smallest n_max (>= 1) whose Poisson tail for |alpha| is below `tol`.
inline std::size_t min_cutoff_for(double modulus, double tol = kTailTolerance) {
  std::size_t n = 1;
  while (poisson_tail(modulus, n) >= tol) ++n;
  return n;
}

inline bool tail_rule_ok(double modulus, Cutoff c, double tol = kTailTolerance) {
  return poisson_tail(modulus, c.n_max()) < tol;
}

// --- Text dumps -------------------------------------------------------------
//
// Operator: header "dim modes n_max", then dim*dim lines "re im" row-major.
// Ket:      header "dim modes", then one "re im" line per amplitude.

namespace detail {
inline void write_entry(std::ostream& os, cplx z) {
  os << z.real() << ' ' << z.imag() << '\n';
}
inline cplx read_entry(std::istream& is) {
  double re = 0.0;
  double im = 0.0;
  if (!(is >> re >> im)) throw std::runtime_error("dump: truncated entry list");
  return {re, im};
}
inline Modes read_modes(int m) {
  if (m == 1) return Modes::one;
  if (m == 2) return Modes::two;
  throw std::runtime_error("dump: modes must be 1 or 2");
}
}  // namespace detail

inline void write_operator(std::ostream& os, const Operator& op) {
  const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
  os << op.dim() << ' ' << static_cast<int>(op.modes()) << ' ' << op.cutoff().n_max() << '\n';
  for (Index r = 0; r < op.dim(); ++r) {
    for (Index c = 0; c < op.dim(); ++c) detail::write_entry(os, op(r, c));
  }
  os.precision(old_precision);
}

inline Operator read_operator(std::istream& is) {
  Index dim = 0;
  int modes = 0;
  std::size_t n_max = 0;
  if (!(is >> dim >> modes >> n_max)) throw std::runtime_error("dump: bad operator header");
  const Cutoff cutoff{n_max};
  const auto m = detail::read_modes(modes);
  Matrix e(dim, dim);
  for (Index r = 0; r < dim; ++r) {
    for (Index c = 0; c < dim; ++c) e(r, c) = detail::read_entry(is);
  }
  return {cutoff, m, std::move(e)};
}

inline void write_ket(std::ostream& os, const Ket& k) {
  const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
  os << k.dim() << ' ' << static_cast<int>(k.modes()) << '\n';
  for (Index i = 0; i < k.dim(); ++i) detail::write_entry(os, k[i]);
  os.precision(old_precision);
}

/// The header carries no cutoff; it is recovered from dim and modes.
inline Ket read_ket(std::istream& is) {
  Index dim = 0;
  int modes = 0;
  if (!(is >> dim >> modes)) throw std::runtime_error("dump: bad ket header");
  const auto m = detail::read_modes(modes);
  auto per_mode = dim;
  if (m == Modes::two) {
    per_mode = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(dim))));
    if (per_mode * per_mode != dim) throw std::runtime_error("dump: two-mode dim is not square");
  }
  if (per_mode < 2) throw std::runtime_error("dump: dimension too small");
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = detail::read_entry(is);
  return {Cutoff{static_cast<std::size_t>(per_mode - 1)}, m, std::move(v)};
}

}  // namespace fockforge
