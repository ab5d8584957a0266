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
#include "fockforge/lie_reps.hpp"
#include "fockforge/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fockforge {

inline Ket number_state(std::size_t n, Cutoff c) {
  if (n > c.n_max()) throw std::out_of_range("number_state: n exceeds n_max");
  Vector v = Vector::Zero(c.dim());
  v(static_cast<Index>(n)) = 1.0;
  return {c, Modes::one, std::move(v), true};
}

inline Ket vacuum(Cutoff c, Modes m = Modes::one) {
  Vector v = Vector::Zero(space_dim(c, m));
  v(0) = 1.0;
  return {c, m, std::move(v), true};
}

/// D(alpha) = exp(alpha a^dag - conj(alpha) a).
inline Operator displacement(PolarParam alpha, Cutoff c) {
  const auto a = annihilation(c);
  return expm(alpha.value() * dagger(a) - std::conj(alpha.value()) * a);
}

inline std::string tail_warning(double modulus, Cutoff c) {
  std::ostringstream os;
  os << "cutoff inadequate: Poisson tail for |alpha|=" << modulus << " at n_max=" << c.n_max()
     << " is " << poisson_tail(modulus, c.n_max()) << " (needs n_max >= "
     << min_cutoff_for(modulus) << ")";
  return os.str();
}

/// D(alpha)|0>, renormalized; the pre-normalization deficit is kept on the Ket.
inline Ket coherent(PolarParam alpha, Cutoff c) {
  auto k = apply(displacement(alpha, c), vacuum(c)).renormalized();
  if (!tail_rule_ok(alpha.modulus(), c)) k.add_warning(tail_warning(alpha.modulus(), c));
  return k;
}

/// S(z) = exp((z (a^dag)^2 - conj(z) a^2) / 2).
inline Operator squeeze(PolarParam z, Cutoff c) {
  return expm(single_mode_su11(c).coherent_generator(z.value()));
}

/// exp(z J+ - conj(z) J-)|J,0>.
inline Ket perelomov_su2(PolarParam z, SpinJ spin) {
  const auto u = expm(su2_generators(spin).coherent_generator(z.value()));
  return apply(u, vacuum(spin.space())).renormalized();
}

/// Heuristic adequacy bound for su(1,1) Perelomov states: amplitudes decay
/// like tanh(|z|)^n, so n_max must reach log(1e-10) / log(tanh|z|).
inline std::size_t perelomov_su11_min_cutoff(double modulus) {
  if (modulus == 0.0) return 1;
  const double t = std::tanh(modulus);
  if (t >= 1.0) return std::numeric_limits<std::size_t>::max();
  return static_cast<std::size_t>(std::ceil(std::log(1e-10) / std::log(t)));
}

/// exp(z K+ - conj(z) K-)|K,0>, truncated at the spin's cutoff.
inline Ket perelomov_su11(PolarParam z, const SpinK& spin) {
  const auto u = expm(su11_generators(spin).coherent_generator(z.value()));
  auto k = apply(u, vacuum(spin.cutoff())).renormalized();
  const auto need = perelomov_su11_min_cutoff(z.modulus());
  if (spin.cutoff().n_max() < need) {
    std::ostringstream os;
    os << "cutoff inadequate: su(1,1) Perelomov state with |z|=" << z.modulus()
       << " needs n_max >= " << need;
    k.add_warning(os.str());
  }
  return k;
}

/// S(beta) D(alpha)|0>.
inline Ket squeezed_coherent(PolarParam beta, PolarParam alpha, Cutoff c) {
  auto k = apply(squeeze(beta, c) * displacement(alpha, c), vacuum(c)).renormalized();
  if (!tail_rule_ok(alpha.modulus(), c)) k.add_warning(tail_warning(alpha.modulus(), c));
  return k;
}

/// |<x|y>|^2 after normalizing both.
inline double fidelity(const Ket& x, const Ket& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  const double nx = x.norm();
  const double ny = y.norm();
  if (nx == 0.0 || ny == 0.0) throw std::domain_error("fidelity: zero vector");
  const double f = std::norm(x.amplitudes().dot(y.amplitudes())) / (nx * nx * ny * ny);
  return std::min(1.0, f);
}

/// <N_mode> for a two-mode ket (mode 1 or 2) or <N> for a single-mode ket.
inline double mean_occupation(const Ket& k, int mode = 1) {
  const auto d = k.cutoff().dim();
  const double norm2 = k.amplitudes().squaredNorm();
  double sum = 0.0;
  for (Index i = 0; i < k.dim(); ++i) {
    Index n = i;
    if (k.modes() == Modes::two) n = mode == 1 ? i / d : i % d;
    sum += static_cast<double>(n) * std::norm(k[i]);
  }
  return sum / norm2;
}

// --- State family tags ------------------------------------------------------------

enum class StateKind { number, coherent, squeezed, perelomov_su2, perelomov_su11, squeezed_coherent };

/// A state family plus its parameters. Perelomov kinds also carry a spin
/// label: 2J for su(2), or 2K = spin_numerator / spin_denominator for su(1,1).
/// For `number`, the single parameter's real part is the occupation.
struct StateFamilyTag {
  StateKind kind;
  std::vector<PolarParam> params;
  long spin_numerator = 0;
  long spin_denominator = 1;

  static std::size_t expected_params(StateKind k) {
    return k == StateKind::squeezed_coherent ? 2 : 1;
  }

  void validate() const {
    if (params.size() != expected_params(kind)) {
      throw std::invalid_argument("StateFamilyTag: parameter count does not match kind");
    }
    const bool perelomov = kind == StateKind::perelomov_su2 || kind == StateKind::perelomov_su11;
    if (perelomov && spin_numerator <= 0) {
      throw std::invalid_argument("StateFamilyTag: Perelomov kinds need a positive spin label");
    }
  }
};

/// Builds the tagged state. For perelomov_su2 the cutoff argument is ignored
/// (the space is fixed by 2J).
inline Ket prepare(const StateFamilyTag& tag, Cutoff c) {
  tag.validate();
  switch (tag.kind) {
    case StateKind::number: {
      const double n = tag.params[0].value().real();
      if (n < 0.0 || n != std::floor(n)) {
        throw std::invalid_argument("prepare: occupation must be a non-negative integer");
      }
      return number_state(static_cast<std::size_t>(n), c);
    }
    case StateKind::coherent:
      return coherent(tag.params[0], c);
    case StateKind::squeezed:
      return squeezed_coherent(tag.params[0], PolarParam{}, c);
    case StateKind::perelomov_su2:
      return perelomov_su2(tag.params[0], SpinJ{static_cast<int>(tag.spin_numerator)});
    case StateKind::perelomov_su11:
      return perelomov_su11(tag.params[0], SpinK{tag.spin_numerator, tag.spin_denominator, c});
    case StateKind::squeezed_coherent:
      return squeezed_coherent(tag.params[0], tag.params[1], c);
  }
  throw std::logic_error("prepare: unknown state kind");
}

// --- Single-mode realization of spin 1/4 -------------------------------------------

/// The single-mode triple restricted to even occupations |2n>, n <= m, against
/// the abstract spin-1/4 triple at cutoff m (generators compared on the
/// margin-1 block), and S(z)|0> against the spin-1/4 Perelomov state.
inline Report check_single_mode_correspondence(PolarParam z, Cutoff m, double tol = 1e-8) {
  const Cutoff fock{2 * m.n_max() + 1};
  const auto single = single_mode_su11(fock);
  const auto even = single_mode_spin_subspace(fock, false);
  const SpinK quarter{1, 2, m};
  const auto abstract = su11_generators(quarter);
  const auto keep = static_cast<Index>(m.n_max());  // margin 1
  auto block_diff = [&](const Operator& s, const Operator& a) {
    return (restrict_to(s, even) - a.matrix()).topLeftCorner(keep, keep).norm();
  };
  Report rep;
  rep.name = "single_mode_correspondence";
  rep.params = {z};
  rep.n_max = m.n_max();
  rep.margin = 1;
  rep.tolerance = tol;
  rep.residuals["plus"] = block_diff(single.plus, abstract.plus);
  rep.residuals["minus"] = block_diff(single.minus, abstract.minus);
  rep.residuals["third"] = block_diff(single.third, abstract.third);

  const auto squeezed = apply(squeeze(z, fock), vacuum(fock));
  Vector relabeled(m.dim());
  for (Index n = 0; n < m.dim(); ++n) relabeled(n) = squeezed[even[static_cast<std::size_t>(n)]];
  const auto perelomov = perelomov_su11(z, quarter);
  rep.fidelities["state"] = fidelity(Ket{m, Modes::one, relabeled, false}, perelomov);
  for (const auto& w : perelomov.warnings()) rep.warnings.push_back(w);
  return rep.finalize();
}

}  // namespace fockforge
