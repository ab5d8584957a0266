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

// Command implementations behind the `fockforge` executable. Argument parsing
// lives in tools/; everything here takes a validated RunConfig and streams.

#include "fockforge/core.hpp"
#include "fockforge/formulas.hpp"
#include "fockforge/lie_reps.hpp"
#include "fockforge/protocols.hpp"
#include "fockforge/report.hpp"
#include "fockforge/states.hpp"
#include "fockforge/universal_swap.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fockforge::cli {

/// Raised for invalid configuration or arguments (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { json, csv };

inline constexpr std::size_t kDefaultNmax = 36;

/// FOCKFORGE_NMAX if set, else 36.
inline std::size_t default_nmax() {
  const char* env = std::getenv("FOCKFORGE_NMAX");
  if (env == nullptr || *env == '\0') return kDefaultNmax;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw ConfigError("FOCKFORGE_NMAX must be a positive integer");
  return static_cast<std::size_t>(v);
}

struct RunConfig {
  std::size_t n_max = kDefaultNmax;
  std::optional<std::size_t> margin;  // empty = auto, ceil(n_max / 4)
  double tolerance = kDefaultTolerances.fidelity_deficit;
  std::uint64_t seed = 7;
  OutputFormat format = OutputFormat::json;
  std::optional<std::string> output_path;

  void validate() const {
    if (n_max < 1) throw ConfigError("n_max must be at least 1");
    if (!(tolerance > 0.0) || !std::isfinite(tolerance)) throw ConfigError("tolerance must be positive");
    if (margin && *margin > n_max) throw ConfigError("margin exceeds n_max");
  }

  std::size_t resolved_margin() const { return margin.value_or(auto_margin(n_max)); }
};

// --- Parsing helpers -----------------------------------------------------------

/// "re,im", "mod@phase", or a bare real number.
inline PolarParam parse_complex(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse number '" + s + "' in '" + text + "'");
    }
    if (used != s.size()) throw ConfigError("trailing characters in '" + text + "'");
    return v;
  };
  try {
    if (auto at = text.find('@'); at != std::string::npos) {
      return PolarParam::from_polar(number(text.substr(0, at)), number(text.substr(at + 1)));
    }
    if (auto comma = text.find(','); comma != std::string::npos) {
      return PolarParam::from_complex(
          cplx{number(text.substr(0, comma)), number(text.substr(comma + 1))});
    }
    return PolarParam::real(number(text));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

inline double parse_real(const std::string& text) {
  const auto p = parse_complex(text);
  if (p.value().imag() != 0.0) throw ConfigError("expected a real value, got '" + text + "'");
  return p.value().real();
}

// --- Seeded sampling -------------------------------------------------------------

/// Portable draws: the 53 high bits of mt19937_64 map to [0, 1).
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double phase() { return uniform(-std::numbers::pi, std::numbers::pi); }

  /// Modulus uniform on [0, r_max], phase uniform.
  PolarParam disk(double r_max) { return PolarParam::from_polar(uniform(0.0, r_max), phase()); }

 private:
  std::mt19937_64 gen_;
};

// --- Output --------------------------------------------------------------------

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

inline std::string format_params(const std::vector<PolarParam>& ps) {
  std::string out;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    if (k) out += ';';
    out += format_double(ps[k].value().real()) + ':' + format_double(ps[k].value().imag());
  }
  return out;
}

inline nlohmann::ordered_json reports_json(const std::vector<Report>& reports) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

/// Long format, one row per residual or fidelity.
inline constexpr const char* kReportCsvHeader =
    "check,index,params,n_max,margin,tolerance,passed,kind,metric,value";

inline void write_reports_csv(std::ostream& os, const std::vector<Report>& reports) {
  os << kReportCsvHeader << '\n';
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    const std::string prefix = r.name + ',' + std::to_string(i) + ',' + format_params(r.params) +
                               ',' + std::to_string(r.n_max) + ',' + std::to_string(r.margin) +
                               ',' + format_double(r.tolerance) + ',' + (r.passed ? "1" : "0");
    for (const auto& [k, v] : r.residuals) os << prefix << ",residual," << k << ',' << format_double(v) << '\n';
    for (const auto& [k, v] : r.fidelities) os << prefix << ",fidelity," << k << ',' << format_double(v) << '\n';
  }
}

inline void write_reports(std::ostream& os, const std::vector<Report>& reports, OutputFormat f) {
  if (f == OutputFormat::json) {
    os << reports_json(reports).dump(2) << '\n';
  } else {
    write_reports_csv(os, reports);
  }
}

/// Prints warnings to `err`; returns the exit code for the batch.
inline int summarize(const std::vector<Report>& reports, std::ostream& err) {
  int code = 0;
  for (const auto& r : reports) {
    for (const auto& w : r.warnings) {
      err << "warning: " << r.name << ": " << w << '\n';
      code = 1;
    }
    if (!r.passed) {
      err << "failed: " << r.name << " [" << format_params(r.params) << "]\n";
      code = 1;
    }
  }
  return code;
}

// --- verify-all suite --------------------------------------------------------------

inline Report retolerance(Report r, double tol) {
  r.tolerance = tol;
  return r.finalize();
}

/// Cutoff and margin for a check whose reference setting is (n_ref, m_ref):
/// capped by the configured n_max, with the margin scaled proportionally
/// unless the configuration fixes one.
struct Placement {
  Cutoff cutoff;
  std::size_t margin;
};

inline Placement place(const RunConfig& cfg, std::size_t n_ref, std::size_t m_ref) {
  const std::size_t n = std::min(n_ref, cfg.n_max);
  std::size_t m = (m_ref * n + n_ref - 1) / n_ref;
  if (cfg.margin) m = std::min(*cfg.margin, n);
  return {Cutoff{n}, m};
}

inline constexpr int kDrawsPerCheck = 2;

/// Shortfall below a required lower bound, as a residual: 0 when value > bound.
inline Report lower_bound_report(std::string name, std::vector<PolarParam> params, std::size_t n_max,
                                 std::size_t margin, double value, double bound, double tol) {
  Report r;
  r.name = std::move(name);
  r.params = std::move(params);
  r.n_max = n_max;
  r.margin = margin;
  r.tolerance = tol;
  r.diagnostics["value"] = value;
  r.residuals["shortfall"] = value > bound ? 0.0 : bound - value;
  return r.finalize();
}

inline void formula_reports(const RunConfig& cfg, Sampler& rng, std::vector<Report>& out) {
  const double tol = cfg.tolerance;
  for (int k = 0; k < kDrawsPerCheck; ++k) {
    const auto p = place(cfg, 24, 6);
    out.push_back(check_J_rotation(rng.disk(1.0), p.cutoff, p.margin, tol));
  }
  for (int k = 0; k < kDrawsPerCheck; ++k) {
    const auto p = place(cfg, 32, 10);
    out.push_back(check_K_rotation(rng.disk(0.8), p.cutoff, p.margin, tol));
  }
  for (int k = 0; k < kDrawsPerCheck; ++k) {
    const auto p = place(cfg, 32, 10);
    out.push_back(check_squeeze_conjugation(rng.disk(0.8), p.cutoff, p.margin, tol));
  }
  for (int k = 0; k < kDrawsPerCheck; ++k) {
    const auto p = place(cfg, 32, 10);
    const auto eps = rng.disk(0.8);
    out.push_back(check_SDS(eps, rng.disk(1.0), p.cutoff, p.margin, tol));
  }
  for (int k = 0; k < kDrawsPerCheck; ++k) {
    const auto p = place(cfg, 32, 10);
    const double phase = rng.phase();
    const auto eps = PolarParam::from_polar(rng.uniform(0.0, 0.8), phase);
    const auto alpha = PolarParam::from_polar(rng.uniform(0.0, 0.8), phase);
    out.push_back(check_SSS_commute(eps, alpha, p.cutoff, p.margin, tol));
  }
  for (int k = 0; k < kDrawsPerCheck; ++k) {
    const auto p = place(cfg, 40, 10);
    const double t = rng.phase();
    out.push_back(check_phase_formula(t, rng.disk(2.0), p.cutoff, p.margin, tol));
  }
  for (int k = 0; k < kDrawsPerCheck; ++k) {
    const auto p = place(cfg, 20, 6);
    const auto t = rng.disk(1.0);
    out.push_back(check_UJ_squeeze_invariance(t, rng.disk(0.5), p.cutoff, p.margin, tol));
  }
  {
    // Phase-mismatched squeezes do not commute.
    const auto p = place(cfg, 32, 10);
    const auto eps = PolarParam::from_polar(0.3, 0.0);
    const auto alpha = PolarParam::from_polar(0.5, std::numbers::pi / 2);
    const auto r = check_SSS_commute(eps, alpha, p.cutoff, p.margin, tol);
    out.push_back(lower_bound_report("negative_control_sss_commute", {eps, alpha}, p.cutoff.n_max(),
                                     p.margin, r.diagnostics.at("commutator"), 1e-3, tol));
  }
}

inline void protocol_reports(const RunConfig& cfg, Sampler& rng, std::vector<Report>& out) {
  const Cutoff c{cfg.n_max};
  const double tol = cfg.tolerance;
  for (int k = 0; k < kDrawsPerCheck; ++k) {
    const auto a1 = rng.disk(1.5);
    const auto a2 = rng.disk(1.5);
    out.push_back(retolerance(full_swap(a1, a2, rng.phase(), c).report, tol));
  }
  {
    const auto a1 = rng.disk(1.0);
    const auto a2 = rng.disk(1.0);
    out.push_back(retolerance(apply_beamsplitter(a1, a2, rng.disk(std::numbers::pi / 2), c).report, tol));
  }
  for (double a : {0.5, 1.5}) {
    out.push_back(retolerance(imperfect_clone(PolarParam::real(a), c).report, tol));
  }
  const auto p = place(cfg, 12, 3);
  {
    // Matched pair: b2 kappa = b1 conj(kappa).
    const auto kappa = rng.disk(1.0);
    const auto b1 = rng.disk(0.25);
    const auto b2 = PolarParam::from_complex(b1.value() * std::polar(1.0, -2.0 * kappa.phase()));
    out.push_back(squeezed_swap_obstruction(b1, b2, kappa, p.cutoff, p.margin, tol));
  }
  {
    const auto b = PolarParam::real(0.25);
    const auto kappa = PolarParam::from_complex(cplx{0.0, 0.5});
    const auto r = squeezed_swap_obstruction(b, b, kappa, p.cutoff, p.margin, tol);
    out.push_back(r);
    out.push_back(lower_bound_report("negative_control_obstruction_cross_term", {b, b, kappa},
                                     p.cutoff.n_max(), p.margin, r.diagnostics.at("cross_term_abs"),
                                     1e-3, tol));
  }
}

inline void lie_reports(const RunConfig& cfg, std::vector<Report>& out) {
  const double exact = 1e-12;
  for (int two_j = 1; two_j <= 8; ++two_j) out.push_back(check_su2_closure(SpinJ{two_j}, exact));
  const Cutoff small{std::min<std::size_t>(cfg.n_max, 10)};
  const Cutoff single{std::min<std::size_t>(cfg.n_max, 24)};
  out.push_back(closure_report("su11_closure_spin_1_4", su11_generators(SpinK{1, 2, single}), 1, exact));
  out.push_back(closure_report("su11_closure_spin_3_4", su11_generators(SpinK{3, 2, single}), 1, exact));
  out.push_back(closure_report("schwinger_su2_closure", schwinger_su2(small), 1, exact));
  out.push_back(closure_report("schwinger_su11_closure", schwinger_su11(small), 1, exact));
  // (a^dag)^2 / 2 steps two levels, so the bulk starts two below the cutoff.
  if (single.n_max() >= 2) {
    out.push_back(closure_report("single_mode_su11_closure", single_mode_su11(single), 2, exact));
  }
  const auto z = PolarParam::from_polar(0.4, 0.3);
  out.push_back(check_single_mode_correspondence(z, Cutoff{perelomov_su11_min_cutoff(z.modulus())}));
}

inline void swap_reports(const RunConfig& cfg, Sampler& rng, std::vector<Report>& out) {
  auto basic = [](std::string name) {
    Report r;
    r.name = std::move(name);
    r.tolerance = 0.0;
    return r;
  };
  {
    auto r = basic("swap_matrix_involution");
    double bad = 0.0;
    for (std::size_t n = 2; n <= 16; ++n) bad += swap_matrix(n).is_involution() ? 0.0 : 1.0;
    r.residuals["non_involutions"] = bad;
    out.push_back(r.finalize());
  }
  {
    auto r = basic("cnot_factorization");
    const auto f = cnot_factorization();
    r.residuals["entry_mismatch"] = (f[0] * f[1] * f[2]).dense().cwiseNotEqual(swap_matrix(2).dense()).count();
    out.push_back(r.finalize());
  }
  {
    auto r = basic("apply_swap_random");
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      Vector a(10);
      Vector b(10);
      for (Index i = 0; i < 10; ++i) {
        a(i) = cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        b(i) = cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
      }
      worst = std::max(worst, (apply_swap(a, b) - kron(b, a)).cwiseAbs().maxCoeff());
    }
    r.residuals["max_entry_error"] = worst;
    out.push_back(r.finalize());
  }
  {
    // Permutation route vs beamsplitter route for the same coherent pair.
    const Cutoff c{cfg.n_max};
    const auto a1 = rng.disk(1.5);
    const auto a2 = rng.disk(1.5);
    const auto protocol = full_swap(a1, a2, 0.0, c);
    const auto permuted = apply_swap(coherent(a1, c), coherent(a2, c));
    Report r;
    r.name = "swap_route_agreement";
    r.params = {a1, a2};
    r.n_max = c.n_max();
    r.tolerance = cfg.tolerance;
    r.fidelities["routes"] = fidelity(permuted, protocol.output);
    r.warnings = protocol.report.warnings;
    out.push_back(r.finalize());
  }
  {
    const Cutoff c{1};
    out.push_back(no_cloning_witness(number_state(0, c)));
    Vector h(2);
    h << 1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2;
    const auto w = no_cloning_witness(Ket{c, Modes::one, h, true});
    out.push_back(w);
    out.push_back(lower_bound_report("negative_control_no_cloning", {}, 1, 0,
                                     w.diagnostics.at("discrepancy"), 0.4, cfg.tolerance));
  }
}

/// Every check of the verify-all suite, in a fixed order.
inline std::vector<Report> verify_all_reports(const RunConfig& cfg) {
  cfg.validate();
  Sampler rng(cfg.seed);
  std::vector<Report> out;
  formula_reports(cfg, rng, out);
  protocol_reports(cfg, rng, out);
  lie_reports(cfg, out);
  swap_reports(cfg, rng, out);
  return out;
}

inline int cmd_verify_all(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const auto reports = verify_all_reports(cfg);
  write_reports(os, reports, cfg.format);
  return summarize(reports, err);
}

// --- swap / clone ------------------------------------------------------------------

inline nlohmann::ordered_json protocol_json(const TwoModeProtocolResult& r) {
  nlohmann::ordered_json j;
  j["fidelity"] = r.fidelity;
  auto stages = nlohmann::ordered_json::array();
  for (const auto& s : r.stages) stages.push_back(s.name);
  j["stages"] = std::move(stages);
  j["report"] = to_json(r.report);
  return j;
}

inline int finish_protocol(TwoModeProtocolResult res, const RunConfig& cfg, std::ostream& os,
                           std::ostream& err, const std::function<void(nlohmann::ordered_json&)>& extra_json,
                           const std::function<void(std::ostream&)>& extra_csv) {
  res.report = retolerance(std::move(res.report), cfg.tolerance);
  if (cfg.format == OutputFormat::json) {
    auto j = protocol_json(res);
    extra_json(j);
    os << j.dump(2) << '\n';
  } else {
    write_reports_csv(os, {res.report});
    extra_csv(os);
  }
  return summarize({res.report}, err);
}

inline int cmd_swap(PolarParam a1, PolarParam a2, double delta, const RunConfig& cfg,
                    std::ostream& os, std::ostream& err) {
  cfg.validate();
  return finish_protocol(full_swap(a1, a2, delta, Cutoff{cfg.n_max}), cfg, os, err,
                         [](nlohmann::ordered_json&) {}, [](std::ostream&) {});
}

inline int cmd_clone(PolarParam alpha, const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  cfg.validate();
  auto res = imperfect_clone(alpha, Cutoff{cfg.n_max});
  const double expected = 0.5 * alpha.modulus() * alpha.modulus();
  const double n1 = res.report.diagnostics.at("mean_occupation_1");
  const double n2 = res.report.diagnostics.at("mean_occupation_2");
  auto json = [&](nlohmann::ordered_json& j) {
    j["marginals"] = nlohmann::ordered_json::array(
        {{{"mode", 1}, {"mean_occupation", n1}, {"expected", expected}},
         {{"mode", 2}, {"mean_occupation", n2}, {"expected", expected}}});
  };
  auto csv = [&](std::ostream& o) {
    o << "\nmode,mean_occupation,expected\n"
      << "1," << format_double(n1) << ',' << format_double(expected) << '\n'
      << "2," << format_double(n2) << ',' << format_double(expected) << '\n';
  };
  return finish_protocol(std::move(res), cfg, os, err, json, csv);
}

// --- sweep -----------------------------------------------------------------------

struct Column {
  enum class Kind { residual, fidelity, diagnostic } kind;
  std::string key;
};

/// A sweepable check: parameter names, the pinned metric columns, and a runner.
struct SweepEntry {
  std::string name;
  std::vector<std::string> params;
  std::vector<Column> columns;
  std::function<Report(const std::vector<PolarParam>&, Cutoff, std::size_t, double)> run;
};

inline const std::vector<SweepEntry>& sweep_registry() {
  using K = Column::Kind;
  static const std::vector<SweepEntry> registry = [] {
    std::vector<SweepEntry> r;
    r.push_back({"check_J_rotation", {"t"},
                 {{K::residual, "a1"}, {K::residual, "a2"}, {K::residual, "su2_unitarity"},
                  {K::residual, "su2_determinant"}},
                 [](const auto& p, Cutoff c, std::size_t m, double tol) {
                   return check_J_rotation(p[0], c, m, tol);
                 }});
    r.push_back({"check_K_rotation", {"t"},
                 {{K::residual, "a1"}, {K::residual, "a2dag"}, {K::residual, "su11_metric"},
                  {K::residual, "su11_determinant"}, {K::residual, "hyperbolic_normalization"}},
                 [](const auto& p, Cutoff c, std::size_t m, double tol) {
                   return check_K_rotation(p[0], c, m, tol);
                 }});
    r.push_back({"check_squeeze_conjugation", {"eps"}, {{K::residual, "conjugation"}},
                 [](const auto& p, Cutoff c, std::size_t m, double tol) {
                   return check_squeeze_conjugation(p[0], c, m, tol);
                 }});
    r.push_back({"check_SDS", {"eps", "alpha"},
                 {{K::residual, "general"}, {K::residual, "scale_up"}, {K::residual, "scale_down"},
                  {K::fidelity, "general_state"}, {K::fidelity, "scale_up_state"},
                  {K::fidelity, "scale_down_state"}},
                 [](const auto& p, Cutoff c, std::size_t m, double tol) {
                   return check_SDS(p[0], p[1], c, m, tol);
                 }});
    r.push_back({"check_SSS_commute", {"eps", "alpha"},
                 {{K::residual, "commutator"}, {K::diagnostic, "commutator"},
                  {K::diagnostic, "phase_matched"}},
                 [](const auto& p, Cutoff c, std::size_t m, double tol) {
                   return check_SSS_commute(p[0], p[1], c, m, tol);
                 }});
    r.push_back({"check_phase_formula", {"t", "alpha"},
                 {{K::residual, "operator"}, {K::residual, "vacuum_fixed"},
                  {K::fidelity, "rotated_state"}},
                 [](const auto& p, Cutoff c, std::size_t m, double tol) {
                   if (p[0].value().imag() != 0.0) throw ConfigError("t must be real");
                   return check_phase_formula(p[0].value().real(), p[1], c, m, tol);
                 }});
    r.push_back({"check_UJ_squeeze_invariance", {"t", "alpha"},
                 {{K::residual, "invariance"}, {K::residual, "coef_a1dag_sq"},
                  {K::residual, "coef_a2dag_sq"}, {K::residual, "coef_cross"}},
                 [](const auto& p, Cutoff c, std::size_t m, double tol) {
                   return check_UJ_squeeze_invariance(p[0], p[1], c, m, tol);
                 }});
    r.push_back({"squeezed_swap_obstruction", {"b1", "b2", "kappa"},
                 {{K::residual, "conjugation_vs_exp"}, {K::residual, "unchanged"},
                  {K::diagnostic, "cross_term_abs"}},
                 [](const auto& p, Cutoff c, std::size_t m, double tol) {
                   return squeezed_swap_obstruction(p[0], p[1], p[2], c, m, tol);
                 }});
    r.push_back({"apply_beamsplitter", {"a1", "a2", "kappa"},
                 {{K::residual, "energy_conservation"}, {K::fidelity, "output"}},
                 [](const auto& p, Cutoff c, std::size_t, double tol) {
                   return retolerance(apply_beamsplitter(p[0], p[1], p[2], c).report, tol);
                 }});
    r.push_back({"full_swap", {"a1", "a2", "delta"}, {{K::fidelity, "output"}},
                 [](const auto& p, Cutoff c, std::size_t, double tol) {
                   if (p[2].value().imag() != 0.0) throw ConfigError("delta must be real");
                   return retolerance(full_swap(p[0], p[1], p[2].value().real(), c).report, tol);
                 }});
    r.push_back({"imperfect_clone", {"alpha"},
                 {{K::residual, "marginal1_occupation"}, {K::residual, "marginal2_occupation"},
                  {K::fidelity, "output"}},
                 [](const auto& p, Cutoff c, std::size_t, double tol) {
                   return retolerance(imperfect_clone(p[0], c).report, tol);
                 }});
    return r;
  }();
  return registry;
}

inline const SweepEntry& find_sweep(const std::string& name) {
  for (const auto& e : sweep_registry()) {
    if (e.name == name) return e;
  }
  throw ConfigError("unknown check '" + name + "'");
}

/// A grid point is the check's parameters separated by ';', e.g. "0.3@1.2;1,0".
inline std::vector<PolarParam> parse_grid_point(const std::string& text, const SweepEntry& e) {
  std::vector<PolarParam> out;
  std::size_t start = 0;
  while (true) {
    const auto end = text.find(';', start);
    out.push_back(parse_complex(text.substr(start, end - start)));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (out.size() != e.params.size()) {
    throw ConfigError(e.name + " takes " + std::to_string(e.params.size()) + " parameter(s) per grid point");
  }
  return out;
}

inline std::string sweep_csv_header(const SweepEntry& e) {
  std::string h = "index,n_max,margin";
  for (const auto& p : e.params) h += ',' + p + "_re," + p + "_im";
  for (const auto& c : e.columns) {
    const char* prefix = c.kind == Column::Kind::residual   ? "residual:"
                         : c.kind == Column::Kind::fidelity ? "fidelity:"
                                                            : "diagnostic:";
    h += std::string(",") + prefix + c.key;
  }
  return h + ",fidelity,passed";
}

/// Runs `check` over every grid point at every cutoff in `cutoffs` (the
/// configured n_max when empty). Rows are ordered by cutoff, then grid index.
inline std::vector<Report> sweep_reports(const SweepEntry& e, const std::vector<std::vector<PolarParam>>& grid,
                                         const std::vector<std::size_t>& cutoffs, const RunConfig& cfg) {
  std::vector<Report> out;
  const std::vector<std::size_t> ns = cutoffs.empty() ? std::vector<std::size_t>{cfg.n_max} : cutoffs;
  for (auto n : ns) {
    if (n < 1) throw ConfigError("cutoffs must be positive");
    const Cutoff c{n};
    const std::size_t m = cfg.margin ? std::min(*cfg.margin, n) : auto_margin(n);
    for (const auto& point : grid) {
      try {
        out.push_back(e.run(point, c, m, cfg.tolerance));
      } catch (const std::domain_error& ex) {
        throw ConfigError(e.name + ": " + ex.what());
      }
    }
  }
  return out;
}

inline void write_sweep_csv(std::ostream& os, const SweepEntry& e, const std::vector<Report>& reports) {
  os << sweep_csv_header(e) << '\n';
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    os << i << ',' << r.n_max << ',' << r.margin;
    for (const auto& p : r.params) os << ',' << format_double(p.value().real()) << ',' << format_double(p.value().imag());
    for (const auto& c : e.columns) {
      const auto& m = c.kind == Column::Kind::residual   ? r.residuals
                      : c.kind == Column::Kind::fidelity ? r.fidelities
                                                         : r.diagnostics;
      os << ',';
      if (auto it = m.find(c.key); it != m.end()) os << format_double(it->second);
    }
    os << ',';
    if (!r.fidelities.empty()) {
      double worst = 1.0;
      for (const auto& [_, f] : r.fidelities) worst = std::min(worst, f);
      os << format_double(worst);
    }
    os << ',' << (r.passed ? 1 : 0) << '\n';
  }
}

inline int cmd_sweep(const std::string& check, const std::vector<std::string>& grid_text,
                     const std::vector<std::size_t>& cutoffs, const RunConfig& cfg, std::ostream& os,
                     std::ostream& err) {
  cfg.validate();
  const auto& e = find_sweep(check);
  std::vector<std::vector<PolarParam>> grid;
  for (const auto& g : grid_text) grid.push_back(parse_grid_point(g, e));
  const auto reports = sweep_reports(e, grid, cutoffs, cfg);
  if (cfg.format == OutputFormat::json) {
    os << reports_json(reports).dump(2) << '\n';
  } else {
    write_sweep_csv(os, e, reports);
  }
  return summarize(reports, err);
}

}  // namespace fockforge::cli
