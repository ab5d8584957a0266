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

#include "fockforge/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace ff = fockforge;
namespace cli = fockforge::cli;

namespace {

struct Options {
  std::size_t n_max = 0;
  std::optional<std::size_t> margin;
  double tolerance = ff::kDefaultTolerances.fidelity_deficit;
  std::uint64_t seed = 7;
  std::string format = "json";
  std::string out;
};

cli::RunConfig to_config(const Options& o) {
  cli::RunConfig cfg;
  cfg.n_max = o.n_max;
  cfg.margin = o.margin;
  cfg.tolerance = o.tolerance;
  cfg.seed = o.seed;
  cfg.format = o.format == "csv" ? cli::OutputFormat::csv : cli::OutputFormat::json;
  if (!o.out.empty()) cfg.output_path = o.out;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated Fock-space checks for coherent-state operators and swap protocols"};
  app.require_subcommand(1);

  Options opt;
  try {
    opt.n_max = cli::default_nmax();
  } catch (const cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  app.add_option("--nmax", opt.n_max, "Per-mode cutoff (default: $FOCKFORGE_NMAX or 36)")
      ->check(CLI::PositiveNumber);
  app.add_option("--margin", opt.margin, "Safe-block margin (default: ceil(nmax/4))");
  app.add_option("--tol", opt.tolerance, "Pass tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "Seed for sampled parameters");
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", opt.out, "Write output to PATH instead of stdout");

  auto* verify = app.add_subcommand("verify-all", "Run every identity, protocol and closure check");

  std::string a1 = "0";
  std::string a2 = "0";
  std::string delta = "0";
  auto* swap = app.add_subcommand("swap", "Run the beamsplitter swap protocol");
  swap->add_option("--a1", a1, "Amplitude of mode 1 (re,im | mod@phase | re)")->required();
  swap->add_option("--a2", a2, "Amplitude of mode 2")->required();
  swap->add_option("--delta", delta, "Beamsplitter phase");

  std::string alpha = "0";
  auto* clone = app.add_subcommand("clone", "Run the imperfect cloning protocol");
  clone->add_option("--alpha", alpha, "Input amplitude")->required();

  std::string check;
  std::vector<std::string> grid;
  std::vector<std::size_t> cutoffs;
  auto* sweep = app.add_subcommand("sweep", "Run one check over a parameter grid");
  sweep->add_option("check", check, "Registered check name")->required();
  sweep->add_option("--grid", grid, "Grid point, parameters separated by ';' (repeatable)");
  sweep->add_option("--cutoffs", cutoffs, "Cutoffs to sweep (default: --nmax)")->delimiter(',');

  for (auto* sub : {verify, swap, clone, sweep}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const auto cfg = to_config(opt);
    std::ofstream file;
    if (cfg.output_path) {
      file.open(*cfg.output_path);
      if (!file) throw cli::ConfigError("cannot open " + *cfg.output_path);
    }
    std::ostream& os = cfg.output_path ? static_cast<std::ostream&>(file) : std::cout;

    if (*verify) return cli::cmd_verify_all(cfg, os, std::cerr);
    if (*swap) {
      return cli::cmd_swap(cli::parse_complex(a1), cli::parse_complex(a2), cli::parse_real(delta), cfg,
                           os, std::cerr);
    }
    if (*clone) return cli::cmd_clone(cli::parse_complex(alpha), cfg, os, std::cerr);
    if (*sweep) return cli::cmd_sweep(check, grid, cutoffs, cfg, os, std::cerr);
  } catch (const cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
