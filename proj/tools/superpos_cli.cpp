// superpos: command-line front end for the superposition measures.
//
//   superpos measure nls --state bell.json
//   superpos measure ls --catalog fig1_state:0.2 --block 0 --variant sum
//   superpos sweep w_like --grid 199 --out w.csv
//   superpos table1
//   superpos certify --catalog rsp_state
//   superpos schmidt --catalog ghz_like:0.6 --partition "0|12"
//
// Exit codes: 0 ok, 1 invalid input, 2 optimizer did not converge.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "superpos/error.hpp"
#include "superpos/experiments.hpp"

namespace {

using namespace superpos;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNotConverged = 2;

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + cfg.out);
  out << text;
}

struct Flags {
  std::string state, catalog, block, partition, variant, out, config, grid_values;
  std::uint64_t seed = 42;
  int restarts = 32;
  double tol = 1e-10;
  int max_iters = 2000;
  int grid = 20;
  int ensemble_size = 0;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--state", f.state, "JSON state file");
  app->add_option("--catalog", f.catalog, "catalog state, e.g. werner:0.6");
  app->add_option("--variant", f.variant, "root or sum");
  app->add_option("--partition", f.partition, "partition such as 0|1|2 or 01|2");
  app->add_option("--block", f.block, "block for LS, e.g. 0 or 01");
  app->add_option("--seed", f.seed, "optimizer seed");
  app->add_option("--restarts", f.restarts, "optimizer restarts")->check(CLI::PositiveNumber);
  app->add_option("--tol", f.tol, "optimizer tolerance");
  app->add_option("--max-iters", f.max_iters, "Nelder-Mead iterations per run");
  app->add_option("--ensemble-size", f.ensemble_size, "decomposition size for mixed states (0: rank)");
  app->add_option("--out", f.out, "output path (default stdout)");
  app->add_option("--config", f.config, "text config; its values override flags");
}

RunConfig to_config(const std::string& command, const Flags& f, const std::string& kind = {},
                    const std::string& family = {}) {
  RunConfig c;
  c.command = command;
  if (!kind.empty()) c.measure = kind;
  c.family = family;
  c.state = f.state;
  c.catalog = f.catalog;
  if (!f.block.empty()) c.block = f.block;
  c.partition = f.partition;
  if (!f.variant.empty()) c.variant = parse_variant(f.variant);
  c.out = f.out;
  c.grid_points = f.grid;
  c.opt.seed = f.seed;
  c.opt.restarts = f.restarts;
  c.opt.tol = f.tol;
  c.opt.max_iters = f.max_iters;
  c.roof.ensemble_size = f.ensemble_size;
  if (!f.grid_values.empty()) c = parse_run_config("grid_values = " + f.grid_values, c);
  if (!f.config.empty()) c = load_run_config(f.config, c);
  check_config(c.opt);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local and nonlocal superposition measures"};
  app.require_subcommand(1);
  Flags f;
  std::string kind, family;

  auto* measure = app.add_subcommand("measure", "measure one state");
  measure->add_option("kind", kind, "ls, ls_sym or nls")->required();
  add_common(measure, f);

  auto* sweep = app.add_subcommand("sweep", "reproduce a figure as CSV");
  sweep->add_option("family", family, "fig1, fig2, ghz_like or w_like")->required();
  sweep->add_option("--grid", f.grid, "number of points inside (0, 1)");
  sweep->add_option("--grid-values", f.grid_values, "explicit comma-separated grid");
  add_common(sweep, f);

  auto* table1 = app.add_subcommand("table1", "three-qubit GHZ and W table");
  add_common(table1, f);

  auto* certify = app.add_subcommand("certify", "zero-measure certificates for a state");
  add_common(certify, f);

  auto* schmidt = app.add_subcommand("schmidt", "Schmidt coefficients across a bipartition");
  add_common(schmidt, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*measure) {
      const RunConfig c = to_config("measure", f, kind);
      const auto r = run_measure(c);
      emit(c, r.table.to_csv());
      std::fprintf(stderr, "wall_time_s %.3f\n", r.wall_seconds);
      return r.report.converged ? kExitOk : kExitNotConverged;
    }
    if (*sweep) {
      const RunConfig c = to_config("sweep", f, {}, family);
      const auto r = run_sweep(c);
      emit(c, r.table.to_csv());
      return r.converged ? kExitOk : kExitNotConverged;
    }
    if (*table1) {
      const RunConfig c = to_config("table1", f);
      const auto r = run_table1(c);
      if (c.out.empty()) {
        std::cout << r.table.to_csv();
      } else {
        std::cout << r.table.to_text();
        emit(c, r.table.to_csv());
      }
      return r.converged ? kExitOk : kExitNotConverged;
    }
    if (*certify) {
      const RunConfig c = to_config("certify", f);
      emit(c, run_certify(c));
      return kExitOk;
    }
    const RunConfig c = to_config("schmidt", f);
    emit(c, run_schmidt(c).to_csv());
    return kExitOk;
  } catch (const InvalidInput& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  }
}
