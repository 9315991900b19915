#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "liouville/error.hpp"
#include "liouville/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Liouville interface solver with a classical Schrodingerization emulator"};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "run a builtin example or a config file");

  std::string problem, config, mode, levels, dt, engine, method, out, p_interval;
  int nx = 0, np = 0, threads = 0;
  double p_recover = 0.0, cap = 0.0;
  bool matrix = false;
  run->add_option("problem", problem, "ex1, ex2, ex3, ex4, advection or custom");
  run->add_option("--config", config, "key = value configuration file");
  run->add_option("--mode", mode, "classical | schrod | compare | convergence");
  run->add_option("--nx", nx, "cells per direction");
  run->add_option("--np", np, "number of p points (power of two)");
  run->add_option("--levels", levels, "convergence ladder, e.g. 32,64,128");
  run->add_option("--dt", dt, "time step or 'auto' for the CFL step");
  run->add_option("--engine", engine, "exact | cn | be");
  run->add_option("--method", method, "classical integrator: cn | fe");
  run->add_option("--p-recover", p_recover, "recovery point override");
  run->add_option("--p-interval", p_interval, "'L,R' or 'designed' (ignore the preset)");
  run->add_option("--memory-cap", cap, "memory cap in GiB");
  run->add_option("--threads", threads, "OpenMP threads");
  run->add_option("--out", out, "output directory");
  run->add_flag("--matrix", matrix, "write matrix.coo");

  if (argc <= 1) {
    std::cerr << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    liouville::RunConfig cfg;
    if (!config.empty()) cfg = liouville::load_config(config);
    // flags override the file
    std::ostringstream extra;
    if (!problem.empty()) cfg.problem = problem;
    if (!mode.empty()) cfg.mode = mode;
    if (nx > 0) cfg.n = nx;
    if (np > 0) cfg.n_p = np;
    if (!levels.empty()) extra << "levels = " << levels << '\n';
    if (!dt.empty()) extra << "dt = " << dt << '\n';
    if (!p_interval.empty()) extra << "p_interval = " << p_interval << '\n';
    if (!engine.empty()) cfg.engine = engine;
    if (!method.empty()) cfg.method = method;
    if (p_recover > 0.0) cfg.p_override = p_recover;
    if (cap > 0.0) cfg.memory_cap_gib = cap;
    if (threads > 0) cfg.threads = threads;
    if (!out.empty()) cfg.out = out;
    if (matrix) cfg.write_matrix = true;
    const auto more = liouville::parse_config(extra.str(), "command line");
    if (!more.levels.empty()) cfg.levels = more.levels;
    if (more.dt) cfg.dt = more.dt;
    if (more.auto_dt) cfg.auto_dt = true;
    if (more.p_designed) cfg.p_designed = true;
    if (more.p_L) {
      cfg.p_L = more.p_L;
      cfg.p_R = more.p_R;
    }
    if (cfg.problem.empty()) {
      std::cerr << run->help();
      return 2;
    }
    const auto rep = liouville::run(cfg);
    std::cout << rep.dump(2) << '\n';
  } catch (const liouville::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
