#include "liouville/run.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "liouville/classical_engine.hpp"
#include "liouville/error.hpp"
#include "liouville/observables.hpp"
#include "liouville/schrodingerizer.hpp"

namespace liouville {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> numbers(const std::string& v, const std::string& where) {
  std::vector<double> out;
  std::istringstream in(v);
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      double d;
      if (tok == "inf" || tok == "+inf") d = INFINITY;
      else if (tok == "-inf") d = -INFINITY;
      else {
        d = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      }
      out.push_back(d);
    } catch (const std::exception&) {
      throw ParseError(where + ": expected a number, got '" + tok + "'");
    }
  }
  return out;
}

double number(const std::string& v, const std::string& where) {
  const auto n = numbers(v, where);
  if (n.size() != 1) throw ParseError(where + ": expected one number");
  return n[0];
}

int integer(const std::string& v, const std::string& where) {
  const double d = number(v, where);
  if (d != std::floor(d)) throw ParseError(where + ": expected an integer");
  return int(d);
}

void check_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw ConfigError("cannot create output directory " + out);
}

void write_vector_csv(const std::string& path, const std::string& header,
                      const std::vector<double>& x, const Vec& v) {
  std::ofstream o(path);
  if (!o) throw ConfigError("cannot open " + path);
  o.precision(17);
  o << header << '\n';
  for (std::size_t i = 0; i < x.size(); ++i) o << x[i] << ',' << v[i] << '\n';
}

json audit_json(const SparsityAudit& a) {
  return {{"max_row_nnz", a.max_row_nnz}, {"max_col_nnz", a.max_col_nnz}, {"max_abs", a.max_abs}};
}

double cell_volume(const Problem& p) {
  if (p.space_dim == 1) return p.mesh1.dx * p.mesh1.dxi;
  if (p.space_dim == 2) return p.mesh2.dx * p.mesh2.dy * p.mesh2.dxi * p.mesh2.deta;
  return p.grid0.size() > 1 ? p.grid0[1] - p.grid0[0] : 1.0;
}

double cfl_for(const Problem& p) {
  if (p.space_dim == 1) return cfl_dt(p.mesh1, p.speed1).dt;
  if (p.space_dim == 2) return cfl_dt(p.mesh2, p.speed2).dt;
  const double r = p.parts[0].A.diagonal().cwiseAbs().maxCoeff();
  return 0.9 / r;
}

struct Solution {
  std::vector<Vec> parts;
};

// Fields and moments for one solution, file names tagged with `tag`.
void write_outputs(const Problem& p, const Solution& s, const std::string& dir,
                   const std::string& tag) {
  const std::string sfx = tag.empty() ? "" : "_" + tag;
  if (p.space_dim == 1) {
    for (std::size_t c = 0; c < p.parts.size(); ++c) {
      FieldSnapshot1D snap{p.mesh1, p.T, {s.parts[c].data(), s.parts[c].data() + s.parts[c].size()}};
      const std::string name = c == 0 ? "field" : "field_" + p.parts[c].name;
      write_field_csv(dir + "/" + name + sfx + ".csv", snap);
    }
    MomentProfile m = p.id == "ex3" ? levelset_moments(p.mesh1, s.parts[0], s.parts[1], p.beta)
                                    : avg_slowness_1d(p.mesh1, s.parts[0]);
    write_moments_csv(dir + "/moments" + sfx + ".csv", m);
  } else if (p.space_dim == 2) {
    FieldSnapshot2D snap{p.mesh2, p.T, {s.parts[0].data(), s.parts[0].data() + s.parts[0].size()}};
    write_field_binary(dir + "/field" + sfx + ".bin", snap);
    write_density_2d_csv(dir + "/moments" + sfx + ".csv", p.mesh2, density_2d(p.mesh2, s.parts[0]));
  } else {
    write_vector_csv(dir + "/field" + sfx + ".csv", "x,u", p.grid0, s.parts[0]);
  }
}

Solution classical(const Problem& p, const RunConfig& cfg, double dt, json& rep) {
  IntegrateOptions opt;
  opt.method = parse_method(cfg.method);
  opt.dt = dt;
  Solution s;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& c : p.parts) {
    const auto r = integrate(c.A, c.b, c.f0, p.T, opt);
    s.parts.push_back(r.f);
    rep["classical"]["steps"] = r.steps;
  }
  rep["classical"]["method"] = cfg.method;
  rep["timings"]["classical"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

Solution schrod(const Problem& p, const RunConfig& cfg, double dt, json& rep) {
  PipelineParams prm;
  prm.n_p = cfg.n_p > 0 ? cfg.n_p : p.n_p;
  prm.eps_target = cfg.eps_target;
  prm.margin = cfg.margin;
  prm.alpha_minus = cfg.alpha_minus;
  prm.p_override = cfg.p_override ? cfg.p_override
                   : cfg.p_designed ? std::nullopt
                                    : p.p_override;
  std::string source = "designed";
  if (cfg.p_L && cfg.p_R) {
    prm.L_override = cfg.p_L;
    prm.R_override = cfg.p_R;
    source = "config";
  } else if (p.p_L && p.p_R && !cfg.p_designed) {
    prm.L_override = p.p_L;
    prm.R_override = p.p_R;
    source = "preset";
  }
  rep["p_interval_source"] = source;
  prm.evolve.engine = parse_engine(cfg.engine);
  prm.evolve.dt = dt;
  prm.memory_cap_bytes = cfg.memory_cap_gib * 1073741824.0;
  Solution s;
  json parts = json::array();
  for (const auto& c : p.parts) {
    const auto r = run_pipeline(c.A, c.b, c.f0, p.T, prm);
    s.parts.push_back(r.f);
    const auto& q = r.report;
    json j = {{"component", c.name},
              {"lambda_plus", q.lambda_plus},
              {"lambda_minus", q.lambda_minus},
              {"lanczos_iterations", q.lanczos_iterations},
              {"L", q.L},
              {"R", q.R},
              {"n_p", q.n_p},
              {"dp", q.dp},
              {"p_recover", q.p_recover},
              {"p_valid", q.p_valid},
              {"engine", q.engine},
              {"eps", q.eps}};
    if (!q.warning.empty()) {
      j["warning"] = q.warning;
      rep["warnings"].push_back(c.name + ": " + q.warning);
      std::cerr << "warning: " << c.name << ": " << q.warning << '\n';
    }
    parts.push_back(j);
    rep["timings"]["schrod_" + c.name] = {{"setup", q.t_setup},
                                          {"eigs", q.t_eigs},
                                          {"transform", q.t_transform},
                                          {"evolve", q.t_evolve}};
  }
  rep["schrod"] = parts;
  return s;
}

void convergence(const RunConfig& cfg, json& rep) {
  if (cfg.problem != "ex1" && cfg.problem != "ex2")
    throw ConfigError("convergence mode supports ex1 and ex2");
  std::vector<int> levels = cfg.levels.empty() ? std::vector<int>{32, 64, 128} : cfg.levels;
  std::ofstream o(cfg.out + "/convergence.csv");
  o.precision(17);
  o << "n,dx,error,order\n";
  json rows = json::array();
  double prev = NAN;
  int prev_n = 0;
  for (int n : levels) {
    Problem p = problem_for(cfg, n);
    const double dt = (cfg.dt ? *cfg.dt : p.dt) * 128.0 / n;
    IntegrateOptions opt;
    opt.method = parse_method(cfg.method);
    opt.dt = dt;
    const Vec f = integrate(p.parts[0].A, p.parts[0].b, p.parts[0].f0, p.T, opt).f;
    double err = 0.0;
    if (cfg.problem == "ex1") {
      const auto ex = cell_average_1d([](double x, double xi) { return exact_example1_f(x, xi); },
                                      p.mesh1);
      for (int q = 0; q < f.size(); ++q) err += std::abs(f[q] - ex.f[q]);
      err *= p.mesh1.dx * p.mesh1.dxi;
    } else {
      const auto rho = density_1d(p.mesh1, f);
      for (int i = 0; i < p.mesh1.nx; ++i)
        err += std::abs(rho[i] - exact_example2_moments(p.mesh1.x[i]).rho);
      err *= p.mesh1.dx;
    }
    const double order = prev_n ? std::log(prev / err) / std::log(double(n) / prev_n) : NAN;
    o << n << ',' << p.mesh1.dx << ',' << err << ',';
    if (prev_n) o << order;
    o << '\n';
    rows.push_back({{"n", n}, {"error", err}, {"order", prev_n ? json(order) : json(nullptr)}});
    prev = err;
    prev_n = n;
  }
  rep["convergence"] = rows;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(ln);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (key == "problem") c.problem = val;
    else if (key == "mode") c.mode = val;
    else if (key == "n" || key == "nx") c.n = integer(val, where);
    else if (key == "levels") {
      std::string v = val;
      for (auto& ch : v)
        if (ch == ',') ch = ' ';
      c.levels.clear();
      for (double d : numbers(v, where)) c.levels.push_back(int(d));
    } else if (key == "dt") {
      if (val == "auto") c.auto_dt = true;
      else c.dt = number(val, where);
    } else if (key == "T") c.T = number(val, where);
    else if (key == "method") c.method = val;
    else if (key == "engine") c.engine = val;
    else if (key == "n_p" || key == "np") c.n_p = integer(val, where);
    else if (key == "eps_target") c.eps_target = number(val, where);
    else if (key == "margin") c.margin = number(val, where);
    else if (key == "alpha_minus") c.alpha_minus = number(val, where);
    else if (key == "p_recover") c.p_override = number(val, where);
    else if (key == "p_interval") {
      if (val == "designed") {
        c.p_designed = true;
      } else {
        std::string v = val;
        for (auto& ch : v)
          if (ch == ',') ch = ' ';
        const auto lr = numbers(v, where);
        if (lr.size() != 2) throw ParseError(where + ": p_interval needs 'L R' or 'designed'");
        c.p_L = lr[0];
        c.p_R = lr[1];
      }
    }
    else if (key == "out") c.out = val;
    else if (key == "threads") c.threads = integer(val, where);
    else if (key == "memory_cap_gib") c.memory_cap_gib = number(val, where);
    else if (key == "write_matrix") c.write_matrix = val == "true" || val == "1";
    else if (key == "x_range") {
      const auto v = numbers(val, where);
      if (v.size() != 2) throw ParseError(where + ": x_range needs two numbers");
      c.x_min = v[0];
      c.x_max = v[1];
    } else if (key == "xi_max") c.xi_max = number(val, where);
    else if (key == "speed") {
      // lo hi a [b]; pieces separated by ';'
      std::istringstream ps(val);
      std::string piece;
      c.speed.clear();
      while (std::getline(ps, piece, ';')) {
        if (trim(piece).empty()) continue;
        const auto v = numbers(piece, where);
        if (v.size() != 3 && v.size() != 4)
          throw ParseError(where + ": speed piece needs 'lo hi a [b]'");
        c.speed.push_back({v[0], v[1], v[2], v.size() == 4 ? v[3] : 0.0});
      }
    } else if (key == "interface_model") {
      if (val != "partial" && val != "transmit_only")
        throw ParseError(where + ": interface_model must be partial or transmit_only");
      c.interface_model = val;
    } else if (key == "initial") {
      std::istringstream is(val);
      std::string kind;
      is >> kind;
      std::string rest;
      std::getline(is, rest);
      if (kind != "gauss") throw ParseError(where + ": only 'gauss x0 xi0 sx sxi' is supported");
      c.gauss = numbers(rest, where);
      if (c.gauss.size() != 4) throw ParseError(where + ": gauss needs four numbers");
    } else {
      throw ParseError(where + ": unknown key '" + key + "'");
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

Problem problem_for(const RunConfig& cfg, int n_override) {
  const int n = n_override > 0 ? n_override : cfg.n;
  if (cfg.problem != "custom") {
    Problem p = make_problem(cfg.problem, n);
    if (cfg.T) p.T = *cfg.T;
    return p;
  }
  if (cfg.speed.empty()) throw ConfigError("custom problem needs 'speed'");
  if (cfg.gauss.empty()) throw ConfigError("custom problem needs 'initial'");
  Problem p;
  p.id = "custom";
  p.space_dim = 1;
  SpeedSpec1D spec{cfg.speed, cfg.interface_model == "partial" ? InterfaceModel::partial
                                                               : InterfaceModel::transmit_only};
  const int nn = n > 0 ? n : 64;
  p.mesh1 = build_mesh_1d({cfg.x_min, cfg.x_max}, {-cfg.xi_max, cfg.xi_max}, nn, nn);
  p.speed1 = sample_speed_1d(spec, p.mesh1);
  p.q_bound = q_bound_1d(p.speed1);
  const auto g = cfg.gauss;
  const auto f0 = cell_average_1d(
      [g](double x, double xi) {
        const double a = (x - g[0]) / g[2], b = (xi - g[1]) / g[3];
        return std::exp(-a * a - b * b);
      },
      p.mesh1);
  const auto sys = assemble_system_1d(p.mesh1, p.speed1);
  p.audit_A1 = sys.audit_A1;
  p.audit_A2 = sys.audit_A2;
  p.parts.push_back({"f", sys.A, sys.b, Eigen::Map<const Vec>(f0.f.data(), f0.f.size())});
  p.T = cfg.T ? *cfg.T : 1.0;
  p.dt = 0.02;
  return p;
}

json run(const RunConfig& cfg) {
  if (cfg.problem.empty()) throw ConfigError("no problem given");
  if (cfg.mode != "classical" && cfg.mode != "schrod" && cfg.mode != "compare" &&
      cfg.mode != "convergence")
    throw ConfigError("unknown mode '" + cfg.mode + "'");
#ifdef _OPENMP
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif
  check_dir(cfg.out);
  json rep;
  rep["problem"] = cfg.problem;
  rep["mode"] = cfg.mode;
  rep["warnings"] = json::array();

  if (cfg.mode == "convergence") {
    convergence(cfg, rep);
  } else {
    const Problem p = problem_for(cfg);
    const double cfl = cfl_for(p);
    const double dt = cfg.auto_dt ? cfl : (cfg.dt ? *cfg.dt : p.dt);
    rep["n"] = p.space_dim == 1   ? p.mesh1.nx
               : p.space_dim == 2 ? p.mesh2.nx
                                  : int(p.grid0.size() / 2);
    rep["dimension"] = p.parts[0].A.rows();
    rep["T"] = p.T;
    rep["dt"] = dt;
    rep["cfl_dt"] = cfl;
    rep["audit_A1"] = audit_json(p.audit_A1);
    rep["audit_A2"] = audit_json(p.audit_A2);
    rep["q_bound"] = p.q_bound;
    if (p.beta > 0) rep["beta"] = p.beta;
    if (cfg.write_matrix) write_coo(cfg.out + "/matrix.coo", p.parts[0].A);

    if (cfg.mode == "schrod" || cfg.mode == "compare") {
      const int np = cfg.n_p > 0 ? cfg.n_p : p.n_p;
      const double need = pipeline_memory_bytes(int(p.parts[0].A.rows()), np);
      rep["memory_estimate_gib"] = need / 1073741824.0;
      if (need > cfg.memory_cap_gib * 1073741824.0)
        throw ResourceError("extended state needs " + std::to_string(need / 1073741824.0) +
                            " GiB, above the cap of " + std::to_string(cfg.memory_cap_gib) +
                            " GiB; lower --np or --nx");
    }
    if (cfg.mode == "classical") {
      write_outputs(p, classical(p, cfg, dt, rep), cfg.out, "");
    } else if (cfg.mode == "schrod") {
      write_outputs(p, schrod(p, cfg, dt, rep), cfg.out, "");
    } else {
      const auto a = classical(p, cfg, dt, rep);
      const auto b = schrod(p, cfg, dt, rep);
      write_outputs(p, a, cfg.out, "classical");
      write_outputs(p, b, cfg.out, "schrod");
      json diffs = json::array();
      for (std::size_t c = 0; c < a.parts.size(); ++c) {
        const Vec d = a.parts[c] - b.parts[c];
        diffs.push_back({{"component", p.parts[c].name},
                         {"inf", d.cwiseAbs().maxCoeff()},
                         {"l1", d.cwiseAbs().sum() * cell_volume(p)}});
      }
      rep["difference"] = diffs;
    }
  }
  std::ofstream o(cfg.out + "/report.json");
  o << rep.dump(2) << '\n';
  return rep;
}

}  // namespace liouville
