#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "liouville/error.hpp"
#include "liouville/presets.hpp"
#include "liouville/run.hpp"

using namespace liouville;
namespace fs = std::filesystem;

namespace {

const fs::path scratch = fs::temp_directory_path() / "liouville_cli_test";

int cli(const std::string& args, const std::string& log = "cli.log") {
  fs::create_directories(scratch);
  const std::string cmd = std::string(LIOUVILLE_CLI_PATH) + " " + args + " > " +
                          (scratch / log).string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json report(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "report.json")); }

}  // namespace

TEST_CASE("empty invocation prints usage and fails") {
  CHECK(cli("", "empty.log") != 0);
  CHECK(slurp(scratch / "empty.log").find("run") != std::string::npos);
  CHECK(cli("run", "norun.log") != 0);
}

TEST_CASE("config parsing") {
  const auto c = parse_config(
      "# a comment\nproblem = ex1\nmode = compare  # trailing\nnx = 32\nnp = 1024\n"
      "levels = 32, 64\ndt = auto\np_recover = 0.7454\n",
      "demo.cfg");
  CHECK(c.problem == "ex1");
  CHECK(c.mode == "compare");
  CHECK(c.n == 32);
  CHECK(c.n_p == 1024);
  CHECK(c.levels == std::vector<int>{32, 64});
  CHECK(c.auto_dt);
  CHECK(*c.p_override == doctest::Approx(0.7454));

  try {
    parse_config("problem = ex1\n\nbogus = 3\n", "demo.cfg");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("demo.cfg:3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("nx = many\n"), ParseError);
  CHECK_THROWS_AS(parse_config("just words\n"), ParseError);
}

TEST_CASE("p interval sources") {
  const auto c = parse_config("p_interval = -6, 5\n");
  CHECK(*c.p_L == -6.0);
  CHECK(*c.p_R == 5.0);
  CHECK(parse_config("p_interval = designed\n").p_designed);
  CHECK_THROWS_AS(parse_config("p_interval = 3\n"), ParseError);

  // reference interval and recovery point only at the default mesh
  const auto ex1 = make_problem("ex1");
  CHECK(*ex1.p_L == -55.771);
  CHECK(*ex1.p_R == 5.7454);
  CHECK(*ex1.p_override == 0.7454);
  CHECK(*make_problem("ex3").p_override == 14.513);
  CHECK_FALSE(make_problem("ex1", 32).p_L.has_value());
  CHECK_FALSE(make_problem("ex4", 4).p_override.has_value());

  const auto out = scratch / "pint";
  REQUIRE(cli("run ex1 --mode schrod --nx 16 --np 256 --p-interval -8,4 --out " +
              out.string()) == 0);
  const auto rep = report(out);
  CHECK(rep["p_interval_source"] == "config");
  CHECK(rep["schrod"][0]["L"] == -8.0);
  CHECK(rep["schrod"][0]["R"] == 4.0);
}

TEST_CASE("compare mode") {
  const auto out = scratch / "compare";
  REQUIRE(cli("run ex1 --mode compare --nx 32 --np 1024 --out " + out.string()) == 0);
  for (auto f : {"field_classical.csv", "field_schrod.csv", "moments_classical.csv",
                 "moments_schrod.csv", "report.json"})
    CHECK(fs::exists(out / f));
  const auto rep = report(out);
  const double inf_diff = rep["difference"][0]["inf"];
  MESSAGE("compare inf difference " << inf_diff);
  CHECK(inf_diff <= 5e-2);
  CHECK(rep["schrod"][0]["n_p"] == 1024);
  CHECK(rep["schrod"][0]["p_valid"] == true);
}

TEST_CASE("repeated runs are bit identical") {
  const auto a = scratch / "rep_a", b = scratch / "rep_b";
  REQUIRE(cli("run ex1 --mode compare --nx 16 --np 256 --out " + a.string()) == 0);
  REQUIRE(cli("run ex1 --mode compare --nx 16 --np 256 --threads 2 --out " + b.string()) == 0);
  for (auto f : {"field_classical.csv", "field_schrod.csv", "moments_classical.csv",
                 "moments_schrod.csv"})
    CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("convergence mode") {
  const auto out = scratch / "conv";
  REQUIRE(cli("run ex1 --mode convergence --levels 32,64,128 --out " + out.string()) == 0);
  const auto rep = report(out);
  const auto& rows = rep["convergence"];
  REQUIRE(rows.size() == 3);
  for (int k = 1; k < 3; ++k) {
    const double order = rows[k]["order"];
    MESSAGE("order " << order);
    CHECK(double(rows[k]["error"]) < double(rows[k - 1]["error"]));
    CHECK(order >= 0.5);
    CHECK(order <= 1.1);
  }
  CHECK(slurp(out / "convergence.csv").rfind("n,dx,error,order\n", 0) == 0);
}

TEST_CASE("memory pre-flight") {
  CHECK(cli("run ex1 --mode schrod --np 1048576 --memory-cap 0.5 --out " +
                (scratch / "mem").string(),
            "mem.log") == 1);
  CHECK(slurp(scratch / "mem.log").find("GiB") != std::string::npos);
}

TEST_CASE("config file, custom problem and matrix dump") {
  const auto out = scratch / "custom";
  const auto cfg = scratch / "custom.cfg";
  std::ofstream(cfg) << "problem = custom\nmode = classical\nnx = 16\nT = 0.3\n"
                        "x_range = -1 1\nxi_max = 1\n"
                        "speed = -inf 0 1.0; 0 inf 0.5\n"
                        "initial = gauss -0.5 0.4 0.1 0.1\n"
                        "out = " + out.string() + "\n";
  REQUIRE(cli("run --config " + cfg.string() + " --matrix") == 0);
  CHECK(fs::exists(out / "field.csv"));
  CHECK(fs::exists(out / "matrix.coo"));
  CHECK(report(out)["q_bound"] == 6);

  std::ofstream(scratch / "bad.cfg") << "problem = ex1\nspeed = 1 2\n";
  CHECK(cli("run --config " + (scratch / "bad.cfg").string(), "bad.log") == 1);
  CHECK(slurp(scratch / "bad.log").find("bad.cfg:2") != std::string::npos);
}

TEST_CASE("other presets run") {
  CHECK(cli("run advection --out " + (scratch / "adv").string()) == 0);
  CHECK(cli("run ex4 --nx 4 --out " + (scratch / "ex4").string()) == 0);
  CHECK(fs::exists(scratch / "ex4" / "field.bin"));
  CHECK(cli("run ex9 --out " + (scratch / "ex9").string(), "ex9.log") == 1);
}
