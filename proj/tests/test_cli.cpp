// End-to-end checks of the hso binary: determinism, formats, config files,
// dry runs and error paths. The binary path comes from the build system.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("hso_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

int run(const std::string& args) {
  std::string cmd = std::string(HSO_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("identical config and seed give byte-identical outputs") {
  TempDir dir;
  auto a = dir.path / "a.csv";
  auto b = dir.path / "b.csv";
  std::string flags = "dominate --seed 11 --count 3 --levels 5 --cells 4 --ntheta 32";
  REQUIRE(run(flags + " --output " + a.string()) == 0);
  REQUIRE(run(flags + " --output " + b.string()) == 0);
  std::string body = slurp(a);
  CHECK(body == slurp(b));
  CHECK(body.find("sup_ratio") != std::string::npos);
  CHECK(body.find("# seed=11") != std::string::npos);
}

TEST_CASE("region CSV carries config header and classifications") {
  TempDir dir;
  auto out = dir.path / "region.csv";
  REQUIRE(run("region --t 1.25 --kind singular --resolution 5 --output " +
              out.string()) == 0);
  std::string body = slurp(out);
  CHECK(body.find("# sigma=0.5") != std::string::npos);
  CHECK(body.find("ip,iq,class") != std::string::npos);
  CHECK(body.find("0.5,1,restricted") != std::string::npos);
  CHECK(body.find("0,0.5,weak") != std::string::npos);
  CHECK(body.find('\t') == std::string::npos);
}

TEST_CASE("json output is a single object with config/results/metadata") {
  TempDir dir;
  auto out = dir.path / "b.json";
  REQUIRE(run("blowup --m 10 --t 1.25 --format json --output " + out.string()) == 0);
  auto j = nlohmann::json::parse(slurp(out));
  REQUIRE(j.contains("config"));
  REQUIRE(j.contains("results"));
  REQUIRE(j.contains("metadata"));
  CHECK(j["config"]["m"] == "10");
  double value = std::stod(j["results"]["rows"][0][0].get<std::string>());
  CHECK(value == doctest::Approx(std::exp2(10 * 0.25) + std::exp2(-0.25)).epsilon(1e-12));
}

TEST_CASE("dry-run validates without writing") {
  TempDir dir;
  auto out = dir.path / "never.csv";
  REQUIRE(run("layer-norms --t 1.25 --jmax 10 --dry-run --output " + out.string()) == 0);
  CHECK_FALSE(fs::exists(out));
  // Invalid parameters fail even in dry-run mode.
  CHECK(run("layer-norms --t 1.7 --dry-run") != 0);
}

TEST_CASE("invalid parameters exit nonzero") {
  CHECK(run("region --t 1.6") != 0);
  CHECK(run("dominate --count 3") != 0);  // seed is mandatory
  CHECK(run("decompose --t 1.25 --alpha -1") != 0);
  CHECK(run("maximal --t 1.25 --levels 8 --ntheta 4 --max-level 7") != 0);
  CHECK(run("weights --weight nonsense:1") != 0);
}

TEST_CASE("flat key=value config files feed the subcommand") {
  TempDir dir;
  auto cfg = dir.path / "run.cfg";
  {
    std::ofstream f(cfg);
    f << "# comment line\n";
    f << "t=1.25\n";
    f << "m=8\n";
  }
  auto out = dir.path / "out.csv";
  REQUIRE(run("blowup --config " + cfg.string() + " --output " + out.string()) == 0);
  CHECK(slurp(out).find("# m=8") != std::string::npos);

  // An explicit flag beats the config value.
  auto out2 = dir.path / "out2.csv";
  REQUIRE(run("blowup --config " + cfg.string() + " --m 9 --output " +
              out2.string()) == 0);
  CHECK(slurp(out2).find("# m=9") != std::string::npos);
}

TEST_CASE("json config files feed the subcommand") {
  TempDir dir;
  auto cfg = dir.path / "run.json";
  {
    std::ofstream f(cfg);
    f << R"({"t": 1.25, "m": 7})" << "\n";
  }
  auto out = dir.path / "out.csv";
  REQUIRE(run("blowup --config " + cfg.string() + " --output " + out.string()) == 0);
  CHECK(slurp(out).find("# m=7") != std::string::npos);
}

TEST_CASE("version flag reports the library version") {
  CHECK(run("--version") == 0);
}
