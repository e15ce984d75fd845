#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  args.insert(args.begin(), "invfrac");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = invfrac::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Runs the installed binary in a shell so exit codes come from a real process.
Outcome spawn(const std::string& args) {
  const std::string cmd = std::string(INVFRAC_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string text;
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) text += buf;
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, text, {}};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("invfrac_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("cwstar prints the surface-energy constant") {
  const auto r = spawn("cwstar --model lj");
  CHECK(r.code == 0);
  CHECK(r.out.find("c_wstar 0.3771236166") != std::string::npos);
  CHECK(call({"cwstar", "--model", "quartic"}).out.find("c_wstar 0.333333333333") != std::string::npos);
  CHECK(call({"cwstar", "--coeffs", "0", "1", "-2", "1"}).out.find("c_wstar 0.3771236166") !=
        std::string::npos);
}

TEST_CASE("invalid input exits with the domain code") {
  CHECK(spawn("sharp --lambda 0.9 --mu 1").code == 2);
  CHECK(spawn("minimize --grid -5").code == 2);
  CHECK(spawn("minimize --eps -1").code == 2);
  CHECK(spawn("bogus").code == 2);
  CHECK(spawn("").code == 2);
  CHECK(spawn("scan --lambda-min 0.5").code == 2);
  CHECK(spawn("minimize --functional W").code == 2);
  CHECK(spawn("minimize --k 1 --mu 1").code == 2);
  CHECK(spawn("cwstar --model nosuch").code == 2);
  const auto r = call({"reconstruct", "--input", "/nonexistent/file.field"});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error:", 0) == 0);
}

TEST_CASE("strict mode turns non-convergence into exit code 3") {
  const auto dir = scratch("strict");
  const std::string common = "minimize --functional V --lambda 1.5 --mu 200 --eps 0.02 --grid 400 "
                             "--max-iterations 1 --out " + dir.string();
  CHECK(spawn(common + " --strict").code == 3);
  CHECK(spawn(common).code == 0);
  fs::remove_all(dir);
}

TEST_CASE("sharp writes every table and repeated runs are byte identical") {
  const auto a = scratch("sharp_a");
  const auto b = scratch("sharp_b");
  const auto ra = call({"sharp", "--lambda", "1.5", "--mu", "200", "--out", a.string()});
  const auto rb = call({"sharp", "--lambda", "1.5", "--mu", "200", "--out", b.string()});
  REQUIRE(ra.code == 0);
  CHECK(ra.out.find("n 4\n") != std::string::npos);
  CHECK(ra.out.find("energy 2.02932779988") != std::string::npos);
  const std::vector<std::string> names{
      "sharp_lambda1.5_mu200.csv",          "sharp_lambda1.5_mu200_cracks.csv",
      "sharp_lambda1.5_mu200.json",         "sharp_lambda1.5_mu200_A.field",
      "sharp_lambda1.5_mu200_B.field",      "sharp_lambda1.5_mu200_A_deformation.csv",
      "sharp_lambda1.5_mu200_B_deformation.json"};
  for (const auto& n : names) {
    INFO(n);
    REQUIRE(fs::exists(a / n));
    CHECK(slurp(a / n) == slurp(b / n));
  }
  const auto j = json::parse(slurp(a / "sharp_lambda1.5_mu200.json"));
  CHECK(j["minimizers"][0]["n"] == 4);

  const auto rec = call({"reconstruct", "--input", (a / "sharp_lambda1.5_mu200_B.field").string(),
                         "--out", a.string(), "--format", "json"});
  CHECK(rec.code == 0);
  CHECK(rec.out.find("jumps 3\n") != std::string::npos);
  const auto g = json::parse(slurp(a / "sharp_lambda1.5_mu200_B_deformation.json"));
  CHECK(g["jumps"].size() == 3);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("minimize output is deterministic and reconstructable") {
  const auto a = scratch("min_a");
  const auto b = scratch("min_b");
  const std::vector<std::string> args{"minimize", "--functional", "E", "--lambda", "1.4",
                                      "--eps", "0.05", "--grid", "300"};
  auto with = [&](const fs::path& d) {
    auto v = args;
    v.push_back("--out");
    v.push_back(d.string());
    return call(v);
  };
  const auto ra = with(a);
  const auto rb = with(b);
  REQUIRE(ra.code == 0);
  CHECK(ra.out.substr(0, ra.out.find("wrote")) == rb.out.substr(0, rb.out.find("wrote")));
  const std::string stem = "minimize_E_lambda1.4_mu0_eps0.05";
  for (const char* ext : {".csv", ".json", ".field"}) {
    CHECK(slurp(a / (stem + ext)) == slurp(b / (stem + ext)));
  }
  CHECK(json::parse(slurp(a / (stem + ".json")))["transitions"] == 1);
  // an H file is not an inverse deformation
  CHECK(call({"reconstruct", "--input", (a / (stem + ".field")).string(), "--out", a.string()}).code == 2);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("scan finds four cracks at the worked example") {
  const auto d = scratch("scan");
  const auto r = call({"scan", "--mu", "200", "--out", d.string(), "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("points 99\n") != std::string::npos);
  const std::string csv = slurp(d / "scan_mu200.csv");
  CHECK(csv.find("\r\n1.5,200,4,") != std::string::npos);
  CHECK_FALSE(fs::exists(d / "scan_mu200.json"));
  fs::remove_all(d);
}

TEST_CASE("config files feed options and reject unknown keys") {
  const auto d = scratch("config");
  fs::create_directories(d);
  {
    std::ofstream cfg(d / "good.ini");
    cfg << "[scan]\nmu=200\nlambda-min=1.4\nlambda-max=1.6\nstep=0.05\n";
  }
  const auto r = call({"scan", "--config", (d / "good.ini").string(), "--out", d.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("points 3\n") != std::string::npos);
  const auto over = call({"scan", "--config", (d / "good.ini").string(), "--step", "0.1", "--out",
                          d.string()});
  CHECK(over.out.find("points 1\n") != std::string::npos);
  {
    std::ofstream cfg(d / "bad.ini");
    cfg << "[scan]\nbogus=1\n";
  }
  CHECK(call({"scan", "--config", (d / "bad.ini").string(), "--out", d.string()}).code == 2);
  fs::remove_all(d);
}

TEST_CASE("sweep writes its tables") {
  const auto d = scratch("sweep");
  const auto r = call({"sweep", "--functional", "I", "--lambda", "1.4", "--eps", "0.08", "0.04",
                       "--grid", "400", "--out", d.string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(d / "sweep_I_lambda1.4_mu0.csv"));
  const auto j = json::parse(slurp(d / "sweep_I_lambda1.4_mu0.json"));
  CHECK(j["rows"].size() == 2);
  CHECK(j["rows"][1]["transition_count"] == 1);
  fs::remove_all(d);
}
