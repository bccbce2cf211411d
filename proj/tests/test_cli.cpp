#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "inarma/pmf.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

// Runs the CLI with stderr folded into the captured output.
Run cli(const std::string& args) {
  const std::string cmd = std::string(INARMA_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("inarma_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("simulate writes the requested number of counts deterministically") {
  TempDir tmp;
  const std::string flags = "simulate --model inarma11 --tau 0.31 --phi 0.67 --kappa 0.80 --length 370 --seed 1";
  REQUIRE(cli(flags + " --out " + tmp.file("a.csv")).code == 0);
  REQUIRE(cli(flags + " --out " + tmp.file("b.csv")).code == 0);
  const std::string a = slurp(tmp.file("a.csv"));
  CHECK(a == slurp(tmp.file("b.csv")));

  std::istringstream lines(a);
  std::string line;
  int rows = 0;
  bool all_counts = true;
  while (std::getline(lines, line)) {
    ++rows;
    all_counts = all_counts && !line.empty() && line.find_first_not_of("0123456789") == std::string::npos;
  }
  CHECK(rows == 370);
  CHECK(all_counts);

  const Run latent = cli("simulate --model inar1 --nu 1 --alpha 0.5 --length 5 --latent");
  CHECK(latent.code == 0);
  CHECK(latent.out.find(',') == std::string::npos);  // INAR(1) has no latent state
  const Run with_latent = cli("simulate --model inarma --tau 1 --phi 0.5 --kappa 0.5 --length 5 --latent --representation thinned");
  CHECK(with_latent.code == 0);
  CHECK(std::count(with_latent.out.begin(), with_latent.out.end(), ',') == 5);
}

TEST_CASE("invalid parameters and usage errors exit with code 2") {
  const Run bad_phi = cli("simulate --model inarma11 --tau 0.31 --phi 1.5 --kappa 0.8 --length 10");
  CHECK(bad_phi.code == 2);
  CHECK(bad_phi.out.find("phi") != std::string::npos);

  CHECK(cli("simulate --model inarma11 --tau 0.31 --phi 0.5 --length 10").code == 2);
  CHECK(cli("simulate --model arma --length 10").code == 2);
  CHECK(cli("").code == 2);
  CHECK(cli("fit --model inar1").code == 2);
}

TEST_CASE("fit, forecast and compare on a small data file") {
  TempDir tmp;
  REQUIRE(cli("simulate --model inarma11 --tau 0.31 --phi 0.67 --kappa 0.80 --length 80 --seed 3 --out " + tmp.file("x.csv")).code == 0);

  SUBCASE("fit --json") {
    const Run r = cli("fit --data " + tmp.file("x.csv") + " --model inar1 --json");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["model_id"] == "inar1");
    CHECK(j["k"] == 2);
    CHECK(std::fabs(j["aic"].get<double>() - (4 - 2 * j["loglik"].get<double>())) < 1e-9);
    CHECK(nlohmann::json::parse(j.dump()) == j);
  }
  SUBCASE("forecast sums to one and the JSON mirrors the CSV") {
    const std::string base = "forecast --data " + tmp.file("x.csv") + " --model inarma11 --origin 60";
    const Run csv = cli(base);
    const Run js = cli(base + " --json");
    REQUIRE(csv.code == 0);
    REQUIRE(js.code == 0);
    const auto j = nlohmann::json::parse(js.out);
    std::istringstream lines(csv.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "x,probability");
    double total = 0;
    std::size_t i = 0;
    while (std::getline(lines, line)) {
      const double p = std::stod(line.substr(line.find(',') + 1));
      CHECK(p == j["pmf"][i]["probability"].get<double>());
      total += p;
      ++i;
    }
    CHECK(std::fabs(total - 1) < 1e-9);
    CHECK(j["origin_index"] == 60);
    CHECK(cli(base.substr(0, base.find("--origin")) + "--origin 81").code == 2);
    CHECK(cli(base + " --horizon 2").code == 2);
  }
  SUBCASE("compare sorts by AIC") {
    const Run r = cli("compare --data " + tmp.file("x.csv") + " --models inar1,inarma11,inarch1 --rolling-start 75 --json");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["rows"].size() == 3);
    CHECK(j["rolling_start"] == 75);
    for (std::size_t i = 1; i < 3; ++i) {
      CHECK(j["rows"][i - 1]["fit"]["aic"].get<double>() <= j["rows"][i]["fit"]["aic"].get<double>());
    }
    const Run table = cli("compare --data " + tmp.file("x.csv") + " --models inar1,inarch1 --rolling-start 75");
    CHECK(table.code == 0);
    CHECK(table.out.find("Poisson INAR(1)") != std::string::npos);
    CHECK(cli("compare --data " + tmp.file("x.csv") + " --models inar1").code == 2);
  }
}

TEST_CASE("forecast after a zero under INAR(1) is Poisson(nu)") {
  TempDir tmp;
  {
    std::ofstream f(tmp.file("z.csv"));
    f << "1\n3\n2\n0\n1\n2\n4\n1\n0\n";
  }
  const Run r = cli("forecast --data " + tmp.file("z.csv") + " --model inar1 --json");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const double nu = j["fit"]["params_natural"]["nu"].get<double>();
  for (const auto& row : j["pmf"]) {
    CHECK(std::fabs(row["probability"].get<double>() - std::exp(inarma::poisson_logpmf(nu, row["x"].get<int>()))) < 1e-12);
  }
}

TEST_CASE("data errors exit with code 1 and name the row") {
  TempDir tmp;
  {
    std::ofstream f(tmp.file("bad.csv"));
    f << "1\n2\noops\n";
    std::ofstream g(tmp.file("short.csv"));
    g << "1\n2\n";
  }
  const Run bad = cli("fit --data " + tmp.file("bad.csv") + " --model inar1");
  CHECK(bad.code == 1);
  CHECK(bad.out.find("row 3") != std::string::npos);
  CHECK(cli("fit --data " + tmp.file("short.csv") + " --model inar1").code == 1);
  CHECK(cli("fit --data " + tmp.file("missing.csv") + " --model inar1").code == 1);
}
