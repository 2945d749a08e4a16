#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

std::string binary() {
  const char* bin = std::getenv("G0KIT_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "G0KIT_BIN must point at the g0kit binary");
  return bin;
}

RunResult run(const std::string& args) {
  const std::string cmd = binary() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    out.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  return RunResult{WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), {});
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("g0kit_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("sample: deterministic, reproducible CSV") {
  TempDir tmp;
  const std::string a = tmp.file("a.csv");
  const std::string b = tmp.file("b.csv");
  CHECK(run("sample --alpha -3 --mean 1 --looks 1 --n 1000 --seed 7 --out " + a)
            .exit_code == 0);
  CHECK(run("sample --alpha -3 --mean 1 --looks 1 --n 1000 --seed 7 --out " + b)
            .exit_code == 0);
  const std::string ca = slurp(a);
  CHECK(ca == slurp(b));
  // header + 1000 observations
  CHECK(std::count(ca.begin(), ca.end(), '\n') == 1001);
}

TEST_CASE("sample: --mean is sugar for the matching --gamma") {
  TempDir tmp;
  const std::string a = tmp.file("mean.csv");
  const std::string b = tmp.file("gamma.csv");
  CHECK(run("sample --alpha -1.5 --mean 1 --looks 1 --n 50 --seed 3 --out " + a)
            .exit_code == 0);
  CHECK(run("sample --alpha -1.5 --gamma 0.5 --looks 1 --n 50 --seed 3 --out " + b)
            .exit_code == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("sample: usage errors exit with 2") {
  TempDir tmp;
  CHECK(run("sample --alpha -0.5 --mean 1 --looks 1 --n 10 --seed 1 --out " +
            tmp.file("x.csv"))
            .exit_code == 2);
  CHECK(run("sample --alpha -3 --looks 1 --n 10 --seed 1 --out " + tmp.file("y.csv"))
            .exit_code == 2);
  CHECK(run("sample --alpha 0.5 --gamma 1 --looks 1 --n 10 --seed 1 --out " +
            tmp.file("z.csv"))
            .exit_code == 2);
}

TEST_CASE("fit: recovers parameters and reports goodness of fit") {
  TempDir tmp;
  const std::string data = tmp.file("big.csv");
  REQUIRE(run("sample --alpha -3 --gamma 2 --looks 1 --n 100000 --seed 11 --out " +
              data)
              .exit_code == 0);
  const RunResult r = run("fit --in " + data);
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("converged").get<bool>());
  CHECK(std::abs(doc.at("alpha_hat").get<double>() + 3.0) < 0.1);
  CHECK(std::abs(doc.at("gamma_hat").get<double>() - 2.0) < 0.15);
  CHECK(doc.at("n").get<std::size_t>() == 100000);
  CHECK(doc.at("looks").get<double>() == 1.0);  // picked up from metadata
}

TEST_CASE("fit: csv format emits one header and one row") {
  TempDir tmp;
  const std::string data = tmp.file("small.csv");
  REQUIRE(run("sample --alpha -3 --gamma 2 --looks 1 --n 500 --seed 2 --out " + data)
              .exit_code == 0);
  const RunResult r = run("fit --in " + data + " --format csv");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("alpha_hat,", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 2);
}

TEST_CASE("fit: empty or missing input exits with 2") {
  TempDir tmp;
  const std::string empty = tmp.file("empty.csv");
  std::ofstream(empty) << "";
  CHECK(run("fit --in " + empty + " --looks 1").exit_code == 2);
  CHECK(run("fit --in " + tmp.file("nope.csv") + " --looks 1").exit_code == 2);
}

TEST_CASE("fit: statistical non-convergence is data, not an error") {
  TempDir tmp;
  const std::string flat = tmp.file("flat.csv");
  std::ofstream(flat) << "2.0\n2.0\n2.0\n2.0\n";
  const RunResult r = run("fit --in " + flat + " --looks 1");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK_FALSE(doc.at("converged").get<bool>());
  CHECK(doc.contains("note"));
}

TEST_CASE("contrast: a file against itself never rejects") {
  TempDir tmp;
  const std::string data = tmp.file("self.csv");
  REQUIRE(run("sample --alpha -3 --gamma 2 --looks 8 --n 121 --seed 5 --out " + data)
              .exit_code == 0);
  const RunResult r = run("contrast --a " + data + " --b " + data + " --level 0.01");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  for (const json& entry : doc.at("tests")) {
    REQUIRE_FALSE(entry.contains("error"));
    CHECK_FALSE(entry.at("reject").get<bool>());
    if (entry.at("test") == "ks") {
      CHECK(entry.at("p_value").get<double>() == 1.0);
    } else {
      CHECK(entry.at("statistic").get<double>() < 1e-6);
    }
  }
}

TEST_CASE("contrast: well separated laws reject on every test") {
  TempDir tmp;
  const std::string a = tmp.file("a121.csv");
  const std::string b = tmp.file("b121.csv");
  REQUIRE(run("sample --alpha -1.5 --gamma 0.5 --looks 8 --n 121 --seed 21 --out " + a)
              .exit_code == 0);
  REQUIRE(run("sample --alpha -3 --gamma 4 --looks 8 --n 121 --seed 22 --out " + b)
              .exit_code == 0);
  const RunResult r = run("contrast --a " + a + " --b " + b + " --level 0.01");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("tests").size() == 5);
  for (const json& entry : doc.at("tests")) {
    REQUIRE_FALSE(entry.contains("error"));
    CHECK(entry.at("reject").get<bool>());
  }
}

TEST_CASE("contrast: mismatched looks metadata exits with 2") {
  TempDir tmp;
  const std::string a = tmp.file("l1.csv");
  const std::string b = tmp.file("l8.csv");
  REQUIRE(run("sample --alpha -3 --gamma 2 --looks 1 --n 49 --seed 1 --out " + a)
              .exit_code == 0);
  REQUIRE(run("sample --alpha -3 --gamma 2 --looks 8 --n 49 --seed 1 --out " + b)
              .exit_code == 0);
  CHECK(run("contrast --a " + a + " --b " + b).exit_code == 2);
}

TEST_CASE("mc: grid generation and a small size campaign") {
  TempDir tmp;
  const std::string grid = tmp.file("grid.json");
  REQUIRE(run("mc --mode grid --kind size --out " + grid).exit_code == 0);
  const json doc = json::parse(slurp(grid));
  CHECK(doc.at("scenarios").size() == 162);

  // single-scenario config
  const std::string cfg = tmp.file("one.json");
  std::ofstream(cfg) << R"({"scenarios":[{"alpha1":-3,"alpha2":-3,"gamma1":2,)"
                        R"("gamma2":2,"looks":1,"sample_size":49,"epsilon":0,)"
                        R"("replications":40,"levels":[0.01,0.1]}]})";
  const std::string out = tmp.file("size.csv");
  REQUIRE(run("mc --mode size --config " + cfg + " --seed 9 --out " + out)
              .exit_code == 0);
  const std::string csv = slurp(out);
  // header + 5 tests x 2 levels
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
  CHECK(csv.rfind("scenario_id,", 0) == 0);
  CHECK(fs::exists(tmp.file("size.json")));
}

TEST_CASE("mc: byte-identical output across worker counts") {
  TempDir tmp;
  const std::string cfg = tmp.file("cfg.json");
  std::ofstream(cfg) << R"({"scenarios":[{"alpha1":-3,"alpha2":-3,"gamma1":2,)"
                        R"("gamma2":2,"looks":1,"sample_size":49,"epsilon":0,)"
                        R"("replications":30,"levels":[0.01]}]})";
  std::string bytes[3];
  int i = 0;
  for (int workers : {1, 2, 5}) {
    const std::string out = tmp.file("w" + std::to_string(workers) + ".csv");
    REQUIRE(run("mc --mode size --config " + cfg + " --seed 4 --workers " +
                std::to_string(workers) + " --out " + out)
                .exit_code == 0);
    bytes[i++] = slurp(out);
  }
  CHECK(bytes[0] == bytes[1]);
  CHECK(bytes[0] == bytes[2]);
}

TEST_CASE("mc: malformed config exits with 2 and a diagnostic") {
  TempDir tmp;
  const std::string cfg = tmp.file("bad.json");
  std::ofstream(cfg) << R"({"scenarios":[{"alpha1":-3}]})";
  CHECK(run("mc --mode size --config " + cfg + " --seed 1 --out " +
            tmp.file("o.csv"))
            .exit_code == 2);
  const std::string broken = tmp.file("broken.json");
  std::ofstream(broken) << "{not json";
  CHECK(run("mc --mode size --config " + broken + " --seed 1 --out " +
            tmp.file("o2.csv"))
            .exit_code == 2);
}

TEST_CASE("gof: reports the SSE pair and emits a plot-ready histogram") {
  TempDir tmp;
  const std::string data = tmp.file("urban.csv");
  REQUIRE(run("sample --alpha -1.37 --gamma 0.196 --looks 4 --n 10000 --seed 31 "
              "--out " + data)
              .exit_code == 0);
  const std::string hist = tmp.file("hist.csv");
  const RunResult r = run("gof --in " + data + " --bins 1024 --hist-out " + hist);
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("sse_g0").get<double>() < doc.at("sse_gamma").get<double>());
  const std::string csv = slurp(hist);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1025);
  CHECK(csv.rfind("bin_left,", 0) == 0);

  // minimal bin count works
  CHECK(run("gof --in " + data + " --bins 2").exit_code == 0);
}
