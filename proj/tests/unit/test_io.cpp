#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "kgz/config.hpp"
#include "kgz/errors.hpp"
#include "kgz/experiments.hpp"
#include "kgz/io.hpp"

using namespace kgz;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("kgz_test_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// message of the ConfigError thrown by parse_config
std::string parse_error(const std::string& text) {
  try {
    parse_config(text, "cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kSmoke = R"(# zero data
[experiment]
name = smoke
[grid]
L = 16
N = 32
[data]
epsilon = 0
[time]
T = 4
dt = 0.25
snapshot_every = 1
snapshot_stride = 2
)";

}  // namespace

TEST_CASE("config parsing and defaults") {
  const ExperimentConfig c = parse_config(kSmoke, "cfg");
  CHECK(c.experiment == "smoke");
  CHECK(c.L == 16.0);
  CHECK(c.N == 32);
  CHECK(c.data.epsilon == 0.0);
  CHECK(c.data.t0 == 1.0);
  CHECK(c.p == 0.75);
  CHECK(c.snapshot_stride == 2);
  CHECK(c.c_e == c.delta);
  CHECK(c.d_e == -c.delta);

  const auto d = parse_config("[experiment]\nname = decay\n[analysis]\ndelta = 0.2\nD_E = 0.05\n", "cfg");
  CHECK(d.c_e == 0.2);
  CHECK(d.d_e == 0.05);
  const auto t = parse_config("[experiment]\nname=theta-growth\n[analysis]\ntheta_evaluator = continuum\n"
                              "theta_normalization = printed\n[time]\nT = 4096\n",
                              "cfg");
  CHECK(t.evaluator == ThetaEvaluator::Continuum);
  CHECK(t.normalization == ThetaNormalization::Printed);
}

TEST_CASE("config errors carry the line") {
  CHECK(parse_error("[experiment]\nname = smoke\n[grid]\nLL = 3\n").find("cfg:4:") == 0);
  CHECK(parse_error("[experiment]\nname = smoke\n[grid]\nN = 3x\n").find("cfg:4: grid.N") == 0);
  CHECK(parse_error("[experiment]\nname = smoke\n[grid]\nL = 40\nL = 41\n").find("cfg:5: duplicate") == 0);
  CHECK(parse_error("[experiment]\nname = smoke\n[time]\nt0 = 0\n").find("cfg:4: time.t0") == 0);
  CHECK(parse_error("[experiment\n").find("cfg:1:") == 0);
  CHECK(parse_error("name = x\n").find("cfg:1:") == 0);
  CHECK(parse_error("[grid]\nL = 40\n").find("experiment.name") != std::string::npos);
  // box rule: L >= 6 sigma + T + 2
  CHECK(parse_error("[experiment]\nname = decay\n[grid]\nL = 40\n[time]\nT = 40\n").find("cfg:4: grid.L: box too small") == 0);
  CHECK(parse_error("[experiment]\nname = decay\n[analysis]\ntheta_evaluator = dense\n").find("cfg:4:") == 0);
  CHECK_THROWS_AS(load_config("/nonexistent/kgz.ini"), ConfigError);
}

TEST_CASE("CSV rows carry 17 significant digits and round-trip") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  for (double v : {-2.5e-300, 1.0 / 3.0, 6.02214076e23, -0.0, 5e-324, 123456789.125}) {
    char ref[64];
    std::snprintf(ref, sizeof ref, "%.17g", v);
    CHECK(format_double(v) == ref);
  }
  const fs::path dir = scratch("csv");
  {
    CsvWriter w(dir / "a.csv", {"t", "x"});
    w.row({1.0 / 3.0, std::exp(1.0)});
    CHECK_THROWS_AS(w.row({1.0}), ConfigError);
  }
  const std::string text = slurp(dir / "a.csv");
  CHECK(text.find("t,x\n") == 0);
  CHECK(text.find('\r') == std::string::npos);
  const auto comma = text.find(',', 4);
  CHECK(std::stod(text.substr(4, comma - 4)) == 1.0 / 3.0);
  CHECK(std::stod(text.substr(comma + 1)) == std::exp(1.0));
}

TEST_CASE("binary snapshots round-trip bit-exactly") {
  SpectralGrid g(10.0, 16);
  FieldState s(g, 2.75);
  double v = 0.1;
  for (RealField* f : {&s.n, &s.nt, &s.E[0], &s.E[1], &s.Et[0], &s.Et[1]})
    for (double& x : f->values) x = (v = std::sin(v * 7.3 + 1.0));
  const fs::path dir = scratch("snap");
  write_snapshot(dir / "s.kgz", s);
  const std::string raw = slurp(dir / "s.kgz");
  CHECK(raw.size() == 28 + 6 * 256 * 8);
  CHECK(raw.substr(0, 4) == "KGZ1");
  CHECK(static_cast<unsigned char>(raw[4]) == 1);   // version, little endian
  CHECK(static_cast<unsigned char>(raw[8]) == 16);  // N
  const FieldState r = read_snapshot(dir / "s.kgz");
  CHECK(r.t == 2.75);
  CHECK(r.grid() == g);
  CHECK(r.n.values == s.n.values);
  CHECK(r.Et[1].values == s.Et[1].values);

  std::ofstream(dir / "bad.kgz", std::ios::binary) << "KGZ2xxxxxxxxxxxxxxxxxxxxxxxxxxxx";
  CHECK_THROWS_AS(read_snapshot(dir / "bad.kgz"), ConfigError);
  std::ofstream(dir / "short.kgz", std::ios::binary) << raw.substr(0, 100);
  CHECK_THROWS_AS(read_snapshot(dir / "short.kgz"), ConfigError);
}

TEST_CASE("SHA-256 of known inputs") {
  const fs::path dir = scratch("sha");
  std::ofstream(dir / "abc", std::ios::binary) << "abc";
  std::ofstream(dir / "empty", std::ios::binary);
  CHECK(sha256_file(dir / "abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_file(dir / "empty") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("smoke run: zero series, complete manifest, byte-identical rerun") {
  const ExperimentConfig c = parse_config(kSmoke, "cfg");
  const fs::path a = scratch("smoke_a"), b = scratch("smoke_b");
  const ExperimentReport r = run_experiment(c, a);
  run_experiment(c, b);
  CHECK(r.metric("max_abs") == 0.0);
  CHECK_THROWS_AS(r.metric("nope"), RangeError);

  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  std::size_t listed = 0;
  for (const auto& f : manifest["files"]) {
    ++listed;
    CHECK(sha256_file(a / f["path"].get<std::string>()) == f["sha256"].get<std::string>());
  }
  std::size_t present = 0;
  for (const auto& e : fs::recursive_directory_iterator(a))
    if (e.is_regular_file() && e.path().filename() != "manifest.json") ++present;
  CHECK(listed == present);
  CHECK(fs::exists(a / "snapshots" / "snap_000000.kgz"));
  CHECK(fs::exists(a / "snapshots" / "snap_000002.kgz"));
  CHECK(!fs::exists(a / "snapshots" / "snap_000001.kgz"));
  CHECK(!fs::exists(a / "snapshots" / "snap_000003.kgz"));

  CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));
  const std::string series = slurp(a / "series.csv");
  CHECK(series == slurp(b / "series.csv"));
  std::istringstream lines(series);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "t,max_abs,norm_n,norm_E,norm_Et");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(line.substr(line.find(',')) == ",0,0,0,0");
  }
  CHECK(rows == 4);
}

TEST_CASE("divergence leaves the last good state") {
  ExperimentConfig c = parse_config(kSmoke, "cfg");
  c.data.epsilon = 400.0;
  c.t_end = 8.0;
  c.L = 24.0;
  c.snapshot_stride = 0;
  const fs::path dir = scratch("diverge");
  CHECK_THROWS_AS(run_experiment(c, dir), DivergenceError);
  REQUIRE(fs::exists(dir / "last_good.kgz"));
  CHECK(read_snapshot(dir / "last_good.kgz").finite());
  CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("unknown experiment and audit suite") {
  ExperimentConfig c = parse_config(kSmoke, "cfg");
  c.experiment = "nope";
  CHECK_THROWS_AS(run_experiment(c, scratch("nope")), ConfigError);
  CHECK_THROWS_AS(run_audit("nope"), ConfigError);
}
