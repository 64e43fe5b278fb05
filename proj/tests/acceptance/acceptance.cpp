// Acceptance run: one PASS/FAIL line per criterion.
//   kgz_acceptance <configs dir> <output dir> [criterion ...]

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "kgz/experiments.hpp"
#include "kgz/io.hpp"

namespace fs = std::filesystem;
using kgz::ExperimentReport;

namespace {

fs::path configs, outdir;

struct Result {
  bool pass = true;
  std::string detail;

  // records one condition
  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [fails]");
  }
};

std::string num(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.4g", v);
  return b;
}

double clock_s() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

ExperimentReport run(const std::string& config, const std::string& sub) {
  return kgz::run_experiment(kgz::load_config((configs / config).string()), outdir / sub);
}

// identity-audits serve criteria 2 and 3; decay serves 4, 5 and 9
std::map<std::string, std::pair<ExperimentReport, double>> cache;
const ExperimentReport& cached(const std::string& config, const std::string& sub, double* seconds = nullptr) {
  auto it = cache.find(config);
  if (it == cache.end()) {
    const double t0 = clock_s();
    ExperimentReport r = run(config, sub);
    it = cache.emplace(config, std::make_pair(std::move(r), clock_s() - t0)).first;
  }
  if (seconds) *seconds = it->second.second;
  return it->second.first;
}

void runtime(Result& r, double seconds, double limit) {
  r.check(seconds < limit, "runtime " + num(seconds) + " s < " + num(limit) + " s");
}

Result audit_lines(const std::string& suite, const std::string& prefix = "") {
  Result r;
  for (const auto& l : kgz::run_audit(suite))
    r.check(l.pass(), prefix + l.name + " " + num(l.value) + (l.upper ? " <= " : " >= ") + num(l.bound));
  return r;
}

Result c1() {
  const double t0 = clock_s();
  Result r = audit_lines("transform");
  runtime(r, clock_s() - t0, 10.0);
  return r;
}

Result c2() {
  Result r;
  double sec = 0.0;
  const auto& m = cached("identity.ini", "identity", &sec);
  r.check(m.metric("identity_max") < 1e-6, "max identity error over snapshots " + num(m.metric("identity_max")) + " < 1e-6");
  const double ratio = m.metric("identity_ratio");
  r.check(ratio >= 12.0 && ratio <= 20.0, "halving ds reduces it " + num(ratio) + "x (16 +- 4)");
  runtime(r, sec, 300.0);
  return r;
}

Result c3() {
  Result r;
  double sec = 0.0;
  const auto& m = cached("identity.ini", "identity", &sec);
  r.check(m.metric("decomposition_over_self") < 10.0,
          "residual " + num(m.metric("decomposition_dt")) + " = " + num(m.metric("decomposition_over_self")) +
              "x self-convergence (< 10x)");
  const double ratio = m.metric("decomposition_ratio");
  r.check(ratio >= 3.0 && ratio <= 5.0, "dt/2 reduction " + num(ratio) + "x (4 +- 1)");
  runtime(r, sec, 300.0);
  return r;
}

Result c4() {
  Result r;
  double sec = 0.0;
  const auto& m = cached("reference.ini", "reference", &sec);
  const double up = m.metric("env_E_max_over_median"), dn = m.metric("env_E_median_over_min");
  r.check(up <= 2.0 && dn <= 2.0, "|E|<t+r> within factors " + num(up) + ", " + num(dn) + " of median (<= 2)");
  const double a = m.metric("sup_E_alpha");
  r.check(std::abs(a + 1.0) <= 0.15, "sup|E| rate " + num(a) + " (-1 +- 0.15)");
  const double nu = m.metric("env_n_max_over_median"), nd = m.metric("env_n_median_over_min");
  r.check(nu <= 3.0 && nd <= 3.0, "n envelope within factors " + num(nu) + ", " + num(nd) + " of median (<= 3)");
  runtime(r, sec, 600.0);
  return r;
}

Result c5() {
  Result r;
  const auto& m = cached("reference.ini", "reference");
  r.check(m.metric("h4_dn_variation") < 0.25, "||(n_t, grad n)||_H4 varies " + num(100 * m.metric("h4_dn_variation")) + "%");
  r.check(m.metric("sobolev_E_variation") < 0.25,
          "(||E||_H6^2 + ||E_t||_H5^2)^1/2 varies " + num(100 * m.metric("sobolev_E_variation")) + "% (||E||_H6 alone " +
              num(100 * m.metric("h6_E_variation")) + "%)");
  return r;
}

Result c6() {
  Result r;
  const double t0 = clock_s();
  const auto m = run("cascade.ini", "cascade");
  const double f = m.metric("free_ratio"), k = m.metric("kgz_ratio"), s = m.metric("kgz_dn_sup_over_t4");
  r.check(f >= 0.9 && f <= 1.1, "free b/b* " + num(f) + " in [0.9, 1.1]");
  r.check(k >= 0.8 && k <= 1.2, "KGZ b/b* " + num(k) + " in [0.8, 1.2]");
  r.check(s <= 1.5, "sup ||dn|| / ||dn(4)|| " + num(s) + " <= 1.5");
  runtime(r, clock_s() - t0, 900.0);
  return r;
}

Result c7() {
  Result r;
  const double t0 = clock_s();
  const auto m = run("theta_growth.ini", "theta_growth");
  for (int j : {0, 1, 2}) {
    const double v = m.metric("ratio_" + std::to_string(j));
    r.check(v >= 0.85 && v <= 1.15, "xi #" + std::to_string(j) + " slope/(pi mu) " + num(v));
  }
  runtime(r, clock_s() - t0, 120.0);
  return r;
}

Result c8() {
  Result r;
  const double t0 = clock_s();
  const auto a = run("dichotomy_mu0.ini", "dichotomy_mu0");
  const auto b = run("dichotomy_mu03.ini", "dichotomy_mu03");
  const double th = b.metric("ratio_threshold");
  r.check(a.metric("ratio_threshold") == th, "shared threshold " + num(th));
  r.check(a.metric("plain_ratio_max") <= th, "mu = 0 plain ratios <= " + num(a.metric("plain_ratio_max")));
  r.check(b.metric("plain_ratio_min") >= th, "mu = 0.3 plain ratios >= " + num(b.metric("plain_ratio_min")));
  r.check(b.metric("modified_ratio_max") <= th, "mu = 0.3 modified ratios <= " + num(b.metric("modified_ratio_max")));
  runtime(r, clock_s() - t0, 1200.0);
  return r;
}

Result c9() {
  Result r;
  const auto& m = cached("reference.ini", "reference");
  r.check(m.metric("box_ratio_max") <= 0.75, "Box n~ window sums: worst ratio " + num(m.metric("box_ratio_max")) + " <= 0.75");
  r.check(m.metric("lap_ratio_min") > 0.9, "Delta|E|^2 window sums: smallest ratio " + num(m.metric("lap_ratio_min")) + " > 0.9");
  return r;
}

Result c10() {
  Result r = audit_lines("special");
  const Result p = audit_lines("phase");
  r.check(p.pass, p.detail);
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Result c11() {
  Result r = audit_lines("spectral");
  const auto cfg = kgz::load_config((configs / "smoke.ini").string());
  kgz::run_experiment(cfg, outdir / "rerun_a");
  kgz::run_experiment(cfg, outdir / "rerun_b");
  bool same = slurp(outdir / "rerun_a" / "manifest.json") == slurp(outdir / "rerun_b" / "manifest.json");
  for (const auto& e : fs::recursive_directory_iterator(outdir / "rerun_a"))
    if (e.is_regular_file()) same = same && slurp(e.path()) == slurp(outdir / "rerun_b" / fs::relative(e.path(), outdir / "rerun_a"));
  r.check(same, "smoke rerun byte-identical");
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <configs dir> <output dir> [criterion ...]\n", argv[0]);
    return 2;
  }
  configs = argv[1];
  outdir = argv[2];
  fs::create_directories(outdir);
  std::set<int> only;
  for (int i = 3; i < argc; ++i) only.insert(std::stoi(argv[i]));

  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"transformation identity", c1},  {"residual identity", c2},   {"decomposition n = l + Lap m", c3},
      {"sharp decay", c4},              {"uniform Sobolev bounds", c5}, {"energy cascade", c6},
      {"phase growth", c7},             {"scattering dichotomy", c8}, {"decay upgrade of n~", c9},
      {"special functions", c10},       {"infrastructure", c11},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Result r;
    const double t0 = clock_s();
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r.check(false, std::string("error: ") + e.what());
    }
    std::printf("criterion %2d %s  %s: %s (%.1f s)\n", id, r.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                r.detail.c_str(), clock_s() - t0);
    std::fflush(stdout);
    failed += !r.pass;
  }
  std::printf("%d criteria failed\n", failed);
  return failed ? 1 : 0;
}
