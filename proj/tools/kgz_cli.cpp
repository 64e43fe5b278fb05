// kgz: run experiment configs and property audits.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "kgz/errors.hpp"
#include "kgz/experiments.hpp"
#include "kgz/io.hpp"
#include "kgz/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Klein-Gordon-Zakharov simulator and scattering analysis"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out;
  int threads = 1;
  app.add_option("--out", out, "artifact directory (default: the config's [experiment] output, else ./out)");
  app.add_option("--threads", threads, "worker threads for phase tables and profile loops")->check(CLI::PositiveNumber);

  std::string config;
  auto* run = app.add_subcommand("run", "run one experiment config");
  run->add_option("config", config, "config file")->required();

  std::string suite;
  auto* audit = app.add_subcommand("audit", "identity and property audits");
  audit->add_option("suite", suite, "transform | phase | special | spectral | all")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    kgz::set_threads(threads);
    if (*run) {
      const kgz::ExperimentConfig c = kgz::load_config(config);
      const std::filesystem::path dir = !out.empty() ? out : !c.output.empty() ? c.output : "out";
      const kgz::ExperimentReport r = kgz::run_experiment(c, dir);
      for (const auto& [name, value] : r.metrics) std::printf("%s = %s\n", name.c_str(), kgz::format_double(value).c_str());
      std::printf("artifacts in %s\n", dir.string().c_str());
      return 0;
    }
    const auto lines = kgz::run_audit(suite);
    int failed = 0;
    for (const auto& l : lines) {
      std::printf("%s  %-52s %.6g %s %.3g\n", l.pass() ? "PASS" : "FAIL", l.name.c_str(), l.value, l.upper ? "<=" : ">=",
                  l.bound);
      failed += !l.pass();
    }
    std::printf("%zu checks, %d failed\n", lines.size(), failed);
    return failed ? 1 : 0;
  } catch (const kgz::DivergenceError& e) {
    std::cerr << "error: " << e.what() << " (last good state saved as last_good.kgz)\n";
    return 3;
  } catch (const kgz::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
