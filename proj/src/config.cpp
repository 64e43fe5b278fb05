#include "kgz/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "kgz/errors.hpp"

namespace kgz {

namespace {

struct Entry {
  std::string value;
  int line;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// thrown by value converters, turned into a located ConfigError
struct BadValue {
  std::string what;
};

double to_double(const std::string& v) {
  double out = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw BadValue{"expected a number, got '" + v + "'"};
  return out;
}

long long to_int(const std::string& v) {
  long long out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw BadValue{"expected an integer, got '" + v + "'"};
  return out;
}

}  // namespace

ThetaOptions ExperimentConfig::theta_options() const {
  ThetaOptions o;
  o.p = p;
  o.ds = ds;
  o.log_step = log_step;
  o.gl_nodes = gl_nodes;
  o.evaluator = evaluator;
  o.normalization = normalization;
  return o;
}

EvolveParams ExperimentConfig::evolve_params() const {
  EvolveParams e;
  e.dt_max = dt;
  e.t_end = t_end;
  e.snapshot_every = snapshot_every;
  e.data_radius = data_radius(data);
  return e;
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  auto fail = [&](int at, const std::string& msg) -> ConfigError {
    return ConfigError(origin + ":" + std::to_string(at) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    if (const auto h = s.find('#'); h != std::string::npos) s.erase(h);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw fail(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) throw fail(line, "empty section name");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw fail(line, "expected 'key = value'");
    if (section.empty()) throw fail(line, "key outside of any section");
    const std::string key = section + "." + trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (value.empty()) throw fail(line, "missing value for '" + key + "'");
    if (auto it = entries.find(key); it != entries.end())
      throw fail(line, "duplicate key '" + key + "' (first on line " + std::to_string(it->second.line) + ")");
    entries[key] = {value, line};
  }

  ExperimentConfig c;
  c.origin = origin;
  bool c_e_set = false, d_e_set = false;
  using Setter = std::function<void(const std::string&)>;
  auto num = [](double& dst) -> Setter { return [&dst](const std::string& v) { dst = to_double(v); }; };
  auto whole = [](int& dst) -> Setter {
    return [&dst](const std::string& v) { dst = static_cast<int>(to_int(v)); };
  };
  const std::map<std::string, Setter> setters = {
      {"experiment.name", [&](const std::string& v) { c.experiment = v; }},
      {"experiment.output", [&](const std::string& v) { c.output = v; }},
      {"grid.L", num(c.L)},
      {"grid.N", whole(c.N)},
      {"grid.dealias", num(c.dealias)},
      {"data.epsilon", num(c.data.epsilon)},
      {"data.radius_n", num(c.data.radius_n)},
      {"data.radius_e", num(c.data.radius_e)},
      {"data.moment", num(c.data.moment)},
      {"data.seed",
       [&](const std::string& v) {
         const long long s = to_int(v);
         if (s < 0) throw BadValue{"seed must be nonnegative"};
         c.data.seed = static_cast<std::uint64_t>(s);
       }},
      {"time.t0", num(c.data.t0)},
      {"time.T", num(c.t_end)},
      {"time.dt", num(c.dt)},
      {"time.snapshot_every", num(c.snapshot_every)},
      {"time.snapshot_stride", whole(c.snapshot_stride)},
      {"analysis.p", num(c.p)},
      {"analysis.p1", num(c.p1)},
      {"analysis.delta", num(c.delta)},
      {"analysis.C_E", [&](const std::string& v) { c.c_e = to_double(v), c_e_set = true; }},
      {"analysis.D_E", [&](const std::string& v) { c.d_e = to_double(v), d_e_set = true; }},
      {"analysis.k_lo", whole(c.k_lo)},
      {"analysis.k_hi", whole(c.k_hi)},
      {"analysis.xi_count", whole(c.xi_count)},
      {"analysis.xi_max", num(c.xi_max)},
      {"analysis.xi_radius", num(c.xi_radius)},
      {"analysis.ds", num(c.ds)},
      {"analysis.log_step", num(c.log_step)},
      {"analysis.gl_nodes", whole(c.gl_nodes)},
      {"analysis.theta_evaluator",
       [&](const std::string& v) {
         if (v == "lattice") c.evaluator = ThetaEvaluator::Lattice;
         else if (v == "continuum") c.evaluator = ThetaEvaluator::Continuum;
         else throw BadValue{"theta_evaluator must be 'lattice' or 'continuum'"};
       }},
      {"analysis.theta_normalization",
       [&](const std::string& v) {
         if (v == "printed") c.normalization = ThetaNormalization::Printed;
         else if (v == "consistent") c.normalization = ThetaNormalization::Consistent;
         else throw BadValue{"theta_normalization must be 'printed' or 'consistent'"};
       }},
      {"analysis.m_lo", whole(c.m_lo)},
      {"analysis.m_hi", whole(c.m_hi)},
      {"analysis.fit_from", num(c.fit_from)},
      {"analysis.fit_lo", num(c.fit_lo)},
      {"analysis.fit_hi", num(c.fit_hi)},
      {"analysis.ratio_threshold", num(c.ratio_threshold)},
  };

  for (const auto& [key, e] : entries) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw fail(e.line, "unknown key '" + key + "'");
    try {
      it->second(e.value);
    } catch (const BadValue& b) {
      throw fail(e.line, key + ": " + b.what);
    }
  }
  if (!c_e_set) c.c_e = c.delta;
  if (!d_e_set) c.d_e = -c.delta;

  auto at = [&](const std::string& key) {
    const auto it = entries.find(key);
    return it == entries.end() ? 0 : it->second.line;
  };
  auto require = [&](bool ok, const std::string& key, const std::string& msg) {
    if (!ok) throw fail(at(key), key + ": " + msg);
  };
  require(!c.experiment.empty(), "experiment.name", "missing experiment name");
  require(c.L > 0, "grid.L", "must be positive");
  require(c.N >= 16 && c.N % 2 == 0, "grid.N", "must be even and at least 16");
  require(c.dealias > 0 && c.dealias <= 1, "grid.dealias", "must lie in (0, 1]");
  require(c.data.epsilon >= 0, "data.epsilon", "must be nonnegative");
  require(c.data.radius_n > 0, "data.radius_n", "must be positive");
  require(c.data.radius_e > 0, "data.radius_e", "must be positive");
  require(c.data.t0 == 1.0, "time.t0", "the Cauchy time is fixed at 1");
  require(c.t_end > c.data.t0, "time.T", "must exceed t0 = 1");
  require(c.dt > 0, "time.dt", "must be positive");
  require(c.snapshot_every > 0, "time.snapshot_every", "must be positive");
  require(c.snapshot_stride >= 0, "time.snapshot_stride", "must be nonnegative");
  require(c.p > 0 && c.p < 1, "analysis.p", "must lie in (0, 1)");
  require(c.k_lo <= c.k_hi, "analysis.k_lo", "must not exceed k_hi");
  require(c.xi_count >= 0, "analysis.xi_count", "must be nonnegative");
  require(c.ds > 0, "analysis.ds", "must be positive");
  require(c.log_step > 0, "analysis.log_step", "must be positive");
  require(c.gl_nodes >= 4 && c.gl_nodes % 4 == 0, "analysis.gl_nodes", "must be a positive multiple of 4");
  require(c.m_lo <= c.m_hi, "analysis.m_lo", "must not exceed m_hi");
  require(c.fit_lo < c.fit_hi, "analysis.fit_lo", "must be below fit_hi");
  require(c.ratio_threshold > 0, "analysis.ratio_threshold", "must be positive");
  // the box rule binds every experiment that integrates the system
  if (c.experiment != "theta-growth") {
    const double need = data_radius(c.data) + c.t_end + 2.0;
    require(c.L >= need, entries.count("grid.L") ? "grid.L" : "time.T",
            "box too small: L = " + std::to_string(c.L) + " < R0 + T + 2 = " + std::to_string(need));
    require(c.dt <= 0.5 * 2.0 * c.L / c.N * (1 + 1e-12), "time.dt", "exceeds 0.5 dx");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError(path + ": cannot open");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace kgz
