#include "kgz/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>

#include "json.hpp"

#include "kgz/diagnostics.hpp"
#include "kgz/errors.hpp"
#include "kgz/io.hpp"
#include "kgz/transform.hpp"

namespace kgz {

namespace fs = std::filesystem;

double ExperimentReport::metric(const std::string& name) const {
  for (const auto& [k, v] : metrics)
    if (k == name) return v;
  throw RangeError("no metric '" + name + "' in " + experiment + " report");
}

bool ExperimentReport::has(const std::string& name) const {
  return std::any_of(metrics.begin(), metrics.end(), [&](const auto& kv) { return kv.first == name; });
}

namespace {

// Keeps the last emitted state and writes binary snapshots on the stride.
class Recorder {
 public:
  Recorder(fs::path out, int stride) : out_(std::move(out)), stride_(stride) {}

  void operator()(const FieldState& s) {
    last_ = s;
    if (stride_ > 0 && count_ % stride_ == 0) {
      fs::create_directories(out_ / "snapshots");
      char name[32];
      std::snprintf(name, sizeof name, "snap_%06ld.kgz", count_);
      write_snapshot(out_ / "snapshots" / name, s);
    }
    ++count_;
  }

  void save_last_good() const {
    if (last_) write_snapshot(out_ / "last_good.kgz", *last_);
  }

 private:
  fs::path out_;
  int stride_;
  long count_ = 0;
  std::optional<FieldState> last_;
};

struct Context {
  const ExperimentConfig& c;
  fs::path out;
  Recorder rec;
  ExperimentReport report;

  void add(const std::string& name, double v) { report.metrics.emplace_back(name, v); }
};

double median(std::vector<double> v) {
  if (v.empty()) throw RangeError("median of an empty series");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// values of y where t lies in [lo, hi]
std::vector<double> restrict(const std::vector<double>& t, const std::vector<double>& y, double lo, double hi) {
  std::vector<double> out;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= lo - 1e-9 && t[i] <= hi + 1e-9) out.push_back(y[i]);
  return out;
}

double variation(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo - 1.0;
}

std::string tag(int m) { return std::to_string(m); }

// ---------------------------------------------------------------- smoke

void smoke(Context& x) {
  const ExperimentConfig& c = x.c;
  const FieldState init = make_initial_data(c.grid(), c.data);
  CsvWriter csv(x.out / "series.csv", {"t", "max_abs", "norm_n", "norm_E", "norm_Et"});
  double worst = 0.0;
  evolve(init, c.evolve_params(), [&](const FieldState& s, const RealField*, const RealField*) {
    x.rec(s);
    const double ne = std::hypot(l2_norm(s.E[0]), l2_norm(s.E[1]));
    const double net = std::hypot(l2_norm(s.Et[0]), l2_norm(s.Et[1]));
    csv.row({s.t, s.max_abs(), l2_norm(s.n), ne, net});
    worst = std::max(worst, s.max_abs());
  });
  x.add("max_abs", worst);
}

// ---------------------------------------------------------------- decay

void decay(Context& x) {
  const ExperimentConfig& c = x.c;
  const FieldState init = make_initial_data(c.grid(), c.data);
  CsvWriter csv(x.out / "decay.csv", {"t", "sup_E", "env_E", "env_n", "h4_dn", "sobolev_E", "h6_E", "h_plus",
                                      "box_tilde_n", "lap_energy_density"});
  std::vector<double> t, sup_e, env_e, env_n, h4, sob, h6, hp, box, lap;
  evolve(init, c.evolve_params(), [&](const FieldState& s, const RealField*, const RealField*) {
    x.rec(s);
    double e6 = 0.0, et5 = 0.0, hh = 0.0;
    for (int k = 0; k < 2; ++k) {
      e6 += std::pow(sobolev_norm(s.E[k], 6.0), 2);
      et5 += std::pow(sobolev_norm(s.Et[k], 5.0), 2);
    }
    for (const Spectrum& h : profile_h(s, 1)) hh += h.norm() * h.norm();
    const double dn = std::sqrt(std::pow(sobolev_norm(s.nt, 4.0), 2) + std::pow(sobolev_norm(derivative(s.n, 1), 4.0), 2) +
                                std::pow(sobolev_norm(derivative(s.n, 2), 4.0), 2));
    t.push_back(s.t);
    sup_e.push_back(envelope(s.E[0], s.E[1], s.t, EnvelopeWeight::One));
    env_e.push_back(envelope(s.E[0], s.E[1], s.t, EnvelopeWeight::Plus));
    env_n.push_back(envelope(s.n, s.t, EnvelopeWeight::Sharp));
    h4.push_back(dn);
    sob.push_back(std::sqrt(e6 + et5));
    h6.push_back(std::sqrt(e6));
    hp.push_back(std::sqrt(hh));
    box.push_back(l2_norm(box_tilde_n_source(s)));
    lap.push_back(l2_norm(laplacian_energy_density(s)));
    csv.row({t.back(), sup_e.back(), env_e.back(), env_n.back(), h4.back(), sob.back(), h6.back(), hp.back(),
             box.back(), lap.back()});
  });

  const double lo = c.fit_from, hi = c.t_end;
  const auto ee = restrict(t, env_e, lo, hi), en = restrict(t, env_n, lo, hi);
  const double me = median(ee), mn = median(en);
  x.add("env_E_median", me);
  x.add("env_E_max_over_median", *std::max_element(ee.begin(), ee.end()) / me);
  x.add("env_E_median_over_min", me / *std::min_element(ee.begin(), ee.end()));
  // the fit needs a span of a factor 8
  std::vector<double> ft, fs_;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= std::min(lo, hi / 8.0) - 1e-9) ft.push_back(t[i]), fs_.push_back(sup_e[i]);
  x.add("sup_E_alpha", fit_rate(ft, fs_, FitModel::Power).b);
  x.add("env_n_median", mn);
  x.add("env_n_max_over_median", *std::max_element(en.begin(), en.end()) / mn);
  x.add("env_n_median_over_min", mn / *std::min_element(en.begin(), en.end()));
  x.add("h4_dn_variation", variation(h4));
  x.add("sobolev_E_variation", variation(sob));
  x.add("h6_E_variation", variation(h6));
  {
    std::vector<double> w;
    for (std::size_t i = 0; i < t.size(); ++i)
      if (t[i] >= lo - 1e-9) w.push_back(hp[i] * std::pow(t[i], 1.0 - c.delta));
    x.add("h_plus_weighted_max_over_first", *std::max_element(w.begin(), w.end()) / w.front());
  }

  const auto wb = scattering_criterion(t, box, c.m_lo, c.m_hi);
  const auto wl = scattering_criterion(t, lap, c.m_lo, c.m_hi);
  CsvWriter win(x.out / "windows.csv", {"m", "box_tilde_n_sum", "lap_energy_density_sum"});
  double box_worst = 0.0, lap_best = INFINITY;
  for (std::size_t i = 0; i < wb.size(); ++i) {
    win.row({static_cast<double>(wb[i].m), wb[i].sum, wl[i].sum});
    x.add("box_window_" + tag(wb[i].m), wb[i].sum);
    x.add("lap_window_" + tag(wl[i].m), wl[i].sum);
    if (i > 0) {
      const double rb = wb[i].sum / wb[i - 1].sum, rl = wl[i].sum / wl[i - 1].sum;
      x.add("box_ratio_" + tag(wb[i].m), rb);
      x.add("lap_ratio_" + tag(wl[i].m), rl);
      box_worst = std::max(box_worst, rb);
      lap_best = std::min(lap_best, rl);
    }
  }
  x.add("box_ratio_max", box_worst);
  x.add("lap_ratio_min", lap_best);
}

// ---------------------------------------------------------------- identity audits

void identity_audits(Context& x) {
  const ExperimentConfig& c = x.c;
  {  // transformation identity on the manufactured corpus
    CsvWriter csv(x.out / "transform.csv", {"pair", "gamma", "pure_gaussian", "residual"});
    const auto corpus = manufactured_corpus(25, 8, 2024);
    double all = 0.0, pure = 0.0;
    for (std::size_t i = 0; i < corpus.size(); ++i)
      for (int gamma = 0; gamma < 3; ++gamma) {
        const double r = transform_identity_residual(corpus[i].f, corpus[i].g, gamma, 10000, 1 + i);
        csv.row({static_cast<double>(i), static_cast<double>(gamma), corpus[i].pure_gaussian ? 1.0 : 0.0, r});
        all = std::max(all, r);
        if (corpus[i].pure_gaussian) pure = std::max(pure, r);
      }
    x.add("transform_max", all);
    x.add("transform_gaussian_max", pure);
  }

  const SpectralGrid g = c.grid();
  const FieldState init = make_initial_data(g, c.data);
  const FreeWaveData data = wave_data(init);
  const auto xis = radial_xi_table(g, c.xi_count, c.xi_max);
  const auto slots = lattice_slots(g, xis);
  std::vector<double> times;
  for (double t = c.data.t0; t <= c.t_end + 1e-9; t += c.snapshot_every) times.push_back(t);
  ThetaOptions fine = c.theta_options(), finer = fine;
  fine.evaluator = finer.evaluator = ThetaEvaluator::Lattice;
  fine.normalization = finer.normalization = ThetaNormalization::Consistent;
  finer.ds = 0.5 * fine.ds;
  const PhaseTable ta = phase_table(data, xis, times, fine), tb = phase_table(data, xis, times, finer);

  EvolveParams ep = c.evolve_params();
  ep.track_m = true;
  CsvWriter csv(x.out / "identity.csv", {"t", "identity_err", "identity_err_half_ds", "norm_M1", "norm_M2", "norm_M3",
                                         "norm_M4", "decomposition"});
  double ea = 0.0, eb = 0.0, dec_a = 0.0;
  std::vector<RealField> n_a;
  evolve(init, ep, [&](const FieldState& s, const RealField* m, const RealField*) {
    x.rec(s);
    const std::size_t i = ta.time_index(s.t);
    double a = 0.0, b = 0.0;
    std::array<double, 4> mn{};
    for (int comp = 0; comp < 2; ++comp) {
      const ResidualTerms r = residual_terms(s, *m, data, comp, c.p);
      a = std::max(a, identity_check(r, slots, ta.rate[i]));
      b = std::max(b, identity_check(r, slots, tb.rate[i]));
      for (int k = 0; k < 4; ++k) mn[k] = std::hypot(mn[k], r.M[k].norm());
    }
    const double d = decomposition_residual(s, *m, data, c.data.epsilon);
    csv.row({s.t, a, b, mn[0], mn[1], mn[2], mn[3], d});
    ea = std::max(ea, a);
    eb = std::max(eb, b);
    dec_a = std::max(dec_a, d);
    n_a.push_back(s.n);
  });
  x.add("identity_max", ea);
  x.add("identity_max_half_ds", eb);
  x.add("identity_ratio", ea / eb);

  // same run at dt/2: decomposition order and integrator self-convergence
  EvolveParams half = ep;
  half.dt_max = 0.5 * step_size(init.t, ep);
  double dec_b = 0.0, self = 0.0;
  std::size_t k = 0;
  evolve(init, half, [&](const FieldState& s, const RealField* m, const RealField*) {
    dec_b = std::max(dec_b, decomposition_residual(s, *m, data, c.data.epsilon));
    const double scale = std::max(l2_norm(s.n), c.data.epsilon * c.data.epsilon);
    self = std::max(self, l2_norm(n_a.at(k++) - s.n) / scale);
  });
  x.add("decomposition_dt", dec_a);
  x.add("decomposition_half_dt", dec_b);
  x.add("decomposition_ratio", dec_a / dec_b);
  x.add("self_convergence", self);
  x.add("decomposition_over_self", dec_a / self);
}

// ---------------------------------------------------------------- cascade

void write_cascade(const fs::path& path, const CascadeResult& r) {
  CsvWriter csv(path, {"t", "norm_n", "norm_dn", "fit_b", "oracle_b"});
  for (std::size_t i = 0; i < r.t.size(); ++i) csv.row({r.t[i], r.norm_n[i], r.norm_dn[i], r.fit_b, r.oracle_b});
}

void cascade(Context& x) {
  const ExperimentConfig& c = x.c;
  const FieldState init = make_initial_data(c.grid(), c.data);
  const FreeWaveData data = wave_data(init);
  std::vector<double> times;
  for (double t = c.data.t0; t <= c.t_end + 1e-9; t += c.snapshot_every) times.push_back(t);
  const CascadeResult f = cascade_free(data, times, c.fit_from);
  write_cascade(x.out / "cascade_free.csv", f);
  x.add("free_fit_b", f.fit_b);
  x.add("oracle_b", f.oracle_b);
  if (c.data.moment == 0.0) {  // divergence-form n1; the computed moment is round-off
    const double n1 = l2_norm(data.n1);
    x.add("free_b_over_n1_sq", f.fit_b / (n1 * n1));
    return;
  }
  x.add("free_ratio", f.ratio());
  const CascadeResult k = cascade_kgz(init, c.evolve_params(), c.fit_from,
                                      [&](const FieldState& s, const RealField*, const RealField*) { x.rec(s); });
  write_cascade(x.out / "cascade_kgz.csv", k);
  x.add("kgz_fit_b", k.fit_b);
  x.add("kgz_ratio", k.ratio());
  x.add("kgz_dn_at_4", k.dn_at_4);
  x.add("kgz_dn_sup_over_t4", k.dn_sup / k.dn_at_4);
}

// ---------------------------------------------------------------- dichotomy

void dichotomy(Context& x) {
  const ExperimentConfig& c = x.c;
  const SpectralGrid g = c.grid();
  const FieldState init = make_initial_data(g, c.data);
  const FreeWaveData data = wave_data(init);
  std::vector<std::size_t> slots;
  const auto xis = disc_xi_table(g, c.xi_radius, &slots);
  std::vector<double> times;
  for (double t = c.data.t0; t <= c.t_end + 1e-9; t += c.snapshot_every) times.push_back(t);
  const PhaseTable tab = phase_table(data, xis, times, c.theta_options());

  TimedSpectra plain, mod;
  evolve(init, c.evolve_params(), [&](const FieldState& s, const RealField*, const RealField*) {
    x.rec(s);
    auto f = profile_f(s, 1);
    const auto& th = tab.theta[tab.time_index(s.t)];
    plain.times.push_back(s.t);
    mod.times.push_back(s.t);
    mod.profiles.push_back({modified_profile(f[0], slots, th), modified_profile(f[1], slots, th)});
    plain.profiles.push_back(std::move(f));
  });
  const auto a = cauchy_increments(plain, c.m_lo, c.m_hi, c.k_lo, c.k_hi, c.c_e, c.d_e);
  const auto b = cauchy_increments(mod, c.m_lo, c.m_hi, c.k_lo, c.k_hi, c.c_e, c.d_e);

  std::vector<std::string> cols = {"m", "t_lo", "t_hi", "plain", "modified"};
  for (int k = c.k_lo; k <= c.k_hi; ++k) cols.push_back("plain_k" + std::to_string(k));
  for (int k = c.k_lo; k <= c.k_hi; ++k) cols.push_back("modified_k" + std::to_string(k));
  CsvWriter csv(x.out / "increments.csv", cols);
  double p_min = INFINITY, p_max = 0.0, m_max = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::vector<double> row = {static_cast<double>(a[i].m), a[i].t_lo, a[i].t_hi, a[i].max_increment, b[i].max_increment};
    row.insert(row.end(), a[i].per_band.begin(), a[i].per_band.end());
    row.insert(row.end(), b[i].per_band.begin(), b[i].per_band.end());
    csv.row(row);
    x.add("plain_" + tag(a[i].m), a[i].max_increment);
    x.add("modified_" + tag(b[i].m), b[i].max_increment);
    if (i > 0) {
      const double rp = a[i].max_increment / a[i - 1].max_increment;
      const double rm = b[i].max_increment / b[i - 1].max_increment;
      x.add("plain_ratio_" + tag(a[i].m), rp);
      x.add("modified_ratio_" + tag(b[i].m), rm);
      p_min = std::min(p_min, rp);
      p_max = std::max(p_max, rp);
      m_max = std::max(m_max, rm);
    }
  }
  x.add("plain_ratio_min", p_min);
  x.add("plain_ratio_max", p_max);
  x.add("modified_ratio_max", m_max);
  x.add("ratio_threshold", c.ratio_threshold);
}

// ---------------------------------------------------------------- theta growth

void theta_growth_run(Context& x) {
  const ExperimentConfig& c = x.c;
  const SpectralGrid g = c.grid();
  const FieldState init = make_initial_data(g, c.data);
  const FreeWaveData data = wave_data(init);
  const auto xis = radial_xi_table(g, c.xi_count, c.xi_max);
  std::vector<double> times;
  const int per_octave = 8;
  for (int k = 0;; ++k) {
    const double t = c.data.t0 * std::exp2(static_cast<double>(k) / per_octave);
    if (t > c.t_end * (1 + 1e-12)) break;
    times.push_back(t);
  }
  if (times.back() < c.t_end) times.push_back(c.t_end);
  const PhaseTable tab = phase_table(data, xis, times, c.theta_options());

  std::vector<std::string> cols = {"t"};
  for (std::size_t j = 0; j < xis.size(); ++j) cols.push_back("theta_" + std::to_string(j));
  CsvWriter csv(x.out / "theta.csv", cols);
  for (std::size_t i = 0; i < times.size(); ++i) {
    std::vector<double> row = {times[i]};
    row.insert(row.end(), tab.theta[i].begin(), tab.theta[i].end());
    csv.row(row);
  }
  {
    CsvWriter xs(x.out / "xi_table.csv", {"index", "xi1", "xi2"});
    for (std::size_t j = 0; j < xis.size(); ++j) xs.row({static_cast<double>(j), xis[j][0], xis[j][1]});
  }
  // reference time for the boundedness measure: the table time closest to 64
  std::size_t i64 = 0;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(std::log(times[i] / 64.0)) < std::abs(std::log(times[i64] / 64.0))) i64 = i;
  for (std::size_t j = 0; j < xis.size(); ++j) {
    double sup = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) sup = std::max(sup, std::abs(tab.theta[i][j]));
    const double ref = std::abs(tab.theta[i64][j]);
    // identically vanishing phase (odd data at xi = 0) counts as bounded
    x.add("sup_over_t64_" + std::to_string(j), sup <= 1e-12 ? 0.0 : sup / ref);
  }
  if (c.data.moment == 0.0) return;
  const ThetaGrowth tg = theta_growth(tab, data.moment(), c.fit_lo, c.fit_hi);
  for (std::size_t j = 0; j < xis.size(); ++j) {
    x.add("slope_" + std::to_string(j), tg.slopes[j]);
    x.add("ratio_" + std::to_string(j), tg.ratios[j]);
  }
}

using Runner = void (*)(Context&);
const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> r = {
      {"smoke", smoke},         {"decay", decay},         {"identity-audits", identity_audits},
      {"cascade", cascade},     {"dichotomy", dichotomy}, {"theta-growth", theta_growth_run},
  };
  return r;
}

void write_summary(const Context& x) {
  nlohmann::ordered_json j;
  j["experiment"] = x.report.experiment;
  j["metrics"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : x.report.metrics) j["metrics"][k] = std::isfinite(v) ? nlohmann::ordered_json(v) : nullptr;
  std::ofstream out(x.out / "summary.json", std::ios::binary | std::ios::trunc);
  out << j.dump(2) << '\n';
}

}  // namespace

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : runners()) out.push_back(k);
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& config, const fs::path& out) {
  const auto it = runners().find(config.experiment);
  if (it == runners().end()) throw ConfigError(config.origin + ": unknown experiment '" + config.experiment + "'");
  fs::create_directories(out);
  Context x{config, out, Recorder(out, config.snapshot_stride), {}};
  x.report.experiment = config.experiment;
  try {
    it->second(x);
  } catch (const DivergenceError&) {
    x.rec.save_last_good();
    write_summary(x);
    write_manifest(out);
    throw;
  }
  write_summary(x);
  write_manifest(out);
  return x.report;
}

}  // namespace kgz
