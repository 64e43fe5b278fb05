#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "doctest.h"
#include "kgz/errors.hpp"
#include "kgz/diagnostics.hpp"
#include "kgz/scattering.hpp"

using namespace kgz;

namespace {

RealField sample(const SpectralGrid& g, const std::function<double(double, double)>& f) {
  RealField u(g);
  for (int i1 = 0; i1 < g.points(); ++i1)
    for (int i2 = 0; i2 < g.points(); ++i2) u(i1, i2) = f(g.coordinate(i1), g.coordinate(i2));
  return u;
}

double rel(const Spectrum& a, const Spectrum& b) { return (a - b).norm() / b.norm(); }

FieldState kg_state(const FreeWaveData& d, double t) {
  FieldState s(d.grid(), t);
  auto [e, et] = free_kg_evolve(d, t);
  s.E[0] = e;
  s.Et[0] = et;
  s.E[1] = 0.5 * e;
  s.Et[1] = 0.5 * et;
  return s;
}

// E fields of a small-data state, with n replaced by the free wave of the same data
FieldState free_n_state(const SpectralGrid& g, double mu, double t) {
  InitialDataParams p;
  p.moment = mu;
  p.seed = 3;
  const FieldState init = make_initial_data(g, p);
  FieldState s = init;
  s.t = t;
  auto [l, lt] = free_wave_evolve(wave_data(init), t);
  s.n = l;
  s.nt = lt;
  return s;
}

}  // namespace

TEST_CASE("profiles f") {
  SpectralGrid g(16.0, 64);
  const RealField e0 = sample(g, [](double x, double y) { return std::exp(-(x * x + 2 * y * y) / 2) * (1 + 0.2 * x); });
  const RealField e1 = sample(g, [](double x, double y) { return std::exp(-((x - 1) * (x - 1) + y * y) / 3); });
  const FreeWaveData d = FreeWaveData::from_fields(e0, e1, 1.0);
  const auto f_a = profile_f(kg_state(d, 1.0), 1), f_b = profile_f(kg_state(d, 7.3), 1);
  CHECK(rel(f_b[0], f_a[0]) < 1e-10);
  CHECK(rel(f_b[1], f_a[1]) < 1e-10);

  const FieldState s = kg_state(d, 4.2);
  const Spectrum fp = profile_f(s.E[0], s.Et[0], s.t, 1), fm = profile_f(s.E[0], s.Et[0], s.t, -1);
  double worst = 0.0;
  for (int j1 = 1; j1 < g.points(); ++j1)
    for (int j2 = 1; j2 < g.points(); ++j2)
      worst = std::max(worst, std::abs(fm(j1, j2) - std::conj(fp(g.points() - j1, g.points() - j2))));
  CHECK(worst < 1e-12 * fp.norm());
  CHECK(l2_norm(reconstruct_from_profiles(fp, fm, s.t) - s.E[0]) < 1e-12 * l2_norm(s.E[0]));
  CHECK_THROWS_AS(profile_f(s.E[0], s.Et[0], s.t, 0), DomainError);
}

TEST_CASE("profiles h") {
  SpectralGrid g(20.0, 128);
  InitialDataParams p;
  p.epsilon = 0.3;
  p.moment = 0.3;
  p.seed = 5;
  FieldState init = make_initial_data(g, p);
  init.n = RealField(g);
  init.nt = RealField(g);
  for (const Spectrum& h : profile_h(init, 1)) CHECK(h.norm() == 0.0);

  init = make_initial_data(g, p);
  const FieldState s0 = Integrator(init, 0.05).state();
  const auto h = profile_h(s0, 1);
  for (int c = 0; c < 2; ++c) {
    const RealField ne = product(s0.n, s0.E[c]);
    const RealField dne = product(s0.nt, s0.E[c]) + product(s0.n, s0.Et[c]);
    CHECK(h[c].norm() <= l2_norm(dne) + sobolev_norm(ne, 1.0) + 1e-14);
  }

  // d_t h_+ = e^{it<xi>} FT(source), against a centred difference of the flow
  auto h_at = [&](double dt, double t) {
    Integrator it(init, dt);
    while (it.time() < t - 1e-12) it.step();
    return profile_h(it.state(), 1);
  };
  const double t = 1.4;
  double prev = 0.0;
  for (double dt : {0.02, 0.01}) {
    const auto hp = h_at(dt, t + dt), hm = h_at(dt, t - dt);
    Integrator it(init, dt);
    while (it.time() < t - 1e-12) it.step();
    const FieldState s = it.state();
    const auto src = h_source(s);
    Spectrum want = forward_ft(src[0]);
    want.for_each([&](double x1, double x2, cplx& c) { c *= std::polar(1.0, t * std::sqrt(1 + x1 * x1 + x2 * x2)); });
    const Spectrum fd = (hp[0] - hm[0]) * cplx(1.0 / (2 * dt), 0.0);
    const double err = rel(fd, want);
    MESSAGE("h source consistency dt=" << dt << " err " << err);
    CHECK(err < 5e-3);
    if (prev > 0) CHECK(prev / err > 2.5);
    prev = err;
  }
}

TEST_CASE("lattice low-frequency part matches the inverse transform") {
  SpectralGrid g(24.0, 64);
  const FieldState init = free_n_state(g, 0.3, 1.0);
  const FreeWaveData d = wave_data(init);
  const double t = 4.0, p = 0.75;
  const RealField low = inverse_ft(lowfreq_split(free_wave_spectra(d, t).first, t, p).first);
  // Theta's rate at xi on the ray x = t xi/<xi> hits grid points for xi = x/sqrt(t^2 - |x|^2)
  ThetaOptions o;
  o.normalization = ThetaNormalization::Consistent;
  for (int i1 : {32, 33, 35}) {
    const double x = g.coordinate(i1);
    const double xi = x / std::sqrt(t * t - x * x);
    const double r = theta_rate(t, {{xi, 0.0}}, d, o)[0];
    CHECK(r * 2 * std::sqrt(1 + xi * xi) == doctest::Approx(low(i1, 32)).epsilon(1e-10));
  }
}

TEST_CASE("theta basics") {
  SpectralGrid g(24.0, 64);
  const FreeWaveData d = wave_data(free_n_state(g, 0.3, 1.0));
  const FreeWaveData zero = FreeWaveData::from_fields(RealField(g), RealField(g), 1.0);
  ThetaOptions o;
  const auto xis = radial_xi_table(g, 8, 4.0);
  CHECK(xis.size() == 9);
  CHECK(xis[8][0] <= 4.0);
  const PhaseTable tab = phase_table(d, xis, {1.0, 2.0, 5.0}, o);
  for (double v : tab.theta[0]) CHECK(v == 0.0);
  const PhaseTable tz = phase_table(zero, xis, {1.0, 3.0}, o);
  for (const auto& row : tz.theta)
    for (double v : row) CHECK(v == 0.0);
  CHECK_THROWS_AS(phase_table(d, xis, {1.0, 1.01}, o), DomainError);
  CHECK_THROWS_AS(phase_table(d, xis, {0.5}, o), DomainError);

  ThetaOptions pr = o;
  pr.normalization = ThetaNormalization::Printed;
  const PhaseTable tp = phase_table(d, xis, {1.0, 2.0, 5.0}, pr);
  for (std::size_t j = 0; j < xis.size(); ++j)
    CHECK(tp.theta[2][j] == doctest::Approx(4 * kPi * kPi * tab.theta[2][j]).epsilon(1e-12));
  CHECK(theta(5.0, xis[3], d, o) == doctest::Approx(tab.theta[2][3]).epsilon(1e-9));

  // lattice and continuum agree while the box is large against the wave front
  ThetaOptions c = o;
  c.evaluator = ThetaEvaluator::Continuum;
  const PhaseTable tc = phase_table(d, xis, {1.0, 2.0, 5.0}, c);
  for (std::size_t j = 0; j < xis.size(); ++j) {
    CHECK(tc.theta[0][j] == 0.0);
    CHECK(tc.theta[2][j] == doctest::Approx(tab.theta[2][j]).epsilon(1e-4));
  }
}

TEST_CASE("continuum theta against a dense radial quadrature") {
  const double mu = 0.3, p = 0.75, t0 = 1.0, t = 256.0;
  SpectralGrid g(24.0, 96);
  const RealField n1 = sample(g, [&](double x, double y) { return mu / (2 * kPi) * std::exp(-(x * x + y * y) / 2); });
  const FreeWaveData d = FreeWaveData::from_fields(RealField(g), n1, t0);
  ThetaOptions o;
  o.evaluator = ThetaEvaluator::Continuum;
  o.normalization = ThetaNormalization::Printed;
  const double got = theta(t, {0.0, 0.0}, d, o);

  // pi mu \int ds \int psi(rho <s>^p) sin((s - t0) rho) e^{-rho^2/2} d rho
  using GL = boost::math::quadrature::gauss<double, 30>;
  auto inner = [&](double s) {
    const double c = std::pow(1 + s * s, -p / 2);
    auto f = [&](double r) { return cutoff_psi(r / c) * std::sin((s - t0) * r) * std::exp(-r * r / 2); };
    double acc = GL::integrate(f, 0.0, c);
    for (int k = 0; k < 8; ++k) acc += GL::integrate(f, c * (1 + 0.125 * k), c * (1.125 + 0.125 * k));
    return acc;
  };
  const int n = 2 * static_cast<int>(std::ceil((t - t0) / (2 * 0.025 / 8)));
  const double h = (t - t0) / n;
  double acc = inner(t0) + inner(t);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4 : 2) * inner(t0 + i * h);
  const double want = kPi * mu * acc * h / 3;
  MESSAGE("theta(256, 0) continuum " << got << " dense " << want);
  CHECK(std::abs(got - want) < 1e-3 * std::abs(want));
}

TEST_CASE("modified profile") {
  SpectralGrid g(24.0, 64);
  const FieldState s = free_n_state(g, 0.3, 3.0);
  const Spectrum fp = profile_f(s, 1)[0];
  std::vector<std::size_t> slots;
  const auto xis = disc_xi_table(g, 2.0, &slots);
  CHECK(lattice_slots(g, xis) == slots);
  CHECK_THROWS_AS(lattice_slots(g, {{0.01, 0.0}}), DomainError);
  const PhaseTable tab = phase_table(wave_data(make_initial_data(g, [] {
                                       InitialDataParams p;
                                       p.moment = 0.3;
                                       p.seed = 3;
                                       return p;
                                     }())),
                                     xis, {3.0}, [] {
                                       ThetaOptions o;
                                       o.ds = 0.25;
                                       return o;
                                     }());
  const Spectrum fs = modified_profile(fp, slots, tab.theta[0]);
  CHECK(std::abs(fs.norm() - fp.norm()) < 1e-12 * fp.norm());
  CHECK(rel(fs, fp) > 0.0);
  CHECK(rel(modified_profile(fp, slots, std::vector<double>(slots.size(), 0.0)), fp) == 0.0);
}

TEST_CASE("residual identity with m = 0") {
  SpectralGrid g(24.0, 96);
  const double t = 3.0, p = 0.75;
  const FieldState s = free_n_state(g, 0.3, t);
  const FreeWaveData d = wave_data(free_n_state(g, 0.3, 1.0));
  const RealField m(g);
  const auto xis = radial_xi_table(g);
  const auto slots = lattice_slots(g, xis);
  double prev = 0.0;
  for (double ds : {0.05, 0.025, 0.0125}) {
    ThetaOptions o;
    o.ds = ds;
    const PhaseTable tab = phase_table(d, xis, {1.0, t}, o);
    double err = 0.0;
    for (int c = 0; c < 2; ++c) {
      const ResidualTerms r = residual_terms(s, m, d, c, p);
      CHECK(r.M[3].norm() == 0.0);
      err = std::max(err, identity_check(r, slots, tab.rate[1]));
    }
    MESSAGE("identity ds=" << ds << " err " << err);
    if (ds == 0.0125) CHECK(err < 1e-8);
    if (prev > 0) {
      CHECK(prev / err > 12.0);
      CHECK(prev / err < 20.0);
    }
    prev = err;
  }

  // exact rate closes the identity to round-off
  ThetaOptions o;
  const auto exact = theta_rate(t, xis, d, o);
  const ResidualTerms r = residual_terms(s, m, d, 0, p);
  CHECK(identity_check(r, slots, exact) < 1e-12);

  // n = 0 -> all terms vanish
  const FreeWaveData zero = FreeWaveData::from_fields(RealField(g), RealField(g), 1.0);
  const ResidualTerms rz = residual_terms(s, m, zero, 0, p);
  for (const Spectrum& mi : rz.M) CHECK(mi.norm() == 0.0);
  CHECK(identity_check(rz, slots, std::vector<double>(slots.size(), 0.0)) == 0.0);
}

TEST_CASE("Cauchy increments") {
  SpectralGrid g(16.0, 64);
  const RealField e0 = sample(g, [](double x, double y) { return std::exp(-(x * x + y * y) / 2); });
  const FreeWaveData d = FreeWaveData::from_fields(e0, RealField(g), 1.0);
  TimedSpectra series;
  for (int t = 1; t <= 20; ++t) {
    series.times.push_back(t);
    series.profiles.push_back(profile_f(kg_state(d, t), 1));
  }
  const auto w = cauchy_increments(series, 1, 3, -4, 0, 0.1, -0.1);
  CHECK(w.size() == 3);
  for (const auto& x : w) CHECK(x.max_increment < 1e-9);
  CHECK_THROWS_AS(cauchy_increments(series, 4, 4, -4, 0, 0.1, -0.1), RangeError);

  // a linear drift gives increments proportional to the window length
  TimedSpectra drift;
  for (int t = 1; t <= 34; ++t) {
    drift.times.push_back(t);
    drift.profiles.push_back({series.profiles[0][0] * cplx(t, 0.0), series.profiles[0][1]});
  }
  const auto wd = cauchy_increments(drift, 2, 4, -4, 0, 0.0, 0.0);
  CHECK(wd[1].max_increment / wd[0].max_increment == doctest::Approx(12.0 / 8.0).epsilon(1e-12));
}

TEST_CASE("free-wave cascade") {
  SpectralGrid g(280.0, 128);
  InitialDataParams p;
  p.radius_n = p.radius_e = 2.0;  // n0 x n1 cross terms decay like 1/t and grow with the width
  std::vector<double> times;
  for (int i = 0; i <= 24; ++i) times.push_back(4 * std::exp2(0.25 * i));
  p.moment = 0.3;
  const CascadeResult r = cascade_free(wave_data(make_initial_data(g, p)), times, 32.0);
  MESSAGE("free cascade b/b* " << r.ratio() << " b* " << r.oracle_b);
  CHECK(r.oracle_b == doctest::Approx(0.09 / (4 * kPi)).epsilon(0.05));
  CHECK(r.ratio() > 0.9);
  CHECK(r.ratio() < 1.1);

  p.moment = 0.0;
  const FreeWaveData z = wave_data(make_initial_data(g, p));
  const CascadeResult r0 = cascade_free(z, times, 32.0);
  const double n1sq = std::pow(l2_norm(z.n1), 2);
  MESSAGE("mu = 0 slope " << r0.fit_b << " vs " << n1sq);
  CHECK(std::abs(r0.fit_b) < 0.02 * n1sq);

  EvolveParams ep;
  ep.t_end = 4;
  CHECK_THROWS_AS(cascade_kgz(make_initial_data(g, p), ep, 2.0), ConfigError);
}

TEST_CASE("theta growth fit") {
  PhaseTable tab;
  tab.xis = {{0.0, 0.0}, {0.5, 0.0}};
  tab.options.normalization = ThetaNormalization::Printed;
  for (int i = 0; i <= 16; ++i) {
    const double t = 256 * std::exp2(0.25 * i);
    tab.times.push_back(t);
    tab.theta.push_back({kPi * 0.3 * std::log(t) + 2, 0.9 * kPi * 0.3 * std::log(t)});
  }
  const ThetaGrowth gr = theta_growth(tab, 0.3, 256, 4096);
  CHECK(gr.ratios[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gr.ratios[1] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK_THROWS_AS(theta_growth(tab, 0.0, 256, 4096), DomainError);
}
