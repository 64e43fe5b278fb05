#include <algorithm>
#include <cmath>
#include <random>

#include "kgz/errors.hpp"
#include "kgz/experiments.hpp"
#include "kgz/propagators.hpp"
#include "kgz/special.hpp"
#include "kgz/transform.hpp"

namespace kgz {

namespace {

using Lines = std::vector<AuditLine>;

double rel_diff(const Spectrum& a, const Spectrum& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

RealField gaussian(const SpectralGrid& g, double width, double amp, double cx = 0.0) {
  RealField f(g);
  for (int i1 = 0; i1 < g.points(); ++i1)
    for (int i2 = 0; i2 < g.points(); ++i2) {
      const double x = g.coordinate(i1) - cx, y = g.coordinate(i2);
      f(i1, i2) = amp * std::exp(-(x * x + y * y) / (2 * width * width));
    }
  return f;
}

void transform_suite(Lines& out) {
  const auto corpus = manufactured_corpus(25, 8, 2024);
  double all = 0.0, pure = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    for (int gamma = 0; gamma < 3; ++gamma) {
      const double r = transform_identity_residual(corpus[i].f, corpus[i].g, gamma, 10000, 1 + i);
      all = std::max(all, r);
      if (corpus[i].pure_gaussian) pure = std::max(pure, r);
    }
  out.push_back({"transform identity, 25-pair corpus", all, 1e-9});
  out.push_back({"transform identity, Gaussian pairs", pure, 1e-10});
}

void special_suite(Lines& out) {
  const double a = sine_bessel_integral(2.0, 1.0).value, b = sine_bessel_integral(5.0, 3.0).value;
  out.push_back({"sine-Bessel (2,1) relative error", std::abs(a * std::sqrt(3.0) - 1.0), 1e-4});
  out.push_back({"sine-Bessel (5,3) relative error", std::abs(b / 0.25 - 1.0), 1e-4});
  double sup = 0.0, first = 0.0, run = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double s = 4.0 * std::pow(2500.0, i / 4000.0), gap = asymptotic_gap(s);
    sup = std::max(sup, gap);
    if (s >= 16.0) {
      run = std::max(run, gap);
      if (s <= 16.0 + 2 * kPi) first = run;
    }
  }
  out.push_back({"Bessel asymptotic gap sup over [4, 1e4]", sup, 0.2});
  out.push_back({"Bessel asymptotic gap at s = 100 (lower)", asymptotic_gap(100.0), 0.05, false});
  out.push_back({"Bessel asymptotic gap at s = 100 (upper)", asymptotic_gap(100.0), 0.15});
  out.push_back({"Bessel gap running max growth past s = 16", run / first, 1.05});
  double lo = 2.0, hi = 3.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (bessel_j0(mid) > 0 ? lo : hi) = mid;
  }
  out.push_back({"first zero of J0 vs 2.404826", std::abs(lo - 2.404826), 1e-6});
}

void phase_suite(Lines& out) {
  const PhaseConstants a = sample_phase_constants(100000, 1), b = sample_phase_constants(100000, 2);
  const double ca[] = {a.g1_phi1, a.g1_phi2, a.g2_phi1, a.g2_phi2, a.g3, a.g4};
  const double cb[] = {b.g1_phi1, b.g1_phi2, b.g2_phi1, b.g2_phi2, b.g3, b.g4};
  const char* names[] = {"group 1 Phi1", "group 1 Phi2", "group 2 Phi1", "group 2 Phi2", "group 3", "group 4"};
  for (int i = 0; i < 6; ++i) {
    out.push_back({std::string("phase constant ") + names[i] + " (positive)", ca[i], 1e-300, false});
    out.push_back({std::string("phase constant ") + names[i] + " redraw spread",
                   std::abs(ca[i] - cb[i]) / std::max(ca[i], cb[i]), 0.1});
  }
}

void spectral_suite(Lines& out) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  double round = 0.0, planch = 0.0;
  for (int n : {16, 32, 64, 128}) {
    SpectralGrid g(5.0, n);
    RealField f(g);
    for (auto& v : f.values) v = nd(rng);
    const Spectrum s = forward_ft(f);
    round = std::max(round, l2_norm(inverse_ft(s) - f) / l2_norm(f));
    planch = std::max(planch, std::abs(s.norm() - l2_norm(f)) / l2_norm(f));
  }
  out.push_back({"FFT round trip", round, 1e-12});
  out.push_back({"Plancherel", planch, 1e-12});

  std::uniform_real_distribution<double> e(-29.0, 29.0);
  double part = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double r = std::exp2(e(rng));
    double s = 0.0;
    for (int k = -30; k <= 30; ++k) s += cutoff_phi_k(r, k);
    part = std::max(part, std::abs(s - 1.0));
  }
  out.push_back({"Littlewood-Paley partition of unity", part, 1e-14});

  SpectralGrid g(30.0, 64);
  const auto d = FreeWaveData::from_fields(gaussian(g, 1.0, 3.0), gaussian(g, 0.3, 2.0, -2.0));
  const double s = 4.5, t = 13.25;
  const auto direct = free_wave_spectra(d, t), mid = free_wave_spectra(d, s);
  const auto via = free_wave_spectra(FreeWaveData::from_spectra(mid.first, mid.second, s), t);
  out.push_back({"wave propagator group property",
                 std::max(rel_diff(via.first, direct.first), rel_diff(via.second, direct.second)), 1e-12});
  const auto kd = free_kg_spectra(d.n0_hat, d.n1_hat, 1.0, t), km = free_kg_spectra(d.n0_hat, d.n1_hat, 1.0, s);
  const auto kv = free_kg_spectra(km.first, km.second, s, t);
  out.push_back({"Klein-Gordon propagator group property",
                 std::max(rel_diff(kv.first, kd.first), rel_diff(kv.second, kd.second)), 1e-12});
}

}  // namespace

std::vector<std::string> audit_names() { return {"transform", "phase", "special", "spectral", "all"}; }

std::vector<AuditLine> run_audit(const std::string& suite) {
  Lines out;
  const bool all = suite == "all";
  if (all || suite == "spectral") spectral_suite(out);
  if (all || suite == "special") special_suite(out);
  if (all || suite == "phase") phase_suite(out);
  if (all || suite == "transform") transform_suite(out);
  if (out.empty()) throw ConfigError("unknown audit suite '" + suite + "' (transform, phase, special, spectral, all)");
  return out;
}

}  // namespace kgz
