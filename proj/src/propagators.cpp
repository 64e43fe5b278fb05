#include "kgz/propagators.hpp"

#include <string>

#include "kgz/errors.hpp"

namespace kgz {

namespace {

void check_time(double t0, double t) {
  if (!(t >= t0))
    throw DomainError("free evolution requested at t = " + std::to_string(t) +
                      " before the data time t0 = " + std::to_string(t0));
}

// sin(tau r) / r with its limit tau at r = 0.
inline double sinc_t(double tau, double r) { return r == 0.0 ? tau : std::sin(tau * r) / r; }

template <typename Omega>
std::pair<Spectrum, Spectrum> flow(const Spectrum& u0, const Spectrum& u1, double tau, Omega&& omega) {
  const SpectralGrid& g = u0.grid();
  Spectrum u(g), ut(g);
  const int n = g.points();
  for (int j1 = 0; j1 < n; ++j1) {
    const double x1 = g.frequency(j1);
    for (int j2 = 0; j2 < n; ++j2) {
      const std::size_t i = g.index(j1, j2);
      const double w = omega(std::hypot(x1, g.frequency(j2)));
      const double c = std::cos(tau * w), s = std::sin(tau * w);
      const double sw = sinc_t(tau, w);
      u.coeffs()[i] = c * u0.coeffs()[i] + sw * u1.coeffs()[i];
      ut.coeffs()[i] = -w * s * u0.coeffs()[i] + c * u1.coeffs()[i];
    }
  }
  return {std::move(u), std::move(ut)};
}

}  // namespace

FreeWaveData FreeWaveData::from_fields(const RealField& n0, const RealField& n1, double t0) {
  FreeWaveData d;
  d.n0 = n0;
  d.n1 = n1;
  d.n0_hat = forward_ft(n0);
  d.n1_hat = forward_ft(n1);
  d.t0 = t0;
  return d;
}

FreeWaveData FreeWaveData::from_spectra(const Spectrum& n0_hat, const Spectrum& n1_hat, double t0) {
  FreeWaveData d;
  d.n0_hat = n0_hat;
  d.n1_hat = n1_hat;
  d.n0 = inverse_ft(n0_hat);
  d.n1 = inverse_ft(n1_hat);
  d.t0 = t0;
  return d;
}

std::pair<cplx, cplx> free_wave_mode(cplx n0, cplx n1, double r, double elapsed) {
  const double c = std::cos(elapsed * r), s = std::sin(elapsed * r);
  return {c * n0 + sinc_t(elapsed, r) * n1, -r * s * n0 + c * n1};
}

std::pair<Spectrum, Spectrum> free_wave_spectra(const FreeWaveData& data, double t) {
  check_time(data.t0, t);
  return flow(data.n0_hat, data.n1_hat, t - data.t0, [](double r) { return r; });
}

std::pair<RealField, RealField> free_wave_evolve(const FreeWaveData& data, double t) {
  auto [u, ut] = free_wave_spectra(data, t);
  return {inverse_ft(u), inverse_ft(ut)};
}

std::pair<Spectrum, Spectrum> free_kg_spectra(const Spectrum& v0_hat, const Spectrum& v1_hat,
                                              double t0, double t) {
  check_time(t0, t);
  return flow(v0_hat, v1_hat, t - t0, [](double r) { return bracket(r); });
}

std::pair<RealField, RealField> free_kg_evolve(const FreeWaveData& data, double t) {
  auto [v, vt] = free_kg_spectra(data.n0_hat, data.n1_hat, data.t0, t);
  return {inverse_ft(v), inverse_ft(vt)};
}

Spectrum half_phase(const Spectrum& s, int sign, double t, int mass) {
  if (sign != 1 && sign != -1) throw DomainError("half_phase sign must be +1 or -1");
  if (mass != 0 && mass != 1) throw DomainError("half_phase mass must be 0 or 1");
  Spectrum out = s;
  out.for_each([&](double a, double b, cplx& c) {
    const double r = std::hypot(a, b);
    const double w = mass ? bracket(r) : r;
    c *= std::polar(1.0, sign * t * w);
  });
  return out;
}

Spectrum g_profile(const FreeWaveData& data) {
  Spectrum out = data.n1_hat;
  const Spectrum& n0 = data.n0_hat;
  const SpectralGrid& g = out.grid();
  for (int j1 = 0; j1 < g.points(); ++j1)
    for (int j2 = 0; j2 < g.points(); ++j2) {
      const double r = std::hypot(g.frequency(j1), g.frequency(j2));
      out(j1, j2) -= cplx(0.0, r) * n0(j1, j2);
    }
  return out;
}

}  // namespace kgz
