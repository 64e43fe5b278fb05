#include "kgz/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <string>

#include "kgz/errors.hpp"

namespace kgz {

namespace {

// FFTW planning is not thread-safe, execution with new arrays is. Plans are
// created once per (N, direction) and reused.
struct PlanCache {
  std::mutex mutex;
  std::map<std::pair<int, int>, fftw_plan> plans;

  fftw_plan get(int n, int direction) {
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(n, direction);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    std::vector<cplx> scratch(static_cast<std::size_t>(n) * n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan =
        fftw_plan_dft_2d(n, n, buf, buf, direction, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw ConfigError("FFTW could not plan a transform of size " + std::to_string(n));
    plans.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void execute(std::vector<cplx>& data, int n, int direction) {
  fftw_plan plan = plan_cache().get(n, direction);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

// (-1)^(k1 + k2); wavenumber parity equals index parity for even N.
inline double checker(int j1, int j2) { return ((j1 + j2) & 1) ? -1.0 : 1.0; }

void check_size(const SpectralGrid& g, std::size_t size, const char* what) {
  if (size != g.size())
    throw ConfigError(std::string(what) + ": field has " + std::to_string(size) +
                      " samples, grid expects " + std::to_string(g.size()));
}

Spectrum forward_impl(const SpectralGrid& g, std::vector<cplx> data) {
  const int n = g.points();
  execute(data, n, FFTW_FORWARD);
  const double area = g.cell_area();
  for (int j1 = 0; j1 < n; ++j1)
    for (int j2 = 0; j2 < n; ++j2) data[g.index(j1, j2)] *= area * checker(j1, j2);
  return Spectrum(g, std::move(data));
}

std::vector<cplx> inverse_impl(const Spectrum& s) {
  const SpectralGrid& g = s.grid();
  check_size(g, s.coeffs().size(), "inverse_ft");
  const int n = g.points();
  std::vector<cplx> data = s.coeffs();
  for (int j1 = 0; j1 < n; ++j1)
    for (int j2 = 0; j2 < n; ++j2) data[g.index(j1, j2)] *= checker(j1, j2);
  execute(data, n, FFTW_BACKWARD);
  const double scale = 1.0 / (static_cast<double>(g.size()) * g.cell_area());
  for (auto& v : data) v *= scale;
  return data;
}

void zero_nyquist(Spectrum& s) {
  const SpectralGrid& g = s.grid();
  const int n = g.points();
  const int h = n / 2;
  for (int j = 0; j < n; ++j) {
    s(h, j) = 0.0;
    s(j, h) = 0.0;
  }
}

template <typename Weight>
Spectrum radial_filter(const Spectrum& s, Weight&& w) {
  Spectrum out = s;
  out.for_each([&](double x1, double x2, cplx& c) { c *= w(std::hypot(x1, x2)); });
  zero_nyquist(out);
  return out;
}

}  // namespace

SpectralGrid::SpectralGrid(double half_width, int points_per_axis, double dealias_fraction)
    : half_width_(half_width), points_(points_per_axis), dealias_fraction_(dealias_fraction) {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw ConfigError("grid half-width L must be positive, got " + std::to_string(half_width));
  if (points_per_axis < 16 || points_per_axis % 2 != 0)
    throw ConfigError("grid points per axis must be even and >= 16, got " +
                      std::to_string(points_per_axis));
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
    throw ConfigError("dealias fraction must lie in (0, 1], got " +
                      std::to_string(dealias_fraction));
}

double SpectralGrid::spectral_weight() const {
  const double w = frequency_step() / (2.0 * kPi);
  return w * w;
}

RealField product(const RealField& a, const RealField& b) {
  check_size(a.grid, b.values.size(), "product");
  RealField out(a.grid);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.values[i] * b.values[i];
  return out;
}

ComplexField product(const RealField& a, const ComplexField& b) {
  check_size(a.grid, b.values.size(), "product");
  ComplexField out(a.grid);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.values[i] * b.values[i];
  return out;
}

double l2_norm(const RealField& u) {
  double s = 0.0;
  for (double v : u.values) s += v * v;
  return std::sqrt(s * u.grid.cell_area());
}

double l2_norm(const ComplexField& u) {
  double s = 0.0;
  for (const cplx& v : u.values) s += std::norm(v);
  return std::sqrt(s * u.grid.cell_area());
}

double max_norm(const RealField& u) {
  double m = 0.0;
  for (double v : u.values) m = std::max(m, std::abs(v));
  return m;
}

double Spectrum::norm() const {
  double s = 0.0;
  for (const cplx& c : coeffs_) s += std::norm(c);
  return std::sqrt(s * grid_.spectral_weight());
}

Spectrum& Spectrum::operator+=(const Spectrum& o) {
  check_size(grid_, o.coeffs_.size(), "spectrum sum");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

Spectrum& Spectrum::operator-=(const Spectrum& o) {
  check_size(grid_, o.coeffs_.size(), "spectrum difference");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

Spectrum& Spectrum::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Spectrum forward_ft(const RealField& u) {
  check_size(u.grid, u.values.size(), "forward_ft");
  return forward_impl(u.grid, std::vector<cplx>(u.values.begin(), u.values.end()));
}

Spectrum forward_ft(const ComplexField& u) {
  check_size(u.grid, u.values.size(), "forward_ft");
  return forward_impl(u.grid, u.values);
}

RealField inverse_ft(const Spectrum& s) {
  std::vector<cplx> data = inverse_impl(s);
  RealField out(s.grid());
  for (std::size_t i = 0; i < data.size(); ++i) out.values[i] = data[i].real();
  return out;
}

ComplexField inverse_ft_complex(const Spectrum& s) {
  return ComplexField(s.grid(), inverse_impl(s));
}

namespace symbols {
Symbol abs() {
  return [](double a, double b) { return cplx(std::hypot(a, b), 0.0); };
}
Symbol bracket() {
  return [](double a, double b) { return cplx(std::sqrt(1.0 + a * a + b * b), 0.0); };
}
Symbol inv_bracket() {
  return [](double a, double b) { return cplx(1.0 / std::sqrt(1.0 + a * a + b * b), 0.0); };
}
Symbol abs_sq() {
  return [](double a, double b) { return cplx(a * a + b * b, 0.0); };
}
Symbol i_xi(int axis) {
  if (axis != 1 && axis != 2) throw SymbolError("i_xi axis must be 1 or 2");
  return [axis](double a, double b) { return cplx(0.0, axis == 1 ? a : b); };
}
Symbol inv_abs() {
  return [](double a, double b) { return cplx(1.0 / std::hypot(a, b), 0.0); };
}
}  // namespace symbols

Spectrum multiplier(const Spectrum& s, const Symbol& symbol) {
  Spectrum out = s;
  out.for_each([&](double x1, double x2, cplx& c) {
    const cplx m = symbol(x1, x2);
    if (!std::isfinite(m.real()) || !std::isfinite(m.imag()))
      throw SymbolError("symbol is not finite at lattice frequency (" + std::to_string(x1) +
                        ", " + std::to_string(x2) + ")");
    c *= m;
  });
  zero_nyquist(out);
  return out;
}

RealField derivative(const RealField& u, int axis) {
  return inverse_ft(multiplier(forward_ft(u), symbols::i_xi(axis)));
}

RealField laplacian(const RealField& u) {
  return inverse_ft(multiplier(forward_ft(u), symbols::abs_sq())) * -1.0;
}

double cutoff_psi(double r) {
  r = std::abs(r);
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double a = std::exp(-1.0 / (2.0 - r));
  const double b = std::exp(-1.0 / (r - 1.0));
  return a / (a + b);
}

double cutoff_phi(double r) { return cutoff_psi(r) - cutoff_psi(2.0 * r); }

double cutoff_phi_k(double r, int k) {
  return cutoff_psi(std::ldexp(r, -k)) - cutoff_psi(std::ldexp(r, 1 - k));
}

double cutoff_phi_le(double r, int k) { return cutoff_psi(std::ldexp(r, -k)); }

double partition_sum(double r) {
  double s = 0.0;
  for (int k = -kBandLimit; k <= kBandLimit; ++k) s += cutoff_phi_k(r, k);
  return s;
}

Spectrum lp_project(const Spectrum& s, int k) {
  return radial_filter(s, [k](double r) { return cutoff_phi_k(r, k); });
}

double lowfreq_weight(double eta_abs, double t, double p) {
  return cutoff_psi(eta_abs * std::pow(bracket(t), p));
}

std::pair<Spectrum, Spectrum> lowfreq_split(const Spectrum& s, double t, double p) {
  Spectrum low = s;
  low.for_each([&](double x1, double x2, cplx& c) { c *= lowfreq_weight(std::hypot(x1, x2), t, p); });
  Spectrum high = s - low;
  return {std::move(low), std::move(high)};
}

Spectrum dealias(const Spectrum& s, double fraction) {
  Spectrum out = s;
  const double cut = fraction * s.grid().nyquist();
  // tolerance keeps modes sitting exactly on the cut despite rounding in fraction * nyquist
  const double tol = 1e-9 * s.grid().frequency_step();
  out.for_each([&](double x1, double x2, cplx& c) {
    if (std::max(std::abs(x1), std::abs(x2)) > cut + tol) c = 0.0;
  });
  return out;
}

RealField dealiased_product(const RealField& a, const RealField& b, double fraction) {
  return inverse_ft(dealias(forward_ft(product(a, b)), fraction));
}

}  // namespace kgz
