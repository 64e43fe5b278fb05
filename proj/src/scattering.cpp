#include "kgz/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "kgz/diagnostics.hpp"
#include "kgz/errors.hpp"
#include "kgz/parallel.hpp"

namespace kgz {

namespace {

constexpr cplx kI{0.0, 1.0};

double brk(double x1, double x2) { return std::sqrt(1.0 + x1 * x1 + x2 * x2); }

Spectrum phased(Spectrum s, int sign, double t) {
  s.for_each([&](double x1, double x2, cplx& c) { c *= std::polar(1.0, sign * t * brk(x1, x2)); });
  return s;
}

void check_sign(int sign) {
  if (sign != 1 && sign != -1) throw DomainError("profile sign must be +1 or -1");
}

double prefactor(const Vec2& xi, ThetaNormalization norm) {
  const double b = brk(xi[0], xi[1]);
  return (norm == ThetaNormalization::Printed ? 2.0 * kPi * kPi : 0.5) / b;
}

Vec2 ray(double s, const Vec2& xi) {
  const double b = brk(xi[0], xi[1]);
  return {s * xi[0] / b, s * xi[1] / b};
}

// l_L(s, x) on the lattice: (1 / 4L^2) sum psi(|eta| <s>^p) l^(s, eta) e^{i x.eta}.
class LatticeLow {
 public:
  LatticeLow(const FreeWaveData& data, double s, double p) : g_(data.grid()) {
    const double cut = 2.0 * std::pow(bracket(s), -p);
    const double h = g_.frequency_step();
    r_ = std::min(static_cast<int>(std::floor(cut / h)), g_.points() / 2 - 1);
    const int w = 2 * r_ + 1;
    c_.assign(static_cast<std::size_t>(w) * w, cplx{});
    const double scale = 1.0 / (4.0 * g_.half_width() * g_.half_width());
    for (int k1 = -r_; k1 <= r_; ++k1)
      for (int k2 = -r_; k2 <= r_; ++k2) {
        const double a = h * std::hypot(k1, k2);
        const double wgt = lowfreq_weight(a, s, p);
        if (wgt == 0.0) continue;
        const std::size_t at = g_.index(g_.slot(k1), g_.slot(k2));
        const cplx v = free_wave_mode(data.n0_hat.coeffs()[at], data.n1_hat.coeffs()[at], a, s - data.t0).first;
        c_[static_cast<std::size_t>(k1 + r_) * w + (k2 + r_)] = scale * wgt * v;
      }
  }

  double operator()(const Vec2& x) const {
    const int w = 2 * r_ + 1;
    const double h = g_.frequency_step();
    std::vector<cplx> e1(w), e2(w);
    for (int k = -r_; k <= r_; ++k) {
      e1[k + r_] = std::polar(1.0, x[0] * k * h);
      e2[k + r_] = std::polar(1.0, x[1] * k * h);
    }
    double acc = 0.0;
    for (int a = 0; a < w; ++a) {
      cplx row = 0.0;
      for (int b = 0; b < w; ++b) row += c_[static_cast<std::size_t>(a) * w + b] * e2[b];
      acc += (row * e1[a]).real();
    }
    return acc;
  }

 private:
  SpectralGrid g_;
  int r_ = 0;
  std::vector<cplx> c_;
};

// l_L(s, x) from the DTFT of the data samples, eta = v <s>^{-p}, tensor
// Gauss-Legendre on four panels per axis of [-2, 2].
class ContinuumLow {
 public:
  ContinuumLow(const FreeWaveData& data, int nodes) : g_(data.grid()), t0_(data.t0) {
    if (nodes < 4 || nodes % 4 != 0) throw DomainError("continuum quadrature needs a multiple of 4 nodes");
    const int per = nodes / 4;
    std::vector<double> x(per), w(per);
    for (int i = 0; i < per; ++i) {  // Newton on the Legendre polynomial of degree per
      double z = std::cos(kPi * (i + 0.75) / (per + 0.5)), dp = 1.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= per; ++k) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = per * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-15) break;
      }
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    for (int panel = 0; panel < 4; ++panel)
      for (int i = 0; i < per; ++i) {
        v_.push_back(-2.0 + panel + 0.5 * (x[i] + 1.0));
        wv_.push_back(0.5 * w[i]);
      }
    crop(data);
  }

  // Prepares the weighted integrand at time s; afterwards value(x) is l_L(s, x).
  void prepare(double s, double p) {
    c_ = std::pow(bracket(s), -p);
    const std::size_t q = v_.size();
    const auto h0 = dtft(n0_), h1 = dtft(n1_);
    coef_.assign(q * q, cplx{});
    for (std::size_t a = 0; a < q; ++a)
      for (std::size_t b = 0; b < q; ++b) {
        const double r = std::hypot(v_[a], v_[b]);
        const double psi = cutoff_psi(r);
        if (psi == 0.0) continue;
        const cplx l = free_wave_mode(h0[a * q + b], h1[a * q + b], c_ * r, s - t0_).first;
        coef_[a * q + b] = wv_[a] * wv_[b] * psi * l * (c_ * c_ / (4.0 * kPi * kPi));
      }
  }

  double value(const Vec2& x) const {
    const std::size_t q = v_.size();
    std::vector<cplx> e1(q), e2(q);
    for (std::size_t a = 0; a < q; ++a) {
      e1[a] = std::polar(1.0, c_ * x[0] * v_[a]);
      e2[a] = std::polar(1.0, c_ * x[1] * v_[a]);
    }
    double acc = 0.0;
    for (std::size_t a = 0; a < q; ++a) {
      cplx row = 0.0;
      for (std::size_t b = 0; b < q; ++b) row += coef_[a * q + b] * e2[b];
      acc += (row * e1[a]).real();
    }
    return acc;
  }

 private:
  void crop(const FreeWaveData& data) {
    const int n = g_.points();
    double peak = 0.0;
    for (std::size_t i = 0; i < g_.size(); ++i)
      peak = std::max({peak, std::abs(data.n0.values[i]), std::abs(data.n1.values[i])});
    int lo1 = n, hi1 = -1, lo2 = n, hi2 = -1;
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2)
        if (std::max(std::abs(data.n0(i1, i2)), std::abs(data.n1(i1, i2))) > 1e-14 * peak) {
          lo1 = std::min(lo1, i1), hi1 = std::max(hi1, i1);
          lo2 = std::min(lo2, i2), hi2 = std::max(hi2, i2);
        }
    if (hi1 < 0) lo1 = hi1 = lo2 = hi2 = 0;
    for (int i1 = lo1; i1 <= hi1; ++i1) x1_.push_back(g_.coordinate(i1));
    for (int i2 = lo2; i2 <= hi2; ++i2) x2_.push_back(g_.coordinate(i2));
    for (int i1 = lo1; i1 <= hi1; ++i1)
      for (int i2 = lo2; i2 <= hi2; ++i2) {
        n0_.push_back(peak > 0 ? data.n0(i1, i2) : 0.0);
        n1_.push_back(peak > 0 ? data.n1(i1, i2) : 0.0);
      }
  }

  // dx^2 sum u(x) e^{-i x.eta} at eta = c (v_a, v_b)
  std::vector<cplx> dtft(const std::vector<double>& u) const {
    const std::size_t q = v_.size(), k1 = x1_.size(), k2 = x2_.size();
    std::vector<cplx> a1(q * k1), a2(q * k2);
    for (std::size_t a = 0; a < q; ++a) {
      for (std::size_t i = 0; i < k1; ++i) a1[a * k1 + i] = std::polar(1.0, -c_ * v_[a] * x1_[i]);
      for (std::size_t i = 0; i < k2; ++i) a2[a * k2 + i] = std::polar(1.0, -c_ * v_[a] * x2_[i]);
    }
    std::vector<cplx> mid(k1 * q, cplx{});
    for (std::size_t i = 0; i < k1; ++i)
      for (std::size_t b = 0; b < q; ++b) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < k2; ++j) acc += u[i * k2 + j] * a2[b * k2 + j];
        mid[i * q + b] = acc;
      }
    std::vector<cplx> out(q * q, cplx{});
    const double w = g_.cell_area();
    for (std::size_t a = 0; a < q; ++a)
      for (std::size_t b = 0; b < q; ++b) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < k1; ++i) acc += a1[a * k1 + i] * mid[i * q + b];
        out[a * q + b] = w * acc;
      }
    return out;
  }

  SpectralGrid g_;
  double t0_;
  std::vector<double> v_, wv_, x1_, x2_, n0_, n1_;
  std::vector<cplx> coef_;
  double c_ = 1.0;
};

std::vector<double> lattice_rates(double s, const std::vector<Vec2>& xis, const FreeWaveData& data,
                                  const ThetaOptions& opt) {
  const LatticeLow low(data, s, opt.p);
  std::vector<double> out(xis.size());
  parallel_for(xis.size(), [&](std::size_t j) {
    out[j] = prefactor(xis[j], opt.normalization) * low(ray(s, xis[j]));
  });
  return out;
}

std::vector<double> continuum_rates(ContinuumLow& low, double s, const std::vector<Vec2>& xis,
                                    const ThetaOptions& opt) {
  low.prepare(s, opt.p);
  std::vector<double> out(xis.size());
  parallel_for(xis.size(), [&](std::size_t j) {
    out[j] = prefactor(xis[j], opt.normalization) * low.value(ray(s, xis[j]));
  });
  return out;
}

void check_times(const FreeWaveData& data, const std::vector<double>& times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= data.t0)) throw DomainError("theta requested before t0");
    if (i > 0 && !(times[i] > times[i - 1])) throw DomainError("theta times must increase");
  }
}

PhaseTable lattice_table(const FreeWaveData& data, const std::vector<Vec2>& xis,
                         const std::vector<double>& times, const ThetaOptions& opt) {
  const double h = opt.ds, t0 = data.t0;
  std::vector<long> node(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double k = (times[i] - t0) / (2.0 * h);
    node[i] = std::lround(k);
    if (std::abs(k - node[i]) > 1e-7 * std::max(1.0, k))
      throw DomainError("time " + std::to_string(times[i]) + " is not an even Simpson node of step " +
                        std::to_string(h));
  }
  const long top = times.empty() ? 0 : 2 * node.back() + 4;  // node index, step h, from t0 - 4h
  const std::size_t nx = xis.size();
  // f[i][j] at s = t0 + (i - 4) h
  std::vector<std::vector<double>> f(top + 5);
  for (long i = 0; i <= top + 4; ++i) f[i] = lattice_rates(t0 + (i - 4) * h, xis, data, opt);
  // Theta at even offsets from t0: index e <-> s = t0 + 2 e h, e from -2
  const long emax = top / 2;
  std::vector<std::vector<double>> th(emax + 3, std::vector<double>(nx, 0.0));
  auto at = [&](long e) -> std::vector<double>& { return th[e + 2]; };
  for (long e = 0; e < emax; ++e)
    for (std::size_t j = 0; j < nx; ++j) {
      const long i = 2 * e + 4;
      at(e + 1)[j] = at(e)[j] + h / 3.0 * (f[i][j] + 4.0 * f[i + 1][j] + f[i + 2][j]);
    }
  for (long e = 0; e > -2; --e)
    for (std::size_t j = 0; j < nx; ++j) {
      const long i = 2 * e + 4;
      at(e - 1)[j] = at(e)[j] - h / 3.0 * (f[i - 2][j] + 4.0 * f[i - 1][j] + f[i][j]);
    }
  PhaseTable out;
  out.times = times;
  out.xis = xis;
  out.options = opt;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const long e = node[i];
    out.theta.push_back(at(e));
    std::vector<double> r(nx);
    for (std::size_t j = 0; j < nx; ++j)
      r[j] = (at(e - 2)[j] - 8.0 * at(e - 1)[j] + 8.0 * at(e + 1)[j] - at(e + 2)[j]) / (24.0 * h);
    out.rate.push_back(std::move(r));
  }
  return out;
}

PhaseTable continuum_table(const FreeWaveData& data, const std::vector<Vec2>& xis,
                           const std::vector<double>& times, const ThetaOptions& opt) {
  if (!(data.t0 > 0)) throw DomainError("continuum theta integrates in log s and needs t0 > 0");
  ContinuumLow low(data, opt.gl_nodes);
  const std::size_t nx = xis.size();
  auto integrand = [&](double u) {
    const double s = std::exp(u);
    auto r = continuum_rates(low, s, xis, opt);
    for (double& v : r) v *= s;
    return r;
  };
  PhaseTable out;
  out.times = times;
  out.xis = xis;
  out.options = opt;
  const double u0 = std::log(data.t0), hu = opt.log_step;
  std::vector<double> acc(nx, 0.0);
  double u = u0;
  std::vector<double> fu = integrand(u);
  for (double t : times) {
    const double ut = std::log(t);
    while (u + 2.0 * hu <= ut) {
      const auto fm = integrand(u + hu), fe = integrand(u + 2.0 * hu);
      for (std::size_t j = 0; j < nx; ++j) acc[j] += hu / 3.0 * (fu[j] + 4.0 * fm[j] + fe[j]);
      u += 2.0 * hu;
      fu = fe;
    }
    std::vector<double> th = acc;
    if (ut > u) {  // final partial panel
      const double w = ut - u;
      const auto fm = integrand(u + 0.5 * w), fe = integrand(ut);
      for (std::size_t j = 0; j < nx; ++j) th[j] += w / 6.0 * (fu[j] + 4.0 * fm[j] + fe[j]);
    }
    out.theta.push_back(std::move(th));
    out.rate.push_back(continuum_rates(low, t, xis, opt));
  }
  return out;
}

}  // namespace

Spectrum profile_f(const RealField& u, const RealField& ut, double t, int sign) {
  check_sign(sign);
  Spectrum a = forward_ft(ut);
  const Spectrum b = forward_ft(u);
  std::size_t i = 0;
  a.for_each([&](double x1, double x2, cplx& c) {
    const double w = brk(x1, x2);
    c = std::polar(1.0, sign * t * w) * (c - static_cast<double>(sign) * kI * w * b.coeffs()[i++]);
  });
  return a;
}

std::array<Spectrum, 2> profile_f(const FieldState& s, int sign) {
  return {profile_f(s.E[0], s.Et[0], s.t, sign), profile_f(s.E[1], s.Et[1], s.t, sign)};
}

RealField reconstruct_from_profiles(const Spectrum& f_plus, const Spectrum& f_minus, double t) {
  Spectrum out = phased(f_plus, -1, t) - phased(f_minus, 1, t);
  out.for_each([&](double x1, double x2, cplx& c) { c *= kI / (2.0 * brk(x1, x2)); });
  return inverse_ft(out);
}

std::array<Spectrum, 2> profile_h(const FieldState& s, int sign) {
  std::array<Spectrum, 2> out;
  for (int c = 0; c < 2; ++c) {
    const RealField ne = product(s.n, s.E[c]);
    const RealField dne = product(s.nt, s.E[c]) + product(s.n, s.Et[c]);
    out[c] = profile_f(ne, dne, s.t, sign);
  }
  return out;
}

std::array<RealField, 2> h_source(const FieldState& s) {
  const RealField rho = product(s.E[0], s.E[0]) + product(s.E[1], s.E[1]);
  const RealField lap_rho = laplacian(rho);
  const RealField n1 = derivative(s.n, 1), n2 = derivative(s.n, 2);
  std::array<RealField, 2> out;
  for (int c = 0; c < 2; ++c) {
    const RealField e1 = derivative(s.E[c], 1), e2 = derivative(s.E[c], 2);
    RealField src = product(lap_rho, s.E[c]) - product(product(s.n, s.n), s.E[c]);
    // -2 d_alpha n d^alpha E = 2 (n_t E_t - grad n . grad E)
    src += 2.0 * (product(s.nt, s.Et[c]) - product(n1, e1) - product(n2, e2));
    out[c] = std::move(src);
  }
  return out;
}

std::vector<double> theta_rate(double s, const std::vector<Vec2>& xis, const FreeWaveData& data,
                               const ThetaOptions& opt) {
  if (opt.evaluator == ThetaEvaluator::Lattice) return lattice_rates(s, xis, data, opt);
  ContinuumLow low(data, opt.gl_nodes);
  return continuum_rates(low, s, xis, opt);
}

std::size_t PhaseTable::time_index(double t) const {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return i;
  throw RangeError("time " + std::to_string(t) + " not in the phase table");
}

PhaseTable phase_table(const FreeWaveData& data, const std::vector<Vec2>& xis,
                       const std::vector<double>& times, const ThetaOptions& opt) {
  check_times(data, times);
  if (!(opt.ds > 0) || !(opt.log_step > 0)) throw DomainError("theta steps must be positive");
  return opt.evaluator == ThetaEvaluator::Lattice ? lattice_table(data, xis, times, opt)
                                                  : continuum_table(data, xis, times, opt);
}

double theta(double t, const Vec2& xi, const FreeWaveData& data, const ThetaOptions& opt) {
  if (!(t >= data.t0)) throw DomainError("theta requested before t0");
  if (t == data.t0) return 0.0;
  ThetaOptions o = opt;
  if (o.evaluator == ThetaEvaluator::Lattice) {  // land t on an even node
    const double pairs = std::max(1.0, std::ceil((t - data.t0) / (2.0 * opt.ds)));
    o.ds = (t - data.t0) / (2.0 * pairs);
  }
  return phase_table(data, {xi}, {t}, o).theta[0][0];
}

std::vector<Vec2> radial_xi_table(const SpectralGrid& g, int count, double max_abs) {
  const int kmax = static_cast<int>(std::floor(max_abs / g.frequency_step() + 1e-9));
  if (count < 1 || kmax < count) throw DomainError("too few lattice points below max_abs for the radial table");
  std::vector<Vec2> out{{0.0, 0.0}};
  int prev = 0;
  for (int j = 0; j < count; ++j) {
    const double e = count == 1 ? 1.0 : static_cast<double>(j) / (count - 1);
    int k = static_cast<int>(std::lround(std::pow(kmax, e)));
    k = std::max(k, prev + 1);
    prev = k;
    out.push_back({k * g.frequency_step(), 0.0});
  }
  return out;
}

std::vector<Vec2> disc_xi_table(const SpectralGrid& g, double radius, std::vector<std::size_t>* slots) {
  std::vector<Vec2> out;
  if (slots) slots->clear();
  for (int j1 = 0; j1 < g.points(); ++j1)
    for (int j2 = 0; j2 < g.points(); ++j2) {
      const double x1 = g.frequency(j1), x2 = g.frequency(j2);
      if (std::hypot(x1, x2) >= radius) continue;
      out.push_back({x1, x2});
      if (slots) slots->push_back(g.index(j1, j2));
    }
  return out;
}

std::vector<std::size_t> lattice_slots(const SpectralGrid& g, const std::vector<Vec2>& xis) {
  std::vector<std::size_t> out;
  const double h = g.frequency_step();
  for (const Vec2& xi : xis) {
    const long k1 = std::lround(xi[0] / h), k2 = std::lround(xi[1] / h);
    if (std::abs(xi[0] - k1 * h) > 1e-9 * h || std::abs(xi[1] - k2 * h) > 1e-9 * h ||
        std::max(std::abs(k1), std::abs(k2)) >= g.points() / 2)
      throw DomainError("frequency is not a lattice point");
    out.push_back(g.index(g.slot(static_cast<int>(k1)), g.slot(static_cast<int>(k2))));
  }
  return out;
}

Spectrum modified_profile(const Spectrum& f_plus, const std::vector<std::size_t>& slots,
                          const std::vector<double>& theta) {
  if (slots.size() != theta.size()) throw DomainError("modified_profile: slots and phases differ in length");
  Spectrum out = f_plus;
  for (std::size_t i = 0; i < slots.size(); ++i) out.coeffs()[slots[i]] *= std::polar(1.0, theta[i]);
  return out;
}

ResidualTerms residual_terms(const FieldState& s, const RealField& m, const FreeWaveData& data,
                             int component, double p) {
  if (component != 0 && component != 1) throw DomainError("E component must be 0 or 1");
  const double t = s.t;
  const RealField& e = s.E[component];
  const RealField& et = s.Et[component];
  const Spectrum ell_hat = free_wave_spectra(data, t).first;
  const auto [low_hat, high_hat] = lowfreq_split(ell_hat, t, p);
  const RealField ell = inverse_ft(ell_hat), ell_low = inverse_ft(low_hat), ell_high = inverse_ft(high_hat);
  const RealField lap_m = laplacian(m);

  ResidualTerms r;
  r.f_plus = profile_f(e, et, t, 1);
  const Spectrum f_minus = profile_f(e, et, t, -1);

  auto pulled = [&](const Spectrum& f, int sign) {  // IFT(e^{sign it<eta>} f / <eta>)
    Spectrum g = phased(f, sign, t);
    g.for_each([&](double x1, double x2, cplx& c) { c /= brk(x1, x2); });
    return inverse_ft_complex(g);
  };
  const ComplexField wm = pulled(f_minus, 1), wp = pulled(r.f_plus, -1);

  r.M[0] = phased(forward_ft(product(ell, wm)), 1, t) * cplx(0.0, 0.5);
  r.M[1] = phased(forward_ft(product(ell_high, wp)), 1, t) * cplx(0.0, -0.5);
  Spectrum m3 = phased(forward_ft(product(ell_low, wp)), 1, t);
  {
    const LatticeLow low(data, t, p);
    const SpectralGrid& g = s.E[0].grid;
    for (int j1 = 0; j1 < g.points(); ++j1)
      for (int j2 = 0; j2 < g.points(); ++j2) {
        const Vec2 xi{g.frequency(j1), g.frequency(j2)};
        const std::size_t at = g.index(j1, j2);
        const cplx fp = r.f_plus.coeffs()[at];
        if (fp == cplx{}) continue;
        m3.coeffs()[at] -= fp * low(ray(t, xi)) / brk(xi[0], xi[1]);
      }
  }
  r.M[2] = m3 * cplx(0.0, -0.5);
  r.M[3] = phased(forward_ft(product(lap_m, e)), 1, t) * cplx(-1.0, 0.0);
  r.dt_f_plus = phased(forward_ft(product(ell + lap_m, e)), 1, t) * cplx(-1.0, 0.0);
  return r;
}

double identity_check(const ResidualTerms& r, const std::vector<std::size_t>& slots,
                      const std::vector<double>& rate) {
  if (slots.size() != rate.size()) throw DomainError("identity_check: slots and rates differ in length");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const std::size_t at = slots[i];
    const cplx sum = r.M[0].coeffs()[at] + r.M[1].coeffs()[at] + r.M[2].coeffs()[at] + r.M[3].coeffs()[at];
    const cplx lhs = r.dt_f_plus.coeffs()[at] + kI * rate[i] * r.f_plus.coeffs()[at];
    num += std::norm(lhs - sum);
    den += std::norm(sum);
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : INFINITY;
  return std::sqrt(num / den);
}

std::vector<WindowIncrement> cauchy_increments(const TimedSpectra& series, int m_lo, int m_hi,
                                               int k_lo, int k_hi, double c_e, double d_e) {
  if (series.times.size() != series.profiles.size()) throw DomainError("series times and profiles differ");
  if (series.times.empty()) throw RangeError("empty profile series");
  if (k_lo > k_hi || m_lo > m_hi) throw DomainError("empty band or window range");
  const SpectralGrid& g = series.profiles[0][0].grid();
  // modes inside the support of phi_{k_hi}, with per-band weights
  std::vector<std::size_t> slots;
  std::vector<std::vector<double>> wk(k_hi - k_lo + 1);
  const double rmax = std::ldexp(2.0, k_hi);
  for (int j1 = 0; j1 < g.points(); ++j1)
    for (int j2 = 0; j2 < g.points(); ++j2) {
      const double r = std::hypot(g.frequency(j1), g.frequency(j2));
      if (r >= rmax || r == 0.0) continue;
      slots.push_back(g.index(j1, j2));
      for (int k = k_lo; k <= k_hi; ++k)
        wk[k - k_lo].push_back(std::exp2(-c_e * std::min(k, 0) - d_e * std::max(k, 0)) * cutoff_phi_k(r, k));
    }
  const double norm_w = std::sqrt(g.spectral_weight());
  std::vector<WindowIncrement> out;
  for (int m = m_lo; m <= m_hi; ++m) {
    WindowIncrement w{m, std::ldexp(1.0, m) - 2.0, std::ldexp(1.0, m + 1) + 2.0, 0.0,
                      std::vector<double>(k_hi - k_lo + 1, 0.0)};
    const double tol = 1e-9 * w.t_hi;
    // nothing exists before the Cauchy time t0 = 1
    if (series.times.front() > std::max(w.t_lo, 1.0) + tol)
      throw RangeError("window m = " + std::to_string(m) + " starts before the first snapshot");
    if (series.times.back() < w.t_hi - tol)
      throw RangeError("window m = " + std::to_string(m) + " ends after the last snapshot");
    std::vector<std::size_t> in;
    for (std::size_t i = 0; i < series.times.size(); ++i)
      if (series.times[i] >= w.t_lo - tol && series.times[i] <= w.t_hi + tol) in.push_back(i);
    for (std::size_t a = 0; a < in.size(); ++a)
      for (std::size_t b = a + 1; b < in.size(); ++b) {
        const auto& p = series.profiles[in[a]];
        const auto& q = series.profiles[in[b]];
        for (std::size_t k = 0; k < wk.size(); ++k) {
          double acc = 0.0;
          for (std::size_t i = 0; i < slots.size(); ++i) {
            const double wt = wk[k][i];
            if (wt == 0.0) continue;
            const std::size_t at = slots[i];
            acc += wt * wt * (std::norm(q[0].coeffs()[at] - p[0].coeffs()[at]) +
                              std::norm(q[1].coeffs()[at] - p[1].coeffs()[at]));
          }
          const double v = norm_w * std::sqrt(acc);
          w.per_band[k] = std::max(w.per_band[k], v);
          w.max_increment = std::max(w.max_increment, v);
        }
      }
    out.push_back(std::move(w));
  }
  return out;
}

namespace {

// \int_0^a sin^2(u) / u du on panels of width pi
double sin2_over_u(double a) {
  using GL = boost::math::quadrature::gauss<double, 20>;
  auto f = [](double u) { return u == 0.0 ? 0.0 : std::sin(u) * std::sin(u) / u; };
  double acc = 0.0;
  for (double lo = 0.0; lo < a; lo += kPi) acc += GL::integrate(f, lo, std::min(a, lo + kPi));
  return acc;
}

Fit log_fit(const std::vector<double>& t, const std::vector<double>& y, double from) {
  std::vector<double> ft, fy;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= from) ft.push_back(t[i]), fy.push_back(y[i]);
  return fit_rate(ft, fy, FitModel::Log);
}

}  // namespace

double cascade_oracle_b(double mu, double t0, const std::vector<double>& times) {
  // (2 pi)^{-2} \int_{|xi|<=1} sin^2(tau|xi|)/|xi|^2 mu^2 dxi = mu^2/(2 pi) \int_0^tau sin^2(u)/u du
  std::vector<double> y;
  for (double t : times) y.push_back(mu * mu / (2.0 * kPi) * sin2_over_u(std::abs(t - t0)));
  return fit_rate(times, y, FitModel::Log).b;
}

CascadeResult cascade_free(const FreeWaveData& data, const std::vector<double>& times, double fit_from) {
  CascadeResult r;
  for (double t : times) {
    const auto [l, lt] = free_wave_spectra(data, t);
    double grad = 0.0;
    Spectrum lc = l;
    lc.for_each([&](double x1, double x2, cplx& c) { c *= std::hypot(x1, x2); });
    grad = lc.norm();
    r.t.push_back(t);
    r.norm_n.push_back(l.norm());
    r.norm_dn.push_back(std::hypot(lt.norm(), grad));
  }
  std::vector<double> sq, ft;
  for (std::size_t i = 0; i < r.t.size(); ++i) sq.push_back(r.norm_n[i] * r.norm_n[i]);
  const Fit f = log_fit(r.t, sq, fit_from);
  r.fit_a = f.a;
  r.fit_b = f.b;
  for (double t : r.t)
    if (t >= fit_from) ft.push_back(t);
  r.oracle_b = data.moment() == 0.0 ? 0.0 : cascade_oracle_b(data.moment(), data.t0, ft);
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    if (std::abs(r.t[i] - 4.0) < 1e-9) r.dn_at_4 = r.norm_dn[i];
    r.dn_sup = std::max(r.dn_sup, r.norm_dn[i]);
  }
  return r;
}

CascadeResult cascade_kgz(const FieldState& initial, const EvolveParams& p, double fit_from,
                          const SnapshotObserver& also) {
  const FreeWaveData data = wave_data(initial);
  if (std::abs(data.moment()) <= 1e-12 * (1.0 + l2_norm(data.n1))) throw ConfigError("cascade experiment needs a nonzero moment (use the dichotomy runner)");
  CascadeResult r;
  evolve(initial, p, [&](const FieldState& s, const RealField* m, const RealField* mt) {
    if (also) also(s, m, mt);
    const Spectrum nh = forward_ft(s.nt);
    Spectrum g = forward_ft(s.n);
    g.for_each([&](double x1, double x2, cplx& c) { c *= std::hypot(x1, x2); });
    r.t.push_back(s.t);
    r.norm_n.push_back(l2_norm(s.n));
    r.norm_dn.push_back(std::hypot(nh.norm(), g.norm()));
  });
  std::vector<double> sq, ft;
  for (double v : r.norm_n) sq.push_back(v * v);
  const Fit f = log_fit(r.t, sq, fit_from);
  r.fit_a = f.a;
  r.fit_b = f.b;
  for (double t : r.t)
    if (t >= fit_from) ft.push_back(t);
  r.oracle_b = cascade_oracle_b(data.moment(), data.t0, ft);
  double best = INFINITY;
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    if (std::abs(r.t[i] - 4.0) < best) best = std::abs(r.t[i] - 4.0), r.dn_at_4 = r.norm_dn[i];
    r.dn_sup = std::max(r.dn_sup, r.norm_dn[i]);
  }
  return r;
}

ThetaGrowth theta_growth(const PhaseTable& table, double mu, double t_lo, double t_hi) {
  if (mu == 0.0) throw DomainError("theta growth ratio needs a nonzero moment");
  const double expect = table.options.normalization == ThetaNormalization::Printed ? kPi * mu : mu / (4.0 * kPi);
  ThetaGrowth g;
  for (std::size_t j = 0; j < table.xis.size(); ++j) {
    std::vector<double> t, y;
    for (std::size_t i = 0; i < table.times.size(); ++i)
      if (table.times[i] >= t_lo && table.times[i] <= t_hi) t.push_back(table.times[i]), y.push_back(table.theta[i][j]);
    const Fit f = fit_rate(t, y, FitModel::Log);
    g.slopes.push_back(f.b);
    g.ratios.push_back(f.b / expect);
  }
  return g;
}

}  // namespace kgz
