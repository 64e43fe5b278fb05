#include "kgz/special.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "kgz/errors.hpp"
#include "kgz/spectral.hpp"

namespace kgz {

namespace {

constexpr long double kPiL = 3.141592653589793238462643383279502884L;

long double series_jn(int n, long double s) {
  const long double half = s / 2.0L;
  long double term = 1.0L;
  for (int i = 1; i <= n; ++i) term *= half / i;
  const long double q = -half * half;
  long double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * (k + n));
    sum += term;
    if (std::fabs(term) < 1e-24L * std::fabs(sum) && k > 2) break;
  }
  return sum;
}

// Hankel expansion, summed until the terms stop decreasing.
long double hankel_jn(int n, long double s) {
  const long double mu = 4.0L * n * n;
  long double p = 1.0L, q = 0.0L;
  long double u = 1.0L;  // a_k / s^k
  long double prev = 1.0L;
  for (int k = 1; k < 400; ++k) {
    const long double odd = 2.0L * k - 1.0L;
    u *= (mu - odd * odd) / (8.0L * k * s);
    if (std::fabs(u) >= std::fabs(prev) || u == 0.0L) break;
    // signs: P = a0 - a2/s^2 + a4/s^4 ..., Q = a1/s - a3/s^3 ...
    const long double signed_u = ((k / 2) % 2 == 0) ? u : -u;
    if (k % 2 == 0) p += signed_u; else q += signed_u;
    prev = u;
    if (std::fabs(u) < 1e-24L) break;
  }
  const long double chi = s - (0.5L * n + 0.25L) * kPiL;
  return std::sqrt(2.0L / (kPiL * s)) * (p * std::cos(chi) - q * std::sin(chi));
}

double bessel_jn(int n, double s) {
  if (!(s >= 0.0)) throw DomainError("Bessel function argument must be >= 0, got " + std::to_string(s));
  const long double x = s;
  return static_cast<double>(s <= kBesselSplit ? series_jn(n, x) : hankel_jn(n, x));
}

double simpson(double a, double b, int n, auto&& f) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace

double bessel_j0(double s) { return bessel_jn(0, s); }
double bessel_j1(double s) { return bessel_jn(1, s); }
double bessel_j2(double s) { return bessel_jn(2, s); }
double bessel_j0_prime(double s) { return -bessel_j1(s); }
double bessel_j0_second(double s) { return 0.5 * (bessel_j2(s) - bessel_j0(s)); }

double asymptotic_gap(double s) {
  if (!(s >= 4.0)) throw DomainError("asymptotic_gap needs s >= 4, got " + std::to_string(s));
  const long double x = s;
  const long double j0 = s <= kBesselSplit ? series_jn(0, x) : hankel_jn(0, x);
  const long double lead = std::sqrt(2.0L / (kPiL * x)) * std::cos(x - kPiL / 4.0L);
  return static_cast<double>(std::fabs(j0 - lead) * x * std::sqrt(x));
}

void QuadratureSpec::validate() const {
  if (!(step > 0.0)) throw DomainError("quadrature step must be positive");
  if (!(truncation > 0.0)) throw DomainError("quadrature truncation must be positive");
  if (eps_schedule.size() < 3) throw DomainError("eps schedule needs at least 3 values");
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    if (!(eps_schedule[i] > 0.0)) throw DomainError("eps schedule values must be positive");
    if (i && !(eps_schedule[i] < eps_schedule[i - 1]))
      throw DomainError("eps schedule must be strictly decreasing");
  }
}

double sine_bessel_regularized(double a, double b, double eps, const QuadratureSpec& spec) {
  if (!(a > b) || !(b > 0.0))
    throw DomainError("sine-Bessel integral requires a > b > 0 (a = " + std::to_string(a) +
                      ", b = " + std::to_string(b) + ")");
  if (!(eps > 0.0)) throw DomainError("regularization eps must be positive");
  const double upper = spec.truncation / eps;
  const int n = static_cast<int>(std::ceil(upper / spec.step));
  return simpson(0.0, upper, n, [&](double s) {
    return std::sin(a * s) * bessel_j0(b * s) * std::exp(-eps * s);
  });
}

SineBesselResult sine_bessel_integral(double a, double b, const QuadratureSpec& spec) {
  spec.validate();
  SineBesselResult out;
  const auto& e = spec.eps_schedule;
  for (double eps : e) out.regularized.push_back(sine_bessel_regularized(a, b, eps, spec));
  for (std::size_t i = 0; i + 1 < e.size(); ++i)
    out.extrapolants.push_back((e[i] * out.regularized[i + 1] - e[i + 1] * out.regularized[i]) /
                               (e[i] - e[i + 1]));
  // Neville's scheme to eps = 0 over the whole schedule
  std::vector<double> tab = out.regularized;
  const std::size_t m = e.size();
  for (std::size_t level = 1; level < m; ++level) {
    for (std::size_t i = 0; i + level < m; ++i)
      tab[i] = (e[i] * tab[i + 1] - e[i + level] * tab[i]) / (e[i] - e[i + level]);
    if (level == 2) out.second_level.assign(tab.begin(), tab.begin() + (m - 2));
  }
  out.value = tab[0];
  return out;
}

namespace {

// Derivatives of f(zeta) = sqrt(c + |zeta|^2) in zeta.
struct RootDerivs {
  double f;
  std::array<double, 2> d1;
  std::array<std::array<double, 2>, 2> d2;
  std::array<std::array<std::array<double, 2>, 2>, 2> d3;
};

RootDerivs root_derivs(double c, const Vec2& z) {
  RootDerivs r{};
  r.f = std::sqrt(c + z[0] * z[0] + z[1] * z[1]);
  const double f = r.f, f3 = f * f * f, f5 = f3 * f * f;
  for (int i = 0; i < 2; ++i) {
    r.d1[i] = z[i] / f;
    for (int j = 0; j < 2; ++j) {
      r.d2[i][j] = (i == j ? 1.0 / f : 0.0) - z[i] * z[j] / f3;
      for (int k = 0; k < 2; ++k)
        r.d3[i][j][k] = -((i == j) * z[k] + (i == k) * z[j] + (j == k) * z[i]) / f3 +
                        3.0 * z[i] * z[j] * z[k] / f5;
    }
  }
  return r;
}

double frob(const std::array<double, 2>& v) { return std::hypot(v[0], v[1]); }
double frob(const std::array<std::array<double, 2>, 2>& m) {
  double s = 0.0;
  for (auto& row : m)
    for (double x : row) s += x * x;
  return std::sqrt(s);
}
double frob(const std::array<std::array<std::array<double, 2>, 2>, 2>& t) {
  double s = 0.0;
  for (auto& m : t)
    for (auto& row : m)
      for (double x : row) s += x * x;
  return std::sqrt(s);
}

}  // namespace

PhaseDerivatives phase_eval(PhaseKind kind, const Vec2& xi, const Vec2& eta, int order) {
  const double s1 = (kind == PhaseKind::Phi1Plus || kind == PhaseKind::Phi1Minus) ? 1.0 : -1.0;
  const double s2 = (kind == PhaseKind::Phi1Plus || kind == PhaseKind::Phi2Plus) ? 1.0 : -1.0;
  const double xi_br = std::sqrt(1.0 + xi[0] * xi[0] + xi[1] * xi[1]);
  const Vec2 zeta{xi[0] - eta[0], xi[1] - eta[1]};
  const double eta_abs = std::hypot(eta[0], eta[1]);

  PhaseDerivatives out;
  const RootDerivs b = root_derivs(1.0, zeta);
  out.value = xi_br + s1 * b.f + s2 * eta_abs;
  if (order <= 0) return out;
  if (eta_abs == 0.0)
    throw SingularPointError("phase derivatives are singular at eta = 0");
  const RootDerivs a = root_derivs(0.0, eta);
  // each eta-derivative of <xi - eta> picks up a factor -1
  for (int i = 0; i < 2; ++i) {
    out.grad[i] = -s1 * b.d1[i] + s2 * a.d1[i];
    for (int j = 0; j < 2; ++j) {
      out.hess[i][j] = s1 * b.d2[i][j] + s2 * a.d2[i][j];
      for (int k = 0; k < 2; ++k) out.third[i][j][k] = -s1 * b.d3[i][j][k] + s2 * a.d3[i][j][k];
    }
  }
  return out;
}

PhaseConstants sample_phase_constants(std::size_t samples, std::uint64_t seed, double radius) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto disc = [&] {
    const double r = radius * std::sqrt(unit(rng)), th = 2.0 * kPi * unit(rng);
    return Vec2{r * std::cos(th), r * std::sin(th)};
  };
  PhaseConstants c;
  c.g1_phi1 = c.g1_phi2 = c.g2_phi1 = c.g2_phi2 = 1e300;
  const PhaseKind phi1[2] = {PhaseKind::Phi1Plus, PhaseKind::Phi1Minus};
  const PhaseKind phi2[2] = {PhaseKind::Phi2Plus, PhaseKind::Phi2Minus};
  for (std::size_t n = 0; n < samples; ++n) {
    const Vec2 xi = disc(), eta = disc();
    const double eta_abs = std::hypot(eta[0], eta[1]);
    if (eta_abs == 0.0) continue;
    const double xb = bracket(std::hypot(xi[0], xi[1]));
    const double zb = bracket(std::hypot(xi[0] - eta[0], xi[1] - eta[1]));
    const double eb = bracket(eta_abs);
    double h1 = 0, h2 = 0, t1 = 0, t2 = 0;
    for (int s = 0; s < 2; ++s) {
      const PhaseDerivatives p1 = phase_eval(phi1[s], xi, eta);
      const PhaseDerivatives p2 = phase_eval(phi2[s], xi, eta);
      c.g1_phi1 = std::min(c.g1_phi1, std::abs(p1.value) / (1.0 / xb + 1.0 / zb));
      c.g1_phi2 = std::min(c.g1_phi2, std::abs(p2.value) * (eb + zb) * (eb + zb) / eta_abs);
      c.g2_phi1 = std::min(c.g2_phi1, frob(p1.grad) * zb * zb);
      c.g2_phi2 = std::min(c.g2_phi2, frob(p2.grad) * zb * zb);
      h1 = std::max(h1, frob(p1.hess));
      h2 = std::max(h2, frob(p2.hess));
      t1 = std::max(t1, frob(p1.third));
      t2 = std::max(t2, frob(p2.third));
    }
    c.g3 = std::max(c.g3, (h1 + h2) / (1.0 / zb + 1.0 / eta_abs));
    c.g4 = std::max(c.g4, (t1 + t2) / (1.0 / (zb * zb) + 1.0 / (eta_abs * eta_abs)));
  }
  return c;
}

double theta_moment_part(double t, double xi_abs, double p, double t0, double moment, double ds) {
  if (!(t >= t0)) throw DomainError("theta requested before t0");
  if (!(ds > 0.0)) throw DomainError("theta step must be positive");
  if (t == t0 || moment == 0.0) return 0.0;
  const double q = xi_abs / bracket(xi_abs);
  using GL = boost::math::quadrature::gauss<double, 30>;
  auto inner = [&](double s) {
    const double c = std::pow(bracket(s), -p);
    auto f = [&](double rho) {
      return cutoff_psi(rho / c) * std::sin((s - t0) * rho) * bessel_j0(s * rho * q);
    };
    double acc = GL::integrate(f, 0.0, c);
    // smooth but steep transition of psi on [c, 2c]
    for (int k = 0; k < 4; ++k) acc += GL::integrate(f, c * (1.0 + 0.25 * k), c * (1.25 + 0.25 * k));
    return acc;
  };
  const int n = std::max(2, static_cast<int>(std::ceil((t - t0) / ds)));
  return kPi * moment / bracket(xi_abs) * simpson(t0, t, n, inner);
}

}  // namespace kgz
