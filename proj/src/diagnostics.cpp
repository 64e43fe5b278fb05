#include "kgz/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "kgz/errors.hpp"

namespace kgz {

namespace {

double radius(const SpectralGrid& g, int i1, int i2) { return std::hypot(g.coordinate(i1), g.coordinate(i2)); }

template <typename Fn>
RealField pointwise(const SpectralGrid& g, Fn&& fn) {
  RealField out(g);
  for (int i1 = 0; i1 < g.points(); ++i1)
    for (int i2 = 0; i2 < g.points(); ++i2) out(i1, i2) = fn(i1, i2);
  return out;
}

}  // namespace

RealField vectorfield_apply(const RealField& u, const RealField& ut, double t, VectorField which) {
  const SpectralGrid& g = u.grid;
  switch (which) {
    case VectorField::D0:
      return ut;
    case VectorField::D1:
      return derivative(u, 1);
    case VectorField::D2:
      return derivative(u, 2);
    case VectorField::Omega: {
      const RealField d1 = derivative(u, 1), d2 = derivative(u, 2);
      return pointwise(g, [&](int i1, int i2) {
        return g.coordinate(i1) * d2(i1, i2) - g.coordinate(i2) * d1(i1, i2);
      });
    }
    case VectorField::L1:
    case VectorField::L2: {
      const int a = which == VectorField::L1 ? 1 : 2;
      const RealField da = derivative(u, a);
      return pointwise(g, [&](int i1, int i2) {
        const double xa = g.coordinate(a == 1 ? i1 : i2);
        return xa * ut(i1, i2) + t * da(i1, i2);
      });
    }
  }
  throw DomainError("unknown vector field");
}

RealField vectorfield_apply(const FieldState& s, int field, VectorField which) {
  switch (field) {
    case 0:
      return vectorfield_apply(s.n, s.nt, s.t, which);
    case 1:
    case 2:
      return vectorfield_apply(s.E[field - 1], s.Et[field - 1], s.t, which);
    default:
      throw DomainError("field index must be 0 (n), 1 or 2 (E components)");
  }
}

double sobolev_norm(const Spectrum& u, double s) {
  const SpectralGrid& g = u.grid();
  double acc = 0.0;
  const int n = g.points();
  for (int j1 = 0; j1 < n; ++j1)
    for (int j2 = 0; j2 < n; ++j2) {
      const double r2 = std::pow(g.frequency(j1), 2) + std::pow(g.frequency(j2), 2);
      acc += std::pow(1.0 + r2, s) * std::norm(u(j1, j2));
    }
  return std::sqrt(acc * g.spectral_weight());
}

double sobolev_norm(const RealField& u, double s) { return sobolev_norm(forward_ft(u), s); }

double weighted_l2(const RealField& u, double t, double gamma, ConeWeight kind) {
  const SpectralGrid& g = u.grid;
  double acc = 0.0;
  for (int i1 = 0; i1 < g.points(); ++i1)
    for (int i2 = 0; i2 < g.points(); ++i2) {
      const double r = radius(g, i1, i2);
      const double d = kind == ConeWeight::TMinusR ? t - r : r - t;
      acc += std::pow(1.0 + d * d, gamma) * u(i1, i2) * u(i1, i2);
    }
  return std::sqrt(acc * g.cell_area());
}

namespace {
double weight(double t, double r, EnvelopeWeight w) {
  switch (w) {
    case EnvelopeWeight::Sharp:
      return std::sqrt(bracket(t + r) * bracket(t - r));
    case EnvelopeWeight::Plus:
      return bracket(t + r);
    case EnvelopeWeight::One:
      return 1.0;
  }
  return 1.0;
}
}  // namespace

double envelope(const RealField& u, double t, EnvelopeWeight w) {
  const SpectralGrid& g = u.grid;
  double m = 0.0;
  for (int i1 = 0; i1 < g.points(); ++i1)
    for (int i2 = 0; i2 < g.points(); ++i2)
      m = std::max(m, std::abs(u(i1, i2)) * weight(t, radius(g, i1, i2), w));
  return m;
}

double envelope(const RealField& e1, const RealField& e2, double t, EnvelopeWeight w) {
  const SpectralGrid& g = e1.grid;
  double m = 0.0;
  for (int i1 = 0; i1 < g.points(); ++i1)
    for (int i2 = 0; i2 < g.points(); ++i2)
      m = std::max(m, std::hypot(e1(i1, i2), e2(i1, i2)) * weight(t, radius(g, i1, i2), w));
  return m;
}

namespace {
Spectrum pm_spectrum(const RealField& u, const RealField& ut, double sign) {
  Spectrum a = forward_ft(ut);
  Spectrum b = forward_ft(u);
  b.for_each([&](double x1, double x2, cplx& c) { c *= cplx(0.0, -sign * bracket(std::hypot(x1, x2))); });
  return a + b;
}
}  // namespace

Spectrum plus_spectrum(const RealField& u, const RealField& ut) { return pm_spectrum(u, ut, 1.0); }
Spectrum minus_spectrum(const RealField& u, const RealField& ut) { return pm_spectrum(u, ut, -1.0); }

double zk_value(const Spectrum& e_plus, int k, double c_e, double d_e) {
  const int km = std::min(k, 0), kp = std::max(k, 0);
  return std::exp2(-c_e * km - d_e * kp) * lp_project(e_plus, k).norm();
}

std::vector<double> zk_series(const std::vector<Spectrum>& e_plus, int k, double c_e, double d_e) {
  std::vector<double> out;
  out.reserve(e_plus.size());
  for (const Spectrum& s : e_plus) out.push_back(zk_value(s, k, c_e, d_e));
  return out;
}

Fit fit_rate(const std::vector<double>& t, const std::vector<double>& f, FitModel model) {
  if (t.size() != f.size()) throw FitError("fit: abscissae and values differ in length");
  if (t.size() < 8) throw FitError("fit: need at least 8 samples, got " + std::to_string(t.size()));
  const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
  if (!(*lo > 0) || *hi < 8.0 * *lo) throw FitError("fit: abscissae must be positive and span a factor 8");
  const std::size_t n = t.size();
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::log(t[i]);
    if (model == FitModel::Power) {
      if (!(f[i] > 0)) throw FitError("fit: power model needs positive data");
      y[i] = std::log(f[i]);
    } else {
      y[i] = f[i];
    }
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0)) throw FitError("fit: degenerate abscissae");
  Fit out;
  out.b = sxy / sxx;
  out.a = my - out.b * mx;
  double rr = 0;
  for (std::size_t i = 0; i < n; ++i) rr += std::pow(y[i] - out.a - out.b * x[i], 2);
  out.rms = std::sqrt(rr / n);
  return out;
}

namespace {

// Gamma = c^alpha(t, x) d_alpha with coefficients affine in (t, x1, x2).
struct Coeffs {
  std::array<double, 3> c;                      // at the point
  std::array<std::array<double, 3>, 3> grad{};  // grad[beta][alpha] = d_beta c^alpha
};

Coeffs coeffs(VectorField v, const Point& p) {
  Coeffs k{};
  const double t = p[0], x1 = p[1], x2 = p[2];
  switch (v) {
    case VectorField::D0: k.c = {1, 0, 0}; break;
    case VectorField::D1: k.c = {0, 1, 0}; break;
    case VectorField::D2: k.c = {0, 0, 1}; break;
    case VectorField::Omega:
      k.c = {0, -x2, x1};
      k.grad[2][1] = -1;
      k.grad[1][2] = 1;
      break;
    case VectorField::L1:
      k.c = {x1, t, 0};
      k.grad[1][0] = 1;
      k.grad[0][1] = 1;
      break;
    case VectorField::L2:
      k.c = {x2, 0, t};
      k.grad[2][0] = 1;
      k.grad[0][2] = 1;
      break;
  }
  return k;
}

constexpr VectorField kAll[6] = {VectorField::D0, VectorField::D1, VectorField::D2,
                                 VectorField::Omega, VectorField::L1, VectorField::L2};

MultiIndex unit(int a) {
  MultiIndex m{0, 0, 0};
  ++m[a];
  return m;
}
MultiIndex pair_index(int a, int b) {
  MultiIndex m{0, 0, 0};
  ++m[a];
  ++m[b];
  return m;
}

}  // namespace

double ks_ratio(const ManufacturedField& phi, double t, const SpectralGrid& grid) {
  std::vector<double> sums(1 + 6 + 36, 0.0);
  double lhs = 0.0;
  for (int i1 = 0; i1 < grid.points(); ++i1)
    for (int i2 = 0; i2 < grid.points(); ++i2) {
      const Point p{t, grid.coordinate(i1), grid.coordinate(i2)};
      const Jet j = phi.jet(p);
      const double r = std::hypot(p[1], p[2]);
      lhs = std::max(lhs, std::sqrt(bracket(t + r) * bracket(t - r)) * std::abs(j.value()));
      sums[0] += j.value() * j.value();
      Coeffs k[6];
      for (int a = 0; a < 6; ++a) k[a] = coeffs(kAll[a], p);
      for (int a = 0; a < 6; ++a) {
        double g1 = 0;
        for (int al = 0; al < 3; ++al) g1 += k[a].c[al] * j(unit(al));
        sums[1 + a] += g1 * g1;
        for (int b = 0; b < 6; ++b) {
          // Gamma_a Gamma_b phi = c_a^al c_b^be d_al d_be phi + c_a^al (d_al c_b^be) d_be phi
          double g2 = 0;
          for (int al = 0; al < 3; ++al)
            for (int be = 0; be < 3; ++be)
              g2 += k[a].c[al] * (k[b].c[be] * j(pair_index(al, be)) + k[b].grad[al][be] * j(unit(be)));
          sums[7 + 6 * a + b] += g2 * g2;
        }
      }
    }
  double rhs = 0.0;
  for (double s : sums) rhs += std::sqrt(s * grid.cell_area());
  return lhs / rhs;
}

}  // namespace kgz
