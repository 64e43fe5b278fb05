#include "kgz/transform.hpp"

#include <cmath>
#include <string>

#include "kgz/errors.hpp"

namespace kgz {

namespace {

template <typename Fn>
void for_each_index(int max_order, Fn&& fn) {
  for (int a = 0; a <= max_order; ++a)
    for (int b = 0; a + b <= max_order; ++b)
      for (int c = 0; a + b + c <= max_order; ++c) fn(MultiIndex{a, b, c});
}

MultiIndex bump(MultiIndex m, int axis) {
  ++m[axis];
  return m;
}

double l2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

TransformResidual residual_of(const std::vector<double>& lhs, const std::vector<double>& rhs) {
  TransformResidual r;
  std::vector<double> diff(lhs.size());
  for (std::size_t i = 0; i < lhs.size(); ++i) diff[i] = lhs[i] - rhs[i];
  r.lhs_norm = l2(lhs);
  r.rhs_norm = l2(rhs);
  r.diff_norm = l2(diff);
  return r;
}

}  // namespace

Jet partial(const Jet& f, int axis) {
  Jet out;
  for_each_index(kJetOrder - 1, [&](const MultiIndex& m) { out.at(m) = f(bump(m, axis)); });
  return out;
}

Jet raised(const Jet& f, int axis) { return metric_sign(axis) * partial(f, axis); }

Jet box(const Jet& f) {
  Jet out;
  for_each_index(kJetOrder - 2, [&](const MultiIndex& m) {
    MultiIndex tt = m, xx = m, yy = m;
    tt[0] += 2;
    xx[1] += 2;
    yy[2] += 2;
    out.at(m) = -f(tt) + f(xx) + f(yy);
  });
  return out;
}

double null_form(const Jet& f, const Jet& g, int alpha, int beta) {
  MultiIndex ea{0, 0, 0}, eb{0, 0, 0};
  ++ea[alpha];
  ++eb[beta];
  return f(ea) * g(eb) - f(eb) * g(ea);
}

double transform_lhs(const Jet& f, const Jet& g, int gamma) {
  const Jet p = partial(f * g, gamma);
  return p.value() - 0.25 * box(p).value();
}

double transform_rhs(const Jet& f, const Jet& g, int gamma) {
  const Jet df = partial(f, gamma), dg = partial(g, gamma);
  const double v_f = f.value(), v_g = g.value(), v_df = df.value(), v_dg = dg.value();
  double r = 0.25 * (-box(df).value() + v_df) * v_g + 0.75 * v_df * (-box(g).value() + v_g) +
             0.75 * (-box(f).value() + v_f) * v_dg + 0.25 * v_f * (-box(dg).value() + v_dg);
  for (int alpha = 0; alpha < 3; ++alpha) {
    r -= 0.5 * null_form(raised(f, alpha), g, gamma, alpha);
    r -= 0.5 * null_form(f, raised(g, alpha), alpha, gamma);
  }
  return r;
}

double TransformResidual::relative() const {
  if (!(rhs_norm >= 1e-14))
    throw DomainError("transformation identity: right-hand side is degenerate (norm " +
                      std::to_string(rhs_norm) + ")");
  return diff_norm / rhs_norm;
}

TransformResidual transform_identity_terms(const ManufacturedField& f, const ManufacturedField& g,
                                           int gamma, const std::vector<Point>& points) {
  if (gamma < 0 || gamma > 2) throw DomainError("gamma must be 0, 1 or 2");
  std::vector<double> lhs, rhs;
  lhs.reserve(points.size());
  rhs.reserve(points.size());
  for (const Point& p : points) {
    const Jet jf = f.jet(p), jg = g.jet(p);
    lhs.push_back(transform_lhs(jf, jg, gamma));
    rhs.push_back(transform_rhs(jf, jg, gamma));
  }
  return residual_of(lhs, rhs);
}

double transform_identity_residual(const ManufacturedField& f, const ManufacturedField& g, int gamma,
                                   std::size_t samples, std::uint64_t seed) {
  return transform_identity_terms(f, g, gamma, sample_points(samples, 1.5, seed)).relative();
}

TransformSpecialization transform01_check(const ManufacturedField& e1, const ManufacturedField& e2,
                                          const std::vector<Point>& points) {
  std::vector<double> lhs, formula, general;
  for (const Point& p : points) {
    const Jet E[2] = {e1.jet(p), e2.jet(p)};
    const Jet sq = E[0] * E[0] + E[1] * E[1];
    const Jet lap_sq = partial(partial(sq, 1), 1) + partial(partial(sq, 2), 2);
    lhs.push_back(lap_sq.value() - 0.25 * box(lap_sq).value());

    double rf = 0.0, rg = 0.0;
    for (const Jet& e : E) {
      const Jet lap = partial(partial(e, 1), 1) + partial(partial(e, 2), 2);
      const double kg_e = -box(e).value() + e.value();
      rf += 0.5 * (-box(lap).value() + lap.value()) * e.value() + 1.5 * lap.value() * kg_e;
      for (int a = 1; a <= 2; ++a) {
        const Jet da = partial(e, a);
        const double kg_da = -box(da).value() + da.value();
        rf += 1.5 * kg_da * da.value() + 0.5 * da.value() * kg_da;
        for (int beta = 0; beta < 3; ++beta) {
          rf -= null_form(raised(raised(e, beta), a), e, a, beta);
          rf -= null_form(raised(e, a), raised(e, beta), beta, a);
        }
        rg += transform_rhs(2.0 * raised(e, a), e, a);
      }
    }
    formula.push_back(rf);
    general.push_back(rg);
  }
  return {residual_of(lhs, formula), residual_of(general, formula)};
}

namespace {

const SpectralGrid& grid_of(const FieldState& s) { return s.grid(); }

RealField filtered(const RealField& u, double fraction) {
  return inverse_ft(dealias(forward_ft(u), fraction));
}

RealField dot(const std::array<RealField, 2>& a, const std::array<RealField, 2>& b) {
  RealField out = product(a[0], b[0]);
  out += product(a[1], b[1]);
  return out;
}

std::array<RealField, 2> lap2(const std::array<RealField, 2>& u) { return {laplacian(u[0]), laplacian(u[1])}; }
std::array<RealField, 2> d2(const std::array<RealField, 2>& u, int axis) {
  return {derivative(u[0], axis), derivative(u[1], axis)};
}

}  // namespace

RealField laplacian_energy_density(const FieldState& s) {
  const double frac = grid_of(s).dealias_fraction();
  return laplacian(filtered(dot(s.E, s.E), frac));
}

RealField tilde_n(const FieldState& s) {
  RealField out = s.n;
  RealField corr = laplacian_energy_density(s);
  corr *= 0.25;
  out += corr;
  return out;
}

RealField box_tilde_n_source(const FieldState& s) {
  const double half = 0.5;
  const auto& E = s.E;
  // nE, dealiased
  std::array<RealField, 2> nE = {filtered(product(s.n, E[0]), half), filtered(product(s.n, E[1]), half)};
  const auto lapE = lap2(E);
  const auto lap_nE = lap2(nE);
  // Box E = E + nE from the Klein-Gordon equation
  std::array<RealField, 2> boxE = {E[0] + nE[0], E[1] + nE[1]};

  RealField src(grid_of(s));
  auto acc = [&](const RealField& f, double c) {
    RealField t = f;
    t *= c;
    src += t;
  };
  acc(dot(lap_nE, E), -0.5);
  acc(dot(lapE, nE), -1.5);
  for (int a = 1; a <= 2; ++a) acc(dot(d2(nE, a), d2(E, a)), -2.0);

  // Q_{a beta}(d^beta d^a E, E) = -d_t Lap E . d_t E + grad Lap E . grad E - sum_a d_a(Box E) . d_a E
  RealField q1 = dot(lap2(s.Et), s.Et);
  q1 *= -1.0;
  for (int a = 1; a <= 2; ++a) {
    q1 += dot(d2(lapE, a), d2(E, a));
    q1 -= dot(d2(boxE, a), d2(E, a));
  }
  // Q_{beta a}(d^a E, d^beta E) = sum_a [-(d_t d_a E)^2 + sum_b (d_b d_a E)^2] - Lap E . Box E
  RealField q2 = dot(lapE, boxE);
  q2 *= -1.0;
  for (int a = 1; a <= 2; ++a) {
    const auto dta = d2(s.Et, a);
    q2 -= dot(dta, dta);
    for (int b = 1; b <= 2; ++b) {
      const auto dab = d2(d2(E, a), b);
      q2 += dot(dab, dab);
    }
  }
  src -= q1;
  src -= q2;
  return filtered(src, half);
}

double window_integral(const std::vector<double>& t, const std::vector<double>& f, double a, double b) {
  if (t.size() != f.size() || t.size() < 2) throw RangeError("window_integral: series too short");
  const double tol = 1e-9 * std::max(1.0, std::abs(b));
  if (a < t.front() - tol || b > t.back() + tol)
    throw RangeError("window [" + std::to_string(a) + ", " + std::to_string(b) +
                     "] not covered by samples on [" + std::to_string(t.front()) + ", " +
                     std::to_string(t.back()) + "]");
  auto interp = [&](double x) {
    if (x <= t.front()) return f.front();
    if (x >= t.back()) return f.back();
    std::size_t i = std::upper_bound(t.begin(), t.end(), x) - t.begin();
    const double w = (x - t[i - 1]) / (t[i] - t[i - 1]);
    return (1 - w) * f[i - 1] + w * f[i];
  };
  double acc = 0.0, prev_t = a, prev_f = interp(a);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] <= a || t[i] >= b) continue;
    acc += 0.5 * (f[i] + prev_f) * (t[i] - prev_t);
    prev_t = t[i];
    prev_f = f[i];
  }
  acc += 0.5 * (interp(b) + prev_f) * (b - prev_t);
  return acc;
}

std::vector<WindowSum> scattering_criterion(const std::vector<double>& t, const std::vector<double>& f,
                                            int m_lo, int m_hi) {
  std::vector<WindowSum> out;
  for (int m = m_lo; m <= m_hi; ++m)
    out.push_back({m, window_integral(t, f, std::ldexp(1.0, m), std::ldexp(1.0, m + 1))});
  return out;
}

}  // namespace kgz
