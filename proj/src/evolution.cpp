#include "kgz/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "kgz/errors.hpp"

namespace kgz {

namespace {

RealField gaussian(const SpectralGrid& g, double width, double cx = 0.0, double cy = 0.0) {
  RealField f(g);
  const double s = 1.0 / (2.0 * width * width);
  for (int i1 = 0; i1 < g.points(); ++i1)
    for (int i2 = 0; i2 < g.points(); ++i2) {
      const double x = g.coordinate(i1) - cx, y = g.coordinate(i2) - cy;
      f(i1, i2) = std::exp(-(x * x + y * y) * s);
    }
  return f;
}

Spectrum band(const RealField& u) {
  return dealias(forward_ft(u), u.grid.dealias_fraction());
}

// (u, v) -> flow of u'' = -w^2 u over tau
void rotate(Spectrum& u, Spectrum& v, double tau, double mass) {
  const SpectralGrid& g = u.grid();
  auto& cu = u.coeffs();
  auto& cv = v.coeffs();
  const int n = g.points();
  for (int j1 = 0; j1 < n; ++j1) {
    const double a = g.frequency(j1);
    for (int j2 = 0; j2 < n; ++j2) {
      const double b = g.frequency(j2);
      const double w = std::sqrt(mass * mass + a * a + b * b);
      const double c = std::cos(w * tau);
      const double s = w > 0 ? std::sin(w * tau) / w : tau;
      const std::size_t i = g.index(j1, j2);
      const cplx u0 = cu[i], v0 = cv[i];
      cu[i] = c * u0 + s * v0;
      cv[i] = -w * w * s * u0 + c * v0;
    }
  }
}

void check_finite(const RealField& u, double t) {
  for (double v : u.values)
    if (!std::isfinite(v)) throw DivergenceError(t, max_norm(u));
}

}  // namespace

double data_radius(const InitialDataParams& p) { return 6.0 * std::max(p.radius_n, p.radius_e); }

FieldState make_initial_data(const SpectralGrid& grid, const InitialDataParams& p) {
  const double L = grid.half_width();
  if (!(p.radius_n > 0) || !(p.radius_e > 0) || p.radius_n >= L / 4 || p.radius_e >= L / 4)
    throw ConfigError("data radii must lie in (0, L/4) = (0, " + std::to_string(L / 4) + ")");
  if (!(p.epsilon >= 0)) throw ConfigError("epsilon must be nonnegative");
  FieldState s(grid, p.t0);
  const double eps = p.epsilon;

  const RealField gn = gaussian(grid, p.radius_n);
  Spectrum n0 = band(gn);
  n0 *= eps;
  Spectrum n1;
  if (p.moment == 0.0) {
    n1 = multiplier(band(gn), symbols::i_xi(1));
    n1 *= eps * p.radius_n;
  } else {
    n1 = band(gn);
    n1 *= p.moment / n1.zero_mode().real();
  }
  n1.coeffs().front() = p.moment;  // pinned zero mode

  const RealField ge = gaussian(grid, p.radius_e);
  // linearly polarized and at rest: each component carries both e^{+-it<xi>} halves
  Spectrum e0 = band(ge);
  e0 *= eps;
  Spectrum e1 = e0 * cplx(0.5, 0.0);
  if (p.seed != 0) {
    std::mt19937_64 rng(p.seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const double cx = u(rng) * p.radius_e, cy = u(rng) * p.radius_e;
    Spectrum bump = band(gaussian(grid, p.radius_e, cx, cy));
    bump *= 0.5 * eps;
    e0 += bump;
  }

  s.n = inverse_ft(n0);
  s.nt = inverse_ft(n1);
  s.E[0] = inverse_ft(e0);
  s.E[1] = inverse_ft(e1);
  return s;
}

FreeWaveData wave_data(const FieldState& s) { return FreeWaveData::from_fields(s.n, s.nt, s.t); }

Integrator::Integrator(const FieldState& initial, double dt, bool track_m)
    : grid_(initial.grid()), t_(initial.t), dt_(dt), track_m_(track_m) {
  n_ = forward_ft(initial.n);
  nt_ = forward_ft(initial.nt);
  for (int c = 0; c < 2; ++c) {
    e_[c] = forward_ft(initial.E[c]);
    et_[c] = forward_ft(initial.Et[c]);
  }
  if (track_m_) {
    m_ = Spectrum(grid_);
    mt_ = Spectrum(grid_);
    f_m_ = energy_density(initial.E[0], initial.E[1]);
  }
}

Spectrum Integrator::energy_density(const RealField& e1, const RealField& e2) const {
  RealField sq = product(e1, e1);
  sq += product(e2, e2);
  return dealias(forward_ft(sq), grid_.dealias_fraction());
}

void Integrator::linear(double tau) {
  rotate(n_, nt_, tau, 0.0);
  for (int c = 0; c < 2; ++c) rotate(e_[c], et_[c], tau, 1.0);
}

void Integrator::step(double dt) {
  const double frac = grid_.dealias_fraction();
  const double stable = 0.5 * grid_.spacing();
  if (std::abs(dt) > stable * (1 + 1e-12))
    throw ConfigError("time step " + std::to_string(dt) + " exceeds 0.5 dx = " + std::to_string(stable));

  linear(0.5 * dt);
  const RealField n = inverse_ft(n_);
  const RealField e1 = inverse_ft(e_[0]), e2 = inverse_ft(e_[1]);
  const double t_mid = t_ + 0.5 * dt;
  check_finite(n, t_mid);
  check_finite(e1, t_mid);
  check_finite(e2, t_mid);

  Spectrum s = energy_density(e1, e2);
  s = multiplier(s, symbols::abs_sq());
  s *= -dt;
  nt_ += s;
  const RealField* ec[2] = {&e1, &e2};
  for (int c = 0; c < 2; ++c) {
    Spectrum k = dealias(forward_ft(product(n, *ec[c])), frac);
    k *= -dt;
    et_[c] += k;
  }
  linear(0.5 * dt);

  if (track_m_) {
    // Duhamel over one step with the trapezoid rule on |E|^2
    const Spectrum f1 = energy_density(inverse_ft(e_[0]), inverse_ft(e_[1]));
    Spectrum sinc(grid_), cosf = f_m_;
    rotate(sinc, cosf, dt, 0.0);  // sin(dt|xi|)/|xi| f0, cos(dt|xi|) f0
    rotate(m_, mt_, dt, 0.0);
    sinc *= 0.5 * dt;
    m_ += sinc;
    cosf += f1;
    cosf *= 0.5 * dt;
    mt_ += cosf;
    f_m_ = f1;
  }
  t_ += dt;
}

FieldState Integrator::state() const {
  FieldState s(grid_, t_);
  s.n = inverse_ft(n_);
  s.nt = inverse_ft(nt_);
  for (int c = 0; c < 2; ++c) {
    s.E[c] = inverse_ft(e_[c]);
    s.Et[c] = inverse_ft(et_[c]);
  }
  return s;
}

std::pair<RealField, RealField> Integrator::m_fields() const {
  if (!track_m_) throw ConfigError("m is not tracked by this integrator");
  return {inverse_ft(m_), inverse_ft(mt_)};
}

FieldState step(const FieldState& s, double dt) {
  Integrator it(s, dt);
  it.step();
  return it.state();
}

double step_size(double t0, const EvolveParams& p) {
  const double span = p.t_end - t0;
  if (!(span >= 0)) throw ConfigError("t_end precedes the data time");
  if (!(p.dt_max > 0)) throw ConfigError("dt must be positive");
  if (span == 0) return p.dt_max;
  // prefer steps that land on the snapshot grid
  if (p.snapshot_every > 0) {
    const double dt = p.snapshot_every / std::ceil(p.snapshot_every / p.dt_max - 1e-9);
    if (std::abs(std::round(span / dt) * dt - span) < 1e-9 * span) return dt;
  }
  return span / std::ceil(span / p.dt_max - 1e-9);
}

void evolve(const FieldState& initial, const EvolveParams& p, const SnapshotObserver& observer) {
  const SpectralGrid& g = initial.grid();
  const double L = g.half_width();
  if (L < p.data_radius + p.t_end + 2.0)
    throw ConfigError("box too small: L = " + std::to_string(L) + " < R0 + t_end + 2 = " +
                      std::to_string(p.data_radius + p.t_end + 2.0));
  const double dt = step_size(initial.t, p);
  if (dt > 0.5 * g.spacing() * (1 + 1e-12))
    throw ConfigError("dt = " + std::to_string(dt) + " exceeds 0.5 dx = " + std::to_string(0.5 * g.spacing()));
  const long steps = std::lround((p.t_end - initial.t) / dt);
  const long every = std::max(1L, std::lround(p.snapshot_every / dt));

  Integrator it(initial, dt, p.track_m);
  auto emit = [&]() {
    const FieldState s = it.state();
    if (p.track_m) {
      const auto [m, mt] = it.m_fields();
      observer(s, &m, &mt);
    } else {
      observer(s, nullptr, nullptr);
    }
  };
  emit();
  for (long k = 1; k <= steps; ++k) {
    it.step();
    if (k % every == 0 || k == steps) emit();
  }
}

Trajectory evolve(const FieldState& initial, const EvolveParams& p) {
  Trajectory traj;
  traj.grid = initial.grid();
  traj.dt = step_size(initial.t, p);
  evolve(initial, p, [&](const FieldState& s, const RealField* m, const RealField* mt) {
    traj.snapshots.push_back(s);
    if (m) {
      traj.m.push_back(*m);
      traj.mt.push_back(*mt);
    }
  });
  return traj;
}

double decomposition_residual(const FieldState& s, const RealField& m, const FreeWaveData& data,
                              double epsilon) {
  const RealField ell = free_wave_evolve(data, s.t).first;
  RealField r = s.n - ell;
  r -= laplacian(m);
  return l2_norm(r) / std::max(l2_norm(s.n), epsilon * epsilon);
}

double check_decomposition(const Trajectory& traj, const FreeWaveData& data, double epsilon) {
  if (traj.m.size() != traj.snapshots.size()) throw ConfigError("trajectory has no m fields");
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i)
    worst = std::max(worst, decomposition_residual(traj.snapshots[i], traj.m[i], data, epsilon));
  return worst;
}

}  // namespace kgz
