#pragma once

// Time integration of -Box n = Delta|E|^2, -Box E + E = -nE with symmetric
// Strang splitting (exact linear flow, frozen-position kick), the companion
// field m with -Box m = |E|^2 and zero data, and Gaussian initial data.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "kgz/propagators.hpp"
#include "kgz/state.hpp"

namespace kgz {

struct InitialDataParams {
  double epsilon = 0.05;
  double radius_n = 1.0;   // Gaussian width of n0, n1
  double radius_e = 1.0;   // Gaussian width of E0, E1
  double moment = 0.0;     // \int n1 dx; 0 selects the divergence-form n1
  std::uint64_t seed = 0;  // 0: symmetric data; otherwise adds a seeded off-centre bump to E
  double t0 = 1.0;
};

/// Effective support radius used by the box rule: six widths of the widest Gaussian.
double data_radius(const InitialDataParams& p);

/// Dealiased Gaussian data; throws ConfigError when a width exceeds L/4.
FieldState make_initial_data(const SpectralGrid& grid, const InitialDataParams& p);

/// (n0, n1) of a state as free-wave data.
FreeWaveData wave_data(const FieldState& s);

/// Integrator holding the unknowns in frequency space.
class Integrator {
 public:
  Integrator(const FieldState& initial, double dt, bool track_m = false);

  /// One Strang step of size `dt` (may be negative); throws DivergenceError.
  void step(double dt);
  void step() { step(dt_); }

  double time() const { return t_; }
  double dt() const { return dt_; }
  bool tracks_m() const { return track_m_; }

  FieldState state() const;
  /// (m, d_t m) in physical space; requires track_m.
  std::pair<RealField, RealField> m_fields() const;

 private:
  void linear(double tau);
  Spectrum energy_density(const RealField& e1, const RealField& e2) const;

  SpectralGrid grid_;
  double t_;
  double dt_;
  bool track_m_;
  Spectrum n_, nt_, e_[2], et_[2];
  Spectrum m_, mt_, f_m_;  // f_m_: dealiased |E|^2 at the current time
};

/// One Strang step of a physical state.
FieldState step(const FieldState& s, double dt);

struct EvolveParams {
  double dt_max = 0.1;
  double t_end = 10.0;
  double snapshot_every = 1.0;  // rounded to a whole number of steps
  bool track_m = false;
  double data_radius = 6.0;     // for the box rule L >= R0 + t_end + 2
};

/// Per-snapshot callback; m fields are null unless tracked.
using SnapshotObserver =
    std::function<void(const FieldState&, const RealField* m, const RealField* mt)>;

struct Trajectory {
  SpectralGrid grid;
  double dt = 0.0;
  std::vector<FieldState> snapshots;
  std::vector<RealField> m;
  std::vector<RealField> mt;
};

/// Actual step used: (t_end - t0) divided into the fewest steps not exceeding dt_max.
double step_size(double t0, const EvolveParams& p);

/// Streams snapshots to `observer`; throws ConfigError on the box rule or an
/// unstable step.
void evolve(const FieldState& initial, const EvolveParams& p, const SnapshotObserver& observer);
Trajectory evolve(const FieldState& initial, const EvolveParams& p);

/// sup over snapshots of ||n - l - Delta m|| / max(||n||, eps^2).
double check_decomposition(const Trajectory& traj, const FreeWaveData& data, double epsilon);
/// Same measure for a single snapshot.
double decomposition_residual(const FieldState& s, const RealField& m, const FreeWaveData& data,
                              double epsilon);

}  // namespace kgz
