#pragma once

// Profiles f, h; the phase correction Theta from free-wave data; modified
// profiles, the residual terms M1..M4 and their identity; Cauchy increments
// over dyadic windows; the energy-cascade and Theta-growth measurements.

#include <array>
#include <vector>

#include "kgz/evolution.hpp"
#include "kgz/special.hpp"

namespace kgz {

/// e^{sign it<xi>} (d_t E^ - sign i<xi> E^) for one component.
Spectrum profile_f(const RealField& u, const RealField& ut, double t, int sign);
std::array<Spectrum, 2> profile_f(const FieldState& s, int sign);
/// E = i (e^{-it<grad>} f_+ - e^{it<grad>} f_-) / (2<grad>).
RealField reconstruct_from_profiles(const Spectrum& f_plus, const Spectrum& f_minus, double t);

/// h_+- = e^{sign it<grad>} (nE)_+- with d_t(nE) = nt E + n Et.
std::array<Spectrum, 2> profile_h(const FieldState& s, int sign);
/// Delta|E|^2 E - n^2 E - 2 d_alpha n d^alpha E, the source of d_t h (per component).
std::array<RealField, 2> h_source(const FieldState& s);

enum class ThetaEvaluator {
  Lattice,    // direct sum over the low-frequency lattice modes of the box
  Continuum,  // DTFT of the data samples, Gauss-Legendre in eta <s>^p
};
enum class ThetaNormalization {
  Printed,     // 2 pi^2 <xi>^{-1} \int l_L(s, s xi/<xi>) ds
  Consistent,  // (1/2) <xi>^{-1} \int l_L(s, s xi/<xi>) ds; matches M1..M4
};

struct ThetaOptions {
  double p = 0.75;
  double ds = 0.025;         // Simpson step in s (lattice)
  double log_step = 0.004;   // Simpson step in log s (continuum)
  int gl_nodes = 48;         // per axis, continuum
  ThetaEvaluator evaluator = ThetaEvaluator::Lattice;
  ThetaNormalization normalization = ThetaNormalization::Consistent;
};

/// d_t Theta(s, xi) for each xi, exact (no time quadrature).
std::vector<double> theta_rate(double s, const std::vector<Vec2>& xis, const FreeWaveData& data,
                               const ThetaOptions& opt);

struct PhaseTable {
  std::vector<double> times;
  std::vector<Vec2> xis;
  std::vector<std::vector<double>> theta;  // [time][xi]
  std::vector<std::vector<double>> rate;   // d_t Theta; lattice: 5-point stencil on the Simpson table
  ThetaOptions options;

  std::size_t time_index(double t) const;
};

/// Theta on `times` (each >= t0). Lattice tables need every time on the
/// even Simpson nodes t0 + 2k ds; throws DomainError otherwise.
PhaseTable phase_table(const FreeWaveData& data, const std::vector<Vec2>& xis,
                       const std::vector<double>& times, const ThetaOptions& opt);
double theta(double t, const Vec2& xi, const FreeWaveData& data, const ThetaOptions& opt);

/// {0} and `count` log-spaced lattice points on the positive xi_1 axis up to |xi| <= max_abs.
std::vector<Vec2> radial_xi_table(const SpectralGrid& g, int count = 8, double max_abs = 4.0);
/// All lattice frequencies with |xi| < radius, in index order, and their lattice slots.
std::vector<Vec2> disc_xi_table(const SpectralGrid& g, double radius, std::vector<std::size_t>* slots = nullptr);

/// Lattice slots of frequencies that sit on the lattice; throws DomainError otherwise.
std::vector<std::size_t> lattice_slots(const SpectralGrid& g, const std::vector<Vec2>& xis);

/// f*_ = e^{i Theta} f_+ at the listed lattice slots; other coefficients copied.
Spectrum modified_profile(const Spectrum& f_plus, const std::vector<std::size_t>& slots,
                          const std::vector<double>& theta);

struct ResidualTerms {
  std::array<Spectrum, 4> M;  // M1..M4
  Spectrum f_plus;
  Spectrum dt_f_plus;         // -e^{it<xi>} ((l + Delta m) E)^
};
/// M1..M4 for one component of E, with n = l + Delta m; l_L uses the cutoff
/// psi(|eta| <t>^p) and M3's subtracted term is evaluated on the lattice.
ResidualTerms residual_terms(const FieldState& s, const RealField& m, const FreeWaveData& data,
                             int component, double p);
/// ||d_t f_+ + i d_t Theta f_+ - sum M|| / ||sum M|| over the listed slots.
double identity_check(const ResidualTerms& r, const std::vector<std::size_t>& slots,
                      const std::vector<double>& rate);

struct TimedSpectra {
  std::vector<double> times;
  std::vector<std::array<Spectrum, 2>> profiles;  // per snapshot, both components
};
struct WindowIncrement {
  int m;
  double t_lo, t_hi;
  double max_increment;  // max over snapshot pairs and bands
  std::vector<double> per_band;  // max over pairs, one per k in [k_lo, k_hi]
};
/// Windows [2^m - 2, 2^{m+1} + 2]; per band 2^{-C_E k^-} 2^{-D_E k^+} ||phi_k (f(t2) - f(t1))||.
/// Throws RangeError when a window is not covered by the series.
std::vector<WindowIncrement> cauchy_increments(const TimedSpectra& series, int m_lo, int m_hi,
                                               int k_lo, int k_hi, double c_e, double d_e);

struct CascadeResult {
  std::vector<double> t, norm_n, norm_dn;
  double fit_a = 0.0, fit_b = 0.0, oracle_b = 0.0;
  double dn_at_4 = 0.0, dn_sup = 0.0;
  double ratio() const { return fit_b / oracle_b; }
};
/// Oracle slope of (2 pi)^{-2} \int_{|xi|<=1} sin^2(tau|xi|)/|xi|^2 |mu|^2 dxi against log t,
/// fitted over the given times.
double cascade_oracle_b(double mu, double t0, const std::vector<double>& times);
/// ||l||, ||dl|| from the closed-form free wave.
CascadeResult cascade_free(const FreeWaveData& data, const std::vector<double>& times, double fit_from);
/// Full system; throws ConfigError when mu = 0. `also` sees every snapshot.
CascadeResult cascade_kgz(const FieldState& initial, const EvolveParams& p, double fit_from,
                          const SnapshotObserver& also = {});

struct ThetaGrowth {
  std::vector<double> slopes;  // per xi, fitted against log t
  std::vector<double> ratios;  // slope / (pi n1^(0)) (printed normalization)
};
ThetaGrowth theta_growth(const PhaseTable& table, double mu, double t_lo, double t_hi);

}  // namespace kgz
