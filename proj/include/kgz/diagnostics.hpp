#pragma once

// Vector fields, Sobolev and weighted norms, pointwise envelopes, the per-band
// Z-norm series and least-squares rate fits.

#include <vector>

#include "kgz/manufactured.hpp"
#include "kgz/state.hpp"

namespace kgz {

enum class VectorField { D0, D1, D2, Omega, L1, L2 };

/// Gamma u at time t from samples of u and d_t u; spatial derivatives spectral.
RealField vectorfield_apply(const RealField& u, const RealField& ut, double t, VectorField which);
/// Same on one component of a state: field 0 is n, 1 and 2 are E^1, E^2.
RealField vectorfield_apply(const FieldState& s, int field, VectorField which);

/// (sum <xi>^{2s} |u^|^2 (dxi / 2 pi)^2)^{1/2}.
double sobolev_norm(const RealField& u, double s);
double sobolev_norm(const Spectrum& u, double s);

enum class ConeWeight { TMinusR, RMinusT };
/// ||<t - r>^gamma u|| or ||<r - t>^gamma u|| (identical brackets, kept for readability).
double weighted_l2(const RealField& u, double t, double gamma, ConeWeight kind = ConeWeight::TMinusR);

enum class EnvelopeWeight { Sharp, Plus, One };
/// sup_x |u| w(t, x); Sharp = <t+r>^{1/2}<t-r>^{1/2}, Plus = <t+r>.
double envelope(const RealField& u, double t, EnvelopeWeight w);
/// Same with |E| = (E1^2 + E2^2)^{1/2}.
double envelope(const RealField& e1, const RealField& e2, double t, EnvelopeWeight w);

/// E_+ = (d_t - i<grad>) E, in frequency space.
Spectrum plus_spectrum(const RealField& u, const RealField& ut);
Spectrum minus_spectrum(const RealField& u, const RealField& ut);

/// 2^{-C_E k^-} 2^{-D_E k^+} ||P_k E_+|| for one time.
double zk_value(const Spectrum& e_plus, int k, double c_e, double d_e);
/// One entry per spectrum.
std::vector<double> zk_series(const std::vector<Spectrum>& e_plus, int k, double c_e, double d_e);

enum class FitModel { Power, Log };
struct Fit {
  double a = 0.0;    // log-prefactor (Power) or intercept (Log)
  double b = 0.0;    // exponent alpha (Power) or log-slope (Log)
  double rms = 0.0;  // residual in the transformed variable
};
/// Power: log f = a + b log t. Log: f = a + b log t. Throws FitError with fewer
/// than 8 samples, a span below a factor 8, or nonpositive data for Power.
Fit fit_rate(const std::vector<double>& t, const std::vector<double>& f, FitModel model);

/// Klainerman-Sobolev ratio at time t on the grid:
/// sup_x <t+r>^{1/2}<t-r>^{1/2}|phi| / sum_{|I|<=2} ||Gamma^I phi||.
double ks_ratio(const ManufacturedField& phi, double t, const SpectralGrid& grid);

}  // namespace kgz
