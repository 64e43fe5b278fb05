#pragma once

// Null forms, the transformation n~ = n + |E|^2-correction, its algebraic
// identity on manufactured fields, the cubic source of the transformed wave
// equation on grid states, and the dyadic-window integrability criterion.

#include <cstdint>
#include <vector>

#include "kgz/manufactured.hpp"
#include "kgz/state.hpp"

namespace kgz {

// Minkowski metric diag(-1, 1, 1); index 0 is time.
inline double metric_sign(int alpha) { return alpha == 0 ? -1.0 : 1.0; }

/// d_axis of a jet (entries of total order 4 become unavailable, left zero).
Jet partial(const Jet& f, int axis);
/// d^axis = metric_sign(axis) d_axis.
Jet raised(const Jet& f, int axis);
/// Box = -d_t^2 + Laplacian.
Jet box(const Jet& f);

/// Q_{alpha beta}(f, g) = d_alpha f d_beta g - d_beta f d_alpha g at the jet point.
double null_form(const Jet& f, const Jet& g, int alpha, int beta);

/// d_gamma(fg) - (1/4) Box d_gamma(fg).
double transform_lhs(const Jet& f, const Jet& g, int gamma);
/// Right-hand side of the transformation identity with exact derivatives.
double transform_rhs(const Jet& f, const Jet& g, int gamma);

struct TransformResidual {
  double lhs_norm = 0.0;
  double rhs_norm = 0.0;
  double diff_norm = 0.0;
  /// diff / rhs; throws DomainError when the right-hand side is degenerate.
  double relative() const;
};

TransformResidual transform_identity_terms(const ManufacturedField& f, const ManufacturedField& g,
                                           int gamma, const std::vector<Point>& points);
/// Relative residual sampled on `samples` random points of [-1.5, 1.5]^3.
double transform_identity_residual(const ManufacturedField& f, const ManufacturedField& g, int gamma,
                                   std::size_t samples = 10000, std::uint64_t seed = 1);

/// Vector field E = (E1, E2) form of the transformed-wave source: compares the
/// two-component formula against Delta|E|^2 - (1/4) Box Delta|E|^2 and against
/// the specialization f^a = 2 d^a E, g = E of the general identity.
struct TransformSpecialization {
  TransformResidual formula_vs_lhs;
  TransformResidual formula_vs_general;
};
TransformSpecialization transform01_check(const ManufacturedField& e1, const ManufacturedField& e2,
                                          const std::vector<Point>& points);

/// n~ = n + (1/4) Delta |E|^2 with the square dealiased by the grid fraction.
RealField tilde_n(const FieldState& s);
/// Delta |E|^2 with the dealiased square.
RealField laplacian_energy_density(const FieldState& s);

/// Cubic source -Box n~ with all time derivatives substituted from the equations
/// (-Box n = Delta|E|^2, -Box E + E = -nE); products dealiased by the 1/2 rule.
RealField box_tilde_n_source(const FieldState& s);

/// Trapezoid integral of a uniformly or non-uniformly sampled series over [a, b],
/// with linear interpolation at the window ends.
double window_integral(const std::vector<double>& t, const std::vector<double>& f, double a, double b);

struct WindowSum {
  int m;          // window [2^m, 2^{m+1}]
  double sum;
};
/// Dyadic window sums of a norm series for m in [m_lo, m_hi]; throws RangeError
/// when a window is not covered by the samples.
std::vector<WindowSum> scattering_criterion(const std::vector<double>& t, const std::vector<double>& f,
                                            int m_lo, int m_hi);

}  // namespace kgz
