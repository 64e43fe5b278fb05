#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace kgz {

// Bessel functions of the first kind, orders 0..2, for s >= 0. Power series
// in extended precision below kBesselSplit, Hankel expansion with optimal
// truncation above.
inline constexpr double kBesselSplit = 16.0;

double bessel_j0(double s);
double bessel_j1(double s);
double bessel_j2(double s);
/// J0'(s) = -J1(s).
double bessel_j0_prime(double s);
/// J0''(s) = (J2(s) - J0(s)) / 2.
double bessel_j0_second(double s);

/// |J0(s) - sqrt(2 / (pi s)) cos(s - pi/4)| s^{3/2}, for s >= 4.
double asymptotic_gap(double s);

struct QuadratureSpec {
  double step = 0.01;               // composite Simpson step in s
  double truncation = 28.0;         // integrate up to truncation / eps
  std::vector<double> eps_schedule = {0.02, 0.01, 0.005};

  void validate() const;
};

struct SineBesselResult {
  double value = 0.0;                  // extrapolated to eps = 0
  std::vector<double> regularized;     // one per eps in the schedule
  std::vector<double> extrapolants;    // first-level Richardson values
  std::vector<double> second_level;    // Richardson values from consecutive triples
};

/// \int_0^inf sin(a s) J0(b s) ds for a > b > 0, Abel-regularized by e^{-eps s}
/// and extrapolated to eps = 0.
SineBesselResult sine_bessel_integral(double a, double b, const QuadratureSpec& spec = {});
/// The regularized integral at a single eps.
double sine_bessel_regularized(double a, double b, double eps, const QuadratureSpec& spec = {});

// Phase functions of the quadratic interactions:
//   Phi_1+- = <xi> + <xi - eta> +- |eta|,  Phi_2+- = <xi> - <xi - eta> +- |eta|.
enum class PhaseKind { Phi1Plus, Phi1Minus, Phi2Plus, Phi2Minus };

struct PhaseDerivatives {
  double value = 0.0;
  std::array<double, 2> grad{};                              // d/d eta_i
  std::array<std::array<double, 2>, 2> hess{};               // d^2/d eta_i d eta_j
  std::array<std::array<std::array<double, 2>, 2>, 2> third{};
};

using Vec2 = std::array<double, 2>;

/// Value and eta-derivatives up to the given order (0..3) in closed form.
/// Derivatives at eta = 0 throw SingularPointError.
PhaseDerivatives phase_eval(PhaseKind kind, const Vec2& xi, const Vec2& eta, int order = 3);

/// Sampled constants of the four bound families. Lower-bound constants are
/// minima of |quantity| / weight, upper-bound constants are maxima.
struct PhaseConstants {
  double g1_phi1 = 0.0;  // min |Phi_1+-| / (1/<xi> + 1/<xi-eta>)
  double g1_phi2 = 0.0;  // min |Phi_2+-| (<eta> + <xi-eta>)^2 / |eta|
  double g2_phi1 = 0.0;  // min |grad Phi_1+-| <xi-eta>^2
  double g2_phi2 = 0.0;  // min |grad Phi_2+-| <xi-eta>^2
  double g3 = 0.0;       // max (|H Phi_1+-| + |H Phi_2+-|) / (1/<xi-eta> + 1/|eta|)
  double g4 = 0.0;       // max (|D3 Phi_1+-| + |D3 Phi_2+-|) / (1/<xi-eta>^2 + 1/|eta|^2)
};

PhaseConstants sample_phase_constants(std::size_t samples, std::uint64_t seed, double radius = 32.0);

/// Moment part of the phase correction for radial frequency |xi|, in the
/// printed normalization (4 pi^2 times the unitary-Fourier one):
///   pi mu <xi>^{-1} \int_{t0}^t \int_0^inf psi(rho <s>^p) sin((s - t0) rho) J0(s rho |xi|/<xi>) d rho ds.
/// Composite Simpson in s with step ds (t - t0 need not be a multiple).
double theta_moment_part(double t, double xi_abs, double p, double t0, double moment, double ds);

}  // namespace kgz
