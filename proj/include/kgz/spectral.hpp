#pragma once

// Periodic square box [-L, L)^2 sampled on an N x N lattice, with a discrete
// Fourier transform scaled so that lattice sums reproduce the continuum
// transform  u^(xi) = \int u(x) e^{-i x.xi} dx  and its inverse
// u(x) = (2 pi)^{-2} \int u^(xi) e^{i x.xi} dxi.
//
// Storage is row-major with the x1 index slow: value(i1, i2) = data[i1 * N + i2].
// Spectra use FFT ordering: index j carries wavenumber j for j < N/2 and j - N
// otherwise, at frequency (pi / L) * wavenumber.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace kgz {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Japanese bracket <x> = sqrt(1 + x^2).
inline double bracket(double x) { return std::sqrt(1.0 + x * x); }

class SpectralGrid {
 public:
  SpectralGrid() = default;
  SpectralGrid(double half_width, int points_per_axis, double dealias_fraction = 2.0 / 3.0);

  double half_width() const { return half_width_; }
  int points() const { return points_; }
  double spacing() const { return 2.0 * half_width_ / points_; }
  double frequency_step() const { return kPi / half_width_; }
  double nyquist() const { return kPi / spacing(); }
  double dealias_fraction() const { return dealias_fraction_; }
  std::size_t size() const { return static_cast<std::size_t>(points_) * points_; }

  double coordinate(int j) const { return -half_width_ + j * spacing(); }
  int wavenumber(int j) const { return j < points_ / 2 ? j : j - points_; }
  double frequency(int j) const { return wavenumber(j) * frequency_step(); }
  bool is_nyquist(int j) const { return j == points_ / 2; }
  std::size_t index(int i1, int i2) const {
    return static_cast<std::size_t>(i1) * points_ + static_cast<std::size_t>(i2);
  }
  /// Lattice index of an integer wavenumber in FFT ordering.
  int slot(int wavenumber) const { return wavenumber >= 0 ? wavenumber : wavenumber + points_; }

  /// Riemann-sum weight dx^2 of one physical cell.
  double cell_area() const { return spacing() * spacing(); }
  /// Weight (dxi / 2 pi)^2 turning lattice sums over spectra into continuum integrals.
  double spectral_weight() const;

  bool operator==(const SpectralGrid& other) const {
    return half_width_ == other.half_width_ && points_ == other.points_ &&
           dealias_fraction_ == other.dealias_fraction_;
  }

 private:
  double half_width_ = 1.0;
  int points_ = 16;
  double dealias_fraction_ = 2.0 / 3.0;
};

/// Samples of a scalar field on the physical lattice.
template <typename T>
struct GridField {
  SpectralGrid grid;
  std::vector<T> values;

  GridField() = default;
  explicit GridField(const SpectralGrid& g) : grid(g), values(g.size(), T{}) {}
  GridField(const SpectralGrid& g, std::vector<T> v) : grid(g), values(std::move(v)) {}

  T& operator()(int i1, int i2) { return values[grid.index(i1, i2)]; }
  const T& operator()(int i1, int i2) const { return values[grid.index(i1, i2)]; }

  GridField& operator+=(const GridField& o) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += o.values[i];
    return *this;
  }
  GridField& operator-=(const GridField& o) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= o.values[i];
    return *this;
  }
  GridField& operator*=(T s) {
    for (auto& v : values) v *= s;
    return *this;
  }
  friend GridField operator+(GridField a, const GridField& b) { return a += b; }
  friend GridField operator-(GridField a, const GridField& b) { return a -= b; }
  friend GridField operator*(GridField a, T s) { return a *= s; }
  friend GridField operator*(T s, GridField a) { return a *= s; }
};

using RealField = GridField<double>;
using ComplexField = GridField<cplx>;

/// Pointwise product of two physical fields (no dealiasing).
RealField product(const RealField& a, const RealField& b);
ComplexField product(const RealField& a, const ComplexField& b);

/// Continuum L2 norm approximated by the Riemann sum dx^2 sum |u|^2.
double l2_norm(const RealField& u);
double l2_norm(const ComplexField& u);
double max_norm(const RealField& u);

/// Frequency-space coefficients on the lattice.
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(const SpectralGrid& g) : grid_(g), coeffs_(g.size(), cplx{}) {}
  Spectrum(const SpectralGrid& g, std::vector<cplx> c) : grid_(g), coeffs_(std::move(c)) {}

  const SpectralGrid& grid() const { return grid_; }
  std::vector<cplx>& coeffs() { return coeffs_; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }

  cplx& operator()(int j1, int j2) { return coeffs_[grid_.index(j1, j2)]; }
  const cplx& operator()(int j1, int j2) const { return coeffs_[grid_.index(j1, j2)]; }
  /// Value at the zero frequency.
  cplx zero_mode() const { return coeffs_.front(); }

  /// (1 / 2 pi) (dxi^2 sum |u^|^2)^{1/2}; equals the physical L2 norm.
  double norm() const;

  Spectrum& operator+=(const Spectrum& o);
  Spectrum& operator-=(const Spectrum& o);
  Spectrum& operator*=(cplx s);
  friend Spectrum operator+(Spectrum a, const Spectrum& b) { return a += b; }
  friend Spectrum operator-(Spectrum a, const Spectrum& b) { return a -= b; }
  friend Spectrum operator*(Spectrum a, cplx s) { return a *= s; }
  friend Spectrum operator*(cplx s, Spectrum a) { return a *= s; }

  /// Applies fn(xi1, xi2, coefficient&) at every lattice frequency.
  template <typename Fn>
  void for_each(Fn&& fn) {
    const int n = grid_.points();
    for (int j1 = 0; j1 < n; ++j1) {
      const double xi1 = grid_.frequency(j1);
      for (int j2 = 0; j2 < n; ++j2) fn(xi1, grid_.frequency(j2), coeffs_[grid_.index(j1, j2)]);
    }
  }

 private:
  SpectralGrid grid_;
  std::vector<cplx> coeffs_;
};

Spectrum forward_ft(const RealField& u);
Spectrum forward_ft(const ComplexField& u);
/// Inverse transform keeping the real part (exact for conjugate-symmetric spectra).
RealField inverse_ft(const Spectrum& s);
ComplexField inverse_ft_complex(const Spectrum& s);

/// A Fourier multiplier m(xi1, xi2).
using Symbol = std::function<cplx(double, double)>;

namespace symbols {
Symbol abs();          // |xi|
Symbol bracket();      // <xi>
Symbol inv_bracket();  // <xi>^{-1}
Symbol abs_sq();       // |xi|^2, i.e. -Laplacian
Symbol i_xi(int axis); // i xi_a, i.e. d/dx_a (axis 1 or 2)
Symbol inv_abs();      // |xi|^{-1}; unbounded at xi = 0, rejected by multiplier()
}  // namespace symbols

/// Pointwise product in frequency space; the Nyquist row and column are zeroed.
/// Throws SymbolError when the symbol is not finite at some lattice frequency.
Spectrum multiplier(const Spectrum& s, const Symbol& symbol);

/// Spectral partial derivative d/dx_axis of a physical field.
RealField derivative(const RealField& u, int axis);
RealField laplacian(const RealField& u);

// Littlewood-Paley cutoffs. psi is radial, 1 on [0, 1], 0 beyond 2, smooth.
double cutoff_psi(double r);
/// phi(r) = psi(r) - psi(2 r), supported in [1/2, 2].
double cutoff_phi(double r);
/// phi_k(r) = phi(r / 2^k).
double cutoff_phi_k(double r, int k);
/// phi_{<=k}(r) = psi(r / 2^k); equals 1 at r = 0.
double cutoff_phi_le(double r, int k);

inline constexpr int kBandLimit = 40;

/// Sum_{|k| <= 40} phi_k(r).
double partition_sum(double r);

/// P_k u: multiplication by phi_k(|xi|).
Spectrum lp_project(const Spectrum& s, int k);

/// Split into phi_{<=0}(eta <t>^p) u^ and the remainder.
std::pair<Spectrum, Spectrum> lowfreq_split(const Spectrum& s, double t, double p);
/// phi_{<=0}(|eta| <t>^p), the low-frequency weight at time t.
double lowfreq_weight(double eta_abs, double t, double p);

/// Zeroes every mode with max(|xi1|, |xi2|) above fraction * Nyquist.
Spectrum dealias(const Spectrum& s, double fraction);

/// Physical product followed by truncation to the given fraction of Nyquist.
RealField dealiased_product(const RealField& a, const RealField& b, double fraction);

}  // namespace kgz
