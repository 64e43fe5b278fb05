#pragma once

// Closed-form scalar fields of (t, x1, x2) with exact derivatives up to order
// four: f = Re sum_m A_m e^{i phi_m} prod_d exp(-a_d (y_d - c_d)^2 + i k_d y_d).

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace kgz {

/// Derivative orders along (t, x1, x2).
using MultiIndex = std::array<int, 3>;
/// Spacetime point (t, x1, x2).
using Point = std::array<double, 3>;

inline constexpr int kJetOrder = 4;

/// All partial derivatives of total order <= 4 at one point.
class Jet {
 public:
  double operator()(const MultiIndex& m) const;
  double& at(const MultiIndex& m);
  double value() const { return data_[0]; }

  /// Leibniz rule: derivatives of the pointwise product.
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator*(double s, const Jet& a);

 private:
  static int slot(const MultiIndex& m);
  std::array<double, 125> data_{};
};

class ManufacturedField {
 public:
  struct Term {
    std::complex<double> amplitude{1.0, 0.0};
    double phase = 0.0;
    std::array<double, 3> width{1.0, 1.0, 1.0};   // a_d > 0
    std::array<double, 3> center{0.0, 0.0, 0.0};  // c_d
    std::array<double, 3> wave{0.0, 0.0, 0.0};    // k_d
  };

  ManufacturedField() = default;
  explicit ManufacturedField(std::vector<Term> terms) : terms_(std::move(terms)) {}

  static ManufacturedField constant(double value);
  /// Random sum of `terms` Gaussian wave packets; pure Gaussians when `pure_gaussian`.
  static ManufacturedField random(std::mt19937_64& rng, int terms, bool pure_gaussian);

  double value(const Point& p) const;
  double derivative(const MultiIndex& m, const Point& p) const;
  Jet jet(const Point& p) const;

  const std::vector<Term>& terms() const { return terms_; }

 private:
  std::vector<Term> terms_;
  double offset_ = 0.0;
};

struct ManufacturedPair {
  ManufacturedField f;
  ManufacturedField g;
  bool pure_gaussian = false;
};

/// Deterministic corpus: the first `gaussians` pairs are pure Gaussians.
std::vector<ManufacturedPair> manufactured_corpus(std::size_t count, std::size_t gaussians,
                                                  std::uint64_t seed);

/// Uniform random spacetime points in the cube [-h, h]^3.
std::vector<Point> sample_points(std::size_t count, double half_width, std::uint64_t seed);

}  // namespace kgz
