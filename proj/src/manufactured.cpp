#include "kgz/manufactured.hpp"

#include <string>

#include "kgz/errors.hpp"

namespace kgz {

namespace {

constexpr int kBinom[5][5] = {
    {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};

template <typename Fn>
void for_each_index(Fn&& fn) {
  for (int a = 0; a <= kJetOrder; ++a)
    for (int b = 0; a + b <= kJetOrder; ++b)
      for (int c = 0; a + b + c <= kJetOrder; ++c) fn(MultiIndex{a, b, c});
}

// d^n/dy^n of exp(-a u^2 + i k y), u = y - c, divided by the function itself:
// P_0 = 1, P_{n+1} = P_n' + P_n (-2 a u + i k).
std::array<std::complex<double>, kJetOrder + 1> packet_factors(double a, double k, double u) {
  using C = std::complex<double>;
  std::array<C, kJetOrder + 1> out{};
  std::array<C, kJetOrder + 1> poly{};  // coefficients in u
  poly[0] = 1.0;
  const C w0(0.0, k);
  const double w1 = -2.0 * a;
  for (int n = 0; n <= kJetOrder; ++n) {
    C v = 0.0;
    for (int j = n; j >= 0; --j) v = v * u + poly[j];
    out[n] = v;
    if (n == kJetOrder) break;
    std::array<C, kJetOrder + 1> next{};
    for (int j = 1; j <= n; ++j) next[j - 1] += static_cast<double>(j) * poly[j];
    for (int j = 0; j <= n; ++j) {
      next[j] += poly[j] * w0;
      next[j + 1] += poly[j] * w1;
    }
    poly = next;
  }
  return out;
}

}  // namespace

int Jet::slot(const MultiIndex& m) {
  if (m[0] < 0 || m[1] < 0 || m[2] < 0 || m[0] + m[1] + m[2] > kJetOrder)
    throw DomainError("jet holds derivatives of total order <= 4 only");
  return m[0] * 25 + m[1] * 5 + m[2];
}

double Jet::operator()(const MultiIndex& m) const { return data_[slot(m)]; }
double& Jet::at(const MultiIndex& m) { return data_[slot(m)]; }

Jet operator*(const Jet& a, const Jet& b) {
  Jet out;
  for_each_index([&](const MultiIndex& m) {
    double acc = 0.0;
    for (int k0 = 0; k0 <= m[0]; ++k0)
      for (int k1 = 0; k1 <= m[1]; ++k1)
        for (int k2 = 0; k2 <= m[2]; ++k2) {
          const double w = kBinom[m[0]][k0] * kBinom[m[1]][k1] * kBinom[m[2]][k2];
          acc += w * a({k0, k1, k2}) * b({m[0] - k0, m[1] - k1, m[2] - k2});
        }
    out.at(m) = acc;
  });
  return out;
}

Jet operator+(const Jet& a, const Jet& b) {
  Jet out;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] = a.data_[i] + b.data_[i];
  return out;
}

Jet operator*(double s, const Jet& a) {
  Jet out;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] = s * a.data_[i];
  return out;
}

ManufacturedField ManufacturedField::constant(double value) {
  ManufacturedField f;
  f.offset_ = value;
  return f;
}

ManufacturedField ManufacturedField::random(std::mt19937_64& rng, int terms, bool pure_gaussian) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Term> out;
  for (int m = 0; m < terms; ++m) {
    Term t;
    t.amplitude = std::complex<double>(u(rng) * 2 - 1, pure_gaussian ? 0.0 : u(rng) * 2 - 1);
    t.phase = pure_gaussian ? 0.0 : 2.0 * 3.141592653589793 * u(rng);
    for (int d = 0; d < 3; ++d) {
      t.width[d] = 0.3 + 0.9 * u(rng);
      t.center[d] = u(rng) - 0.5;
      t.wave[d] = pure_gaussian ? 0.0 : 3.0 * u(rng) - 1.5;
    }
    out.push_back(t);
  }
  return ManufacturedField(std::move(out));
}

Jet ManufacturedField::jet(const Point& p) const {
  Jet out;
  out.at({0, 0, 0}) = offset_;
  for (const Term& t : terms_) {
    std::array<std::array<std::complex<double>, kJetOrder + 1>, 3> fac;
    std::complex<double> base = t.amplitude * std::polar(1.0, t.phase);
    for (int d = 0; d < 3; ++d) {
      const double u = p[d] - t.center[d];
      fac[d] = packet_factors(t.width[d], t.wave[d], u);
      base *= std::exp(std::complex<double>(-t.width[d] * u * u, t.wave[d] * p[d]));
    }
    for_each_index([&](const MultiIndex& m) {
      out.at(m) += (base * fac[0][m[0]] * fac[1][m[1]] * fac[2][m[2]]).real();
    });
  }
  return out;
}

double ManufacturedField::value(const Point& p) const { return jet(p).value(); }

double ManufacturedField::derivative(const MultiIndex& m, const Point& p) const { return jet(p)(m); }

std::vector<ManufacturedPair> manufactured_corpus(std::size_t count, std::size_t gaussians,
                                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ManufacturedPair> out;
  for (std::size_t i = 0; i < count; ++i) {
    const bool pure = i < gaussians;
    const int nf = 1 + static_cast<int>(i % 3), ng = 1 + static_cast<int>((i / 3) % 3);
    ManufacturedPair pair;
    pair.f = ManufacturedField::random(rng, nf, pure);
    pair.g = ManufacturedField::random(rng, ng, pure);
    pair.pure_gaussian = pure;
    out.push_back(std::move(pair));
  }
  return out;
}

std::vector<Point> sample_points(std::size_t count, double half_width, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-half_width, half_width);
  std::vector<Point> out(count);
  for (auto& p : out) p = {u(rng), u(rng), u(rng)};
  return out;
}

}  // namespace kgz
