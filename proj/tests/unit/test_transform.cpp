#include <cmath>
#include <random>

#include "doctest.h"
#include "kgz/errors.hpp"
#include "kgz/transform.hpp"

using namespace kgz;

namespace {

ManufacturedField packet(double amp, double phase, std::array<double, 3> a, std::array<double, 3> c,
                         std::array<double, 3> k) {
  ManufacturedField::Term t;
  t.amplitude = amp;
  t.phase = phase;
  t.width = a;
  t.center = c;
  t.wave = k;
  return ManufacturedField({t});
}

// direct evaluation used by the finite-difference oracle
double eval_direct(const ManufacturedField& f, const Point& p) {
  double s = 0.0;
  for (const auto& t : f.terms()) {
    std::complex<double> z = t.amplitude * std::polar(1.0, t.phase);
    for (int d = 0; d < 3; ++d) {
      const double u = p[d] - t.center[d];
      z *= std::exp(std::complex<double>(-t.width[d] * u * u, t.wave[d] * p[d]));
    }
    s += z.real();
  }
  return s;
}

}  // namespace

TEST_CASE("jet derivatives match central finite differences") {
  std::mt19937_64 rng(7);
  const auto f = ManufacturedField::random(rng, 3, false);
  const auto pts = sample_points(20, 1.0, 3);
  const double h = 1e-3;
  for (const auto& p : pts) {
    const Jet j = f.jet(p);
    CHECK(j.value() == doctest::Approx(eval_direct(f, p)).epsilon(1e-13));
    for (int ax = 0; ax < 3; ++ax) {
      Point pp = p, pm = p;
      pp[ax] += h;
      pm[ax] -= h;
      MultiIndex e{0, 0, 0};
      e[ax] = 1;
      const double fd1 = (eval_direct(f, pp) - eval_direct(f, pm)) / (2 * h);
      CHECK(std::abs(fd1 - j(e)) < 1e-5);
      // second derivative from first-derivative jets
      MultiIndex e2{0, 0, 0};
      e2[ax] = 2;
      const double fd2 = (f.jet(pp)(e) - f.jet(pm)(e)) / (2 * h);
      CHECK(std::abs(fd2 - j(e2)) < 1e-5);
      // fourth from third
      MultiIndex e3{0, 0, 0}, e4{0, 0, 0};
      e3[ax] = 3;
      e4[ax] = 4;
      const double fd4 = (f.jet(pp)(e3) - f.jet(pm)(e3)) / (2 * h);
      CHECK(std::abs(fd4 - j(e4)) < 1e-4 * std::max(1.0, std::abs(j(e4))));
    }
    // mixed derivative
    Point a = p, b = p, c = p, d = p;
    a[1] += h, a[2] += h;
    b[1] += h, b[2] -= h;
    c[1] -= h, c[2] += h;
    d[1] -= h, d[2] -= h;
    const double mix = (eval_direct(f, a) - eval_direct(f, b) - eval_direct(f, c) + eval_direct(f, d)) / (4 * h * h);
    CHECK(std::abs(mix - j({0, 1, 1})) < 1e-5);
  }
  CHECK_THROWS_AS(f.jet(pts[0])({1, 2, 2}), DomainError);
}

TEST_CASE("null form basics") {
  std::mt19937_64 rng(11);
  const auto f = ManufacturedField::random(rng, 2, false);
  const auto g = ManufacturedField::random(rng, 2, false);
  const auto h = ManufacturedField::random(rng, 1, false);
  for (const auto& p : sample_points(50, 1.5, 5)) {
    const Jet jf = f.jet(p), jg = g.jet(p), jh = h.jet(p);
    for (int a = 0; a < 3; ++a) {
      CHECK(null_form(jf, jg, a, a) == 0.0);
      CHECK(std::abs(null_form(jf, 3.0 * jf, a, (a + 1) % 3)) < 1e-11);
      for (int b = 0; b < 3; ++b) {
        CHECK(std::abs(null_form(jf, jg, a, b) + null_form(jf, jg, b, a)) < 1e-11);
        const double lin = null_form(2.0 * jf + jh, jg, a, b) - 2.0 * null_form(jf, jg, a, b) - null_form(jh, jg, a, b);
        CHECK(std::abs(lin) < 1e-11);
      }
    }
    // Q_01 against the expansion from single-variable derivatives
    const double sym = f.derivative({1, 0, 0}, p) * g.derivative({0, 1, 0}, p) -
                       f.derivative({0, 1, 0}, p) * g.derivative({1, 0, 0}, p);
    CHECK(std::abs(null_form(jf, jg, 0, 1) - sym) < 1e-11);
  }
  // Q_12(x1, x2) = 1
  Jet x1, x2;
  x1.at({0, 1, 0}) = 1.0;
  x2.at({0, 0, 1}) = 1.0;
  CHECK(null_form(x1, x2, 1, 2) == 1.0);
}

TEST_CASE("box and raised indices") {
  const auto f = packet(1.0, 0.2, {0.5, 0.7, 0.9}, {0.1, -0.2, 0.3}, {0.4, -0.8, 1.1});
  const Point p{0.3, -0.4, 0.2};
  const Jet j = f.jet(p);
  CHECK(raised(j, 0).value() == doctest::Approx(-j({1, 0, 0})));
  CHECK(raised(j, 2).value() == doctest::Approx(j({0, 0, 1})));
  CHECK(box(j).value() == doctest::Approx(-j({2, 0, 0}) + j({0, 2, 0}) + j({0, 0, 2})));
}

TEST_CASE("transformation identity on the manufactured corpus") {
  const auto corpus = manufactured_corpus(25, 8, 2024);
  double worst = 0.0, worst_gauss = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (int gamma = 0; gamma < 3; ++gamma) {
      const double r = transform_identity_residual(corpus[i].f, corpus[i].g, gamma, 10000, 1 + i);
      worst = std::max(worst, r);
      if (corpus[i].pure_gaussian) worst_gauss = std::max(worst_gauss, r);
    }
  }
  MESSAGE("worst residual " << worst << ", gaussian subset " << worst_gauss);
  CHECK(worst < 1e-9);
  CHECK(worst_gauss < 1e-10);
}

TEST_CASE("Gaussian times cosine pair") {
  const auto f = packet(1.0, 0.0, {0.6, 0.8, 0.7}, {0.0, 0.1, -0.1}, {0.0, 1.0, 0.0});
  CHECK(transform_identity_residual(f, f, 1) < 1e-10);
  CHECK(transform_identity_residual(f, f, 0) < 1e-10);
}

TEST_CASE("constant fields: both sides vanish") {
  const auto f = ManufacturedField::constant(1.7), g = ManufacturedField::constant(-0.4);
  const auto pts = sample_points(100, 1.5, 9);
  for (int gamma = 0; gamma < 3; ++gamma) {
    const auto r = transform_identity_terms(f, g, gamma, pts);
    CHECK(r.lhs_norm < 1e-12);
    CHECK(r.diff_norm < 1e-12);
    CHECK_THROWS_AS(r.relative(), DomainError);
  }
  CHECK_THROWS_AS(transform_identity_terms(f, g, 3, pts), DomainError);
}

TEST_CASE("two-component specialization") {
  std::mt19937_64 rng(31);
  const auto pts = sample_points(2000, 1.5, 4);
  for (int trial = 0; trial < 3; ++trial) {
    const auto e1 = ManufacturedField::random(rng, 2, false);
    const auto e2 = ManufacturedField::random(rng, 2, false);
    const auto r = transform01_check(e1, e2, pts);
    CHECK(r.formula_vs_lhs.relative() < 1e-9);
    CHECK(r.formula_vs_general.relative() < 1e-9);
  }
}

TEST_CASE("tilde n and the cubic source on trivial states") {
  SpectralGrid g(10.0, 32);
  FieldState s(g, 2.0);
  for (int i1 = 0; i1 < 32; ++i1)
    for (int i2 = 0; i2 < 32; ++i2) s.n(i1, i2) = std::exp(-g.coordinate(i1) * g.coordinate(i1));
  const RealField tn = tilde_n(s);
  CHECK(max_norm(tn - s.n) == 0.0);
  CHECK(max_norm(box_tilde_n_source(s)) < 1e-15);
  CHECK(s.finite());

  for (int i1 = 0; i1 < 32; ++i1)
    for (int i2 = 0; i2 < 32; ++i2) {
      const double r2 = g.coordinate(i1) * g.coordinate(i1) + g.coordinate(i2) * g.coordinate(i2);
      s.E[0](i1, i2) = std::exp(-r2 / 4);
    }
  RealField diff = tilde_n(s) - s.n;
  CHECK(l2_norm(diff) == doctest::Approx(0.25 * l2_norm(laplacian_energy_density(s))).epsilon(1e-12));
}

TEST_CASE("dyadic window sums") {
  std::vector<double> t, a, b;
  for (int i = 0; i <= 64 * 400; ++i) {
    const double x = 1.0 + i / 400.0;
    t.push_back(x);
    a.push_back(std::pow(x, -1.5));
    b.push_back(1.0 / x);
  }
  const auto wa = scattering_criterion(t, a, 0, 5);
  const auto wb = scattering_criterion(t, b, 0, 5);
  for (std::size_t m = 1; m < wa.size(); ++m) {
    CHECK(wa[m].sum / wa[m - 1].sum == doctest::Approx(std::sqrt(0.5)).epsilon(1e-5));
    CHECK(wb[m].sum == doctest::Approx(std::log(2.0)).epsilon(1e-5));
  }
  CHECK(window_integral(t, b, 1.3, 7.9) == doctest::Approx(std::log(7.9 / 1.3)).epsilon(1e-5));
  CHECK_THROWS_AS(scattering_criterion(t, a, 0, 6), RangeError);
}
