#include <cmath>
#include <random>

#include "doctest.h"
#include "exwave/radiation.hpp"
#include "exwave/solver.hpp"

using namespace exwave;

namespace {

std::array<double, 3> random_unit(std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::array<double, 3> v{n(rng), n(rng), n(rng)};
  const double nn = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return {v[0] / nn, v[1] / nn, v[2] / nn};
}

}  // namespace

TEST_CASE("check_extend branch values and antisymmetry") {
  const auto f = RadialProfile::scaled_bump(2.0, 4.0);
  const auto fc = check_extend(f);

  // rho > 1 branch and its mirror
  CHECK(fc.eval(3.0) == doctest::Approx(3.0 * f(3.0)).epsilon(1e-15));
  CHECK(fc.eval(-1.0) == doctest::Approx(-3.0 * f(3.0)).epsilon(1e-15));

  // antisymmetry f_check(2 - rho) = -f_check(rho), exactly (both branches algebraic)
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> u(-5.0, 7.0);
  for (int k = 0; k < 1000; ++k) {
    const double rho = u(rng);
    CHECK(fc.eval(2.0 - rho) + fc.eval(rho) == 0.0);
  }

  // zero data
  const auto zc = check_extend(RadialProfile::zero());
  CHECK(zc.eval(0.4) == 0.0);
  CHECK(zc.eval(3.1) == 0.0);

  // integral over the full support vanishes by antisymmetry
  const double I = adaptive_quad([&](double x) { return fc.eval(x); }, 2.0 - f.b,
                                 f.b, 1e-12);
  CHECK(std::abs(I) <= 1e-10);
}

TEST_CASE("check_extend derivatives match finite differences") {
  const auto f = RadialProfile::scaled_bump(2.0, 4.0);
  const auto fc = check_extend(f);
  const double h = 1e-5;
  for (double rho : {2.4, 3.1, 3.8, -0.4, -1.1, 0.3}) {
    const double fd1 = (fc.eval(rho + h) - fc.eval(rho - h)) / (2 * h);
    CHECK(fc.d1(rho) == doctest::Approx(fd1).epsilon(1e-6));
    const double fd2 = (fc.d1(rho + h) - fc.d1(rho - h)) / (2 * h);
    CHECK(fc.d2(rho) == doctest::Approx(fd2).epsilon(1e-6));
    const double fd3 = (fc.d2(rho + h) - fc.d2(rho - h)) / (2 * h);
    CHECK(fc.d3(rho) == doctest::Approx(fd3).epsilon(1e-5));
  }
}

TEST_CASE("radon transforms: Gaussian oracle") {
  auto gauss3 = [](double x, double y, double z) {
    return std::exp(-(x * x + y * y + z * z));
  };
  auto gauss1 = [](double r) { return std::exp(-r * r); };
  const double eff = 8.5;

  std::mt19937 rng(99);
  for (double s : {0.0, 1.0, 2.0}) {
    const double expect = M_PI * std::exp(-s * s);
    CHECK(std::abs(radon_radial(gauss1, eff, s, 1e-11) - expect) < 1e-8);
    const auto th = random_unit(rng);
    CHECK(std::abs(radon_plane(gauss3, eff, s, th, 1e-11) - expect) < 1e-8);
  }
}

TEST_CASE("radon_plane is rotation-invariant for radial data") {
  auto bump3 = [](double x, double y, double z) {
    return smooth_bump(std::sqrt(x * x + y * y + z * z) / 3.0);
  };
  std::mt19937 rng(321);
  const double s = 0.8;
  double mn = 1e300, mx = -1e300;
  for (int k = 0; k < 10; ++k) {
    const double v = radon_plane(bump3, 3.2, s, random_unit(rng), 1e-11);
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  CHECK(mx - mn <= 1e-8);
}

TEST_CASE("radon radial reduction agrees with plane quadrature") {
  auto bump1 = [](double r) { return smooth_bump(r / 3.0); };
  auto bump3 = [&](double x, double y, double z) {
    return bump1(std::sqrt(x * x + y * y + z * z));
  };
  std::array<double, 3> th{0.0, 0.0, 1.0};
  for (double s : {0.0, 0.5, 1.5}) {
    const double a = radon_radial(bump1, 3.2, s, 1e-11);
    const double b = radon_plane(bump3, 3.2, s, th, 1e-11);
    CHECK(std::abs(a - b) <= 1e-7);
  }
  // support: empty intersection
  CHECK(radon_radial(bump1, 3.0, 3.5, 1e-11) == 0.0);
  CHECK(radon_plane(bump3, 3.0, 3.5, th, 1e-11) == 0.0);
}

TEST_CASE("free-space radiation field") {
  auto zero1 = [](double) { return 0.0; };
  auto gauss1 = [](double r) { return std::exp(-r * r); };
  const std::array<double, 3> th{0.0, 0.0, 1.0};

  // zero data
  const auto z = FreeSpaceData::make_radial(zero1, zero1, 8.5);
  CHECK(radiation_field_free(z, 0.7, th) == 0.0);

  // phi0 = 0, phi1 radial: F0(s) = (1/2) int_{|s|}^inf rho phi1(rho) drho
  const auto d = FreeSpaceData::make_radial(zero1, gauss1, 8.5);
  for (double s : {-1.0, 0.0, 0.8, 2.0}) {
    const double expect =
        0.5 * adaptive_quad([&](double r) { return r * gauss1(r); }, std::abs(s),
                            8.5, 1e-12);
    CHECK(std::abs(radiation_field_free(d, s, th, 1e-11) - expect) < 1e-8);
  }

  // decay: |F0(s)| <s>^N bounded for N = 4 with a Gaussian-tail datum
  const auto g = FreeSpaceData::make_radial(gauss1, gauss1, 9.5);
  double worst = 0.0;
  for (int i = 0; i <= 80; ++i) {
    const double s = -20.0 + 40.0 * i / 80.0;
    const double v = std::abs(radiation_field_free(g, s, th, 1e-10));
    worst = std::max(worst, v * std::pow(jb(s), 4));
  }
  CHECK(worst < 50.0);
}

TEST_CASE("exterior radial radiation field") {
  const auto zero = RadialProfile::zero();
  const auto f1 = RadialProfile::scaled_bump(2.0, 4.0);

  // zero data -> identically zero
  const auto f00 = radiation_field_exterior_radial(zero, zero);
  CHECK(f00(1.3) == 0.0);
  CHECK(f00(-2.0) == 0.0);

  // f0 = 0: F_+(s) = -(1/2) s f1(s) for s > 1; spot-check the canonical bump
  const auto fp = radiation_field_exterior_radial(zero, f1);
  CHECK(fp(3.0) == doctest::Approx(-0.5 * 3.0 * std::exp(-4.0)).epsilon(1e-14));

  // support: F_+(s) = 0 for s >= b
  CHECK(fp(4.0) == 0.0);
  CHECK(fp(4.7) == 0.0);
  CHECK(fp.support_radius == doctest::Approx(4.0));

  // derivative evaluator against finite differences
  const double h = 1e-6;
  for (double s : {2.6, 3.2, -0.9}) {
    const double fd = (fp(s + h) - fp(s - h)) / (2 * h);
    CHECK(fp.deriv(s) == doctest::Approx(fd).epsilon(1e-6));
  }

  // compact support makes <s>^N |F_+| trivially bounded and grid-stable
  for (int N : {2, 4, 6}) {
    auto scan = [&](int n) {
      double w = 0.0;
      for (int i = 0; i < n; ++i) {
        const double s = -6.0 + 12.0 * i / (n - 1);
        w = std::max(w, std::pow(jb(s), N) * std::abs(fp(s)));
      }
      return w;
    };
    const double w1 = scan(1201), w2 = scan(2401);
    CHECK(w1 < 1e3);
    CHECK(std::abs(w2 - w1) / w1 < 0.02);
  }
}

TEST_CASE("approach rate of u0 to its radiation-field asymptote (measured)") {
  // Measures sup (1+t+r)^2 <t-r> |u0 - r^{-1} F0(r-t)| over r >= t/2 >= 1.
  // The constant is data-dependent, so only finiteness and grid stability are
  // asserted.  For compactly supported data the difference is exactly zero
  // once r + t clears the support, so the sup lives near the first instants.
  const auto f0 = RadialProfile::scaled_bump(2.2, 3.6, 0.7);
  const auto f1 = RadialProfile::scaled_bump(2.0, 4.0);
  const LinearExterior lin(f0, f1, 1e-13);
  const auto c0 = check_extend(f0);
  const auto c1 = check_extend(f1);
  const double b = 4.0;

  auto friedlander = [&](double s) {
    if (s >= b) return 0.0;
    return 0.5 * c0.eval(s) +
           0.5 * adaptive_quad([&](double x) { return c1.eval(x); },
                               std::max(s, 2.0 - b), b, 1e-12);
  };

  auto scan = [&](int n) {
    double sup = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = 2.0 + 28.0 * i / (n - 1);
      for (int k = 0; k < n; ++k) {
        const double rlo = std::max(1.0, 0.5 * t);
        const double r = rlo + (t + b + 1.0 - rlo) * k / (n - 1);
        const double diff = lin.u(t, r) - friedlander(r - t) / r;
        sup = std::max(sup, std::pow(1.0 + t + r, 2) * jb(t - r) * std::abs(diff));
      }
    }
    return sup;
  };

  const double s1 = scan(60);
  const double s2 = scan(120);
  CHECK(std::isfinite(s1));
  CHECK(s1 < 1e3);
  CHECK(std::abs(s2 - s1) <= 0.10 * s1 + 1e-12);

  // exact vanishing once r + t clears the data support
  for (double t : {4.0, 9.0, 25.0})
    for (double r : {0.55 * t, 0.8 * t, t + 1.0})
      if (r + t >= b)
        CHECK(std::abs(lin.u(t, r) - friedlander(r - t) / r) <= 1e-12);
}

TEST_CASE("radon_plane rejects non-unit directions") {
  auto g = [](double, double, double) { return 1.0; };
  CHECK_THROWS_AS(radon_plane(g, 2.0, 0.0, {0.0, 0.0, 2.0}, 1e-8),
                  std::invalid_argument);
}
