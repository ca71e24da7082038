#include <cmath>
#include <random>

#include "doctest.h"
#include "exwave/profile.hpp"

using namespace exwave;

namespace {

ProfileContext canonical_context(double c) {
  const auto f0 = RadialProfile::zero();
  const auto f1 = RadialProfile::scaled_bump(2.0, 4.0);
  return make_profile_context(radiation_field_exterior_radial(f0, f1),
                              NonlinCoeffs::dt_squared(c));
}

}  // namespace

TEST_CASE("g_of_theta") {
  std::mt19937 rng(5150);
  std::normal_distribution<double> n01(0.0, 1.0);
  auto rand_theta = [&] {
    std::array<double, 3> v{n01(rng), n01(rng), n01(rng)};
    const double nn = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    for (auto& x : v) x /= nn;
    return v;
  };

  // F = c (dt u)^2: G is constant c
  const auto cst = NonlinCoeffs::dt_squared(2.5);
  for (int k = 0; k < 20; ++k)
    CHECK(g_of_theta(cst, rand_theta()) == doctest::Approx(2.5).epsilon(1e-12));

  // null form: G vanishes identically on the sphere
  const auto nf = NonlinCoeffs::null_form();
  for (int k = 0; k < 20; ++k)
    CHECK(std::abs(g_of_theta(nf, rand_theta())) < 1e-12);

  // g^{0,1} = 1 only: G(theta) = -theta_1
  std::array<std::array<double, 4>, 4> g{};
  g[0][1] = 1.0;
  const NonlinCoeffs mixed(g);
  CHECK(g_of_theta(mixed, {1.0, 0.0, 0.0}) == doctest::Approx(-1.0));
  CHECK(g_of_theta(mixed, {-1.0, 0.0, 0.0}) == doctest::Approx(1.0));

  CHECK_THROWS_AS(g_of_theta(cst, {0.5, 0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("tau_star trivial cases") {
  const auto zero = RadialProfile::zero();
  const auto f1 = RadialProfile::scaled_bump(2.0, 4.0);

  // zero data
  CHECK_FALSE(tau_star_radial(1.0, zero).is_finite());
  const auto fp0 = radiation_field_exterior_radial(zero, zero);
  CHECK_FALSE(tau_star_general(fp0, NonlinCoeffs::dt_squared(1.0)).is_finite());

  // null coefficients
  const auto fp = radiation_field_exterior_radial(zero, f1);
  CHECK_FALSE(tau_star_general(fp, NonlinCoeffs::null_form()).is_finite());
}

TEST_CASE("tau_star radial formula inversion and brute-force oracle") {
  const auto f1 = RadialProfile::scaled_bump(2.0, 4.0);

  // c = 4: tau_* = 1 / max_s s f1(s)
  const int n = 1000001;
  double M = 0.0;
  for (int i = 1; i < n; ++i) {
    const double s = 2.0 + 2.0 * i / n;
    M = std::max(M, s * f1(s));
  }
  const auto t4 = tau_star_radial(4.0, f1);
  REQUIRE(t4.is_finite());
  CHECK(t4.value() == doctest::Approx(1.0 / M).epsilon(1e-9));

  // c = 1: tau_* = 4 / max, maximum near s ~ 3
  const auto t1 = tau_star_radial(1.0, f1);
  REQUIRE(t1.is_finite());
  CHECK(t1.value() == doctest::Approx(4.0 / M).epsilon(1e-9));

  // the sup is attained at an interior point and is strictly positive
  const auto fp = radiation_field_exterior_radial(RadialProfile::zero(), f1);
  double best = 0.0, best_s = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double s = 2.0 + 2.0 * i / 4000.0;
    const double v = -0.5 * fp(s);
    if (v > best) {
      best = v;
      best_s = s;
    }
  }
  CHECK(best > 0.0);
  CHECK(best_s > 2.0 + 1e-3);
  CHECK(best_s < 4.0 - 1e-3);
}

TEST_CASE("tau_star general scan agrees with the radial closed form") {
  const auto f0 = RadialProfile::zero();
  const auto f1 = RadialProfile::scaled_bump(2.0, 4.0);
  const auto fp = radiation_field_exterior_radial(f0, f1);
  for (double c : {1.0, 64.0}) {
    const auto tg = tau_star_general(fp, NonlinCoeffs::dt_squared(c));
    const auto tr = tau_star_radial(c, f1);
    REQUIRE(tg.is_finite());
    REQUIRE(tr.is_finite());
    CHECK(std::abs(tg.value() - tr.value()) / tr.value() <= 1e-6);
  }
}

TEST_CASE("tau_star is invariant under the u -> -u symmetry") {
  const auto f1 = RadialProfile::scaled_bump(2.0, 4.0);
  const auto a = tau_star_radial(64.0, f1);
  const auto b = tau_star_radial(-64.0, f1);  // mirror lobe of the extension
  REQUIRE(a.is_finite());
  REQUIRE(b.is_finite());
  CHECK(a.value() == doctest::Approx(b.value()).epsilon(1e-12));
}

TEST_CASE("profile P: initial condition, zero field, Riccati residual") {
  const auto ctx = canonical_context(1.0);
  REQUIRE(ctx.tau_star.is_finite());
  const double ts = ctx.tau_star.value();

  // tau = 0 recovers F_+
  for (double s : {2.3, 2.9, 3.5})
    CHECK(ctx.P(s, 0.0) == doctest::Approx(ctx.fplus(s)).epsilon(1e-14));

  // vanishing radiation field stays zero for all tau
  CHECK(ctx.P(5.0, 0.5 * ts) == 0.0);
  CHECK(ctx.P(-4.0, 0.5 * ts) == 0.0);

  // 2 dP/dtau + G P^2 = 0 by centered differences, over an (s, tau) grid
  const double dtau = 1e-4 * ts;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double s = 1.8 + 2.4 * i / 99.0;
    for (int j = 0; j < 100; ++j) {
      const double tau = 0.9 * ts * (j + 0.5) / 100.0;
      const double dP = (ctx.P(s, tau + dtau) - ctx.P(s, tau - dtau)) / (2 * dtau);
      const double P = ctx.P(s, tau);
      worst = std::max(worst, std::abs(2.0 * dP + 1.0 * P * P));
    }
  }
  CHECK(worst <= 1e-6);

  // domain error at and past tau_*
  CHECK_THROWS_AS(ctx.P(3.0, ts), std::domain_error);
  CHECK_THROWS_AS(ctx.P(3.0, 2.0 * ts), std::domain_error);
}

TEST_CASE("profile p: support, tau = 0 value, ds p = P") {
  const auto ctx = canonical_context(1.0);
  const double ts = ctx.tau_star.value();
  const double R = ctx.fplus.support_radius;

  // s beyond the support radius
  CHECK(ctx.p(R, 0.3 * ts) == 0.0);
  CHECK(ctx.p(R + 2.0, 0.3 * ts) == 0.0);

  // p(s, 0) equals the antiderivative of F_+ vanishing at +inf
  for (double s : {-3.0, 0.5, 2.5, 3.5}) {
    const double direct =
        -adaptive_quad([&](double x) { return ctx.fplus(x); }, s, R, 1e-12);
    CHECK(ctx.p(s, 0.0) == doctest::Approx(direct).epsilon(1e-8));
  }

  // ds p = P by centered differences
  const double h = 1e-4;
  double worst = 0.0;
  for (int i = 0; i < 60; ++i) {
    const double s = 1.6 + 2.8 * i / 59.0;
    for (double tau : {0.0, 0.4 * ts, 0.8 * ts}) {
      const double fd = (ctx.p(s + h, tau) - ctx.p(s - h, tau)) / (2 * h);
      worst = std::max(worst, std::abs(fd - ctx.P(s, tau)));
    }
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("profile p: scaled closeness to the linear profile (tau-scaling)") {
  const auto ctx = canonical_context(1.0);
  const double ts = ctx.tau_star.value();
  const double R = ctx.fplus.support_radius;

  // sup |ds p(s,tau) - F_+(s)| <s>^N / tau finite and refinement-stable, N = 2
  auto scan = [&](int ns) {
    double w = 0.0;
    for (int i = 0; i < ns; ++i) {
      const double s = (2.0 - R) + (2.0 * R - 2.0) * i / (ns - 1);
      for (double tau : {0.1 * ts, 0.45 * ts, 0.9 * ts}) {
        const double d = std::abs(ctx.P(s, tau) - ctx.fplus(s));
        w = std::max(w, d * jb(s) * jb(s) / tau);
      }
    }
    return w;
  };
  const double w1 = scan(301), w2 = scan(601);
  CHECK(w1 < 1e3);
  CHECK(std::abs(w2 - w1) / w1 < 0.05);

  // sup |p(s,tau) - p(s,0)| / tau finite on the same range
  auto scan_o = [&](int ns) {
    double w = 0.0;
    for (int i = 0; i < ns; ++i) {
      const double s = (2.0 - R) + (2.0 * R - 2.0) * i / (ns - 1);
      for (double tau : {0.1 * ts, 0.45 * ts, 0.9 * ts})
        w = std::max(w, std::abs(ctx.p(s, tau) - ctx.p(s, 0.0)) / tau);
    }
    return w;
  };
  const double v1 = scan_o(151), v2 = scan_o(301);
  CHECK(v1 < 1e3);
  CHECK(std::abs(v2 - v1) / v1 < 0.05);
}

TEST_CASE("profile dp_dtau and d2p_dtau2 match finite differences") {
  const auto ctx = canonical_context(64.0);
  const double ts = ctx.tau_star.value();
  const double dtau = 1e-5 * ts;
  for (double s : {2.2, 3.0, 3.6}) {
    for (double tau : {0.2 * ts, 0.6 * ts}) {
      const double fd1 = (ctx.p(s, tau + dtau) - ctx.p(s, tau - dtau)) / (2 * dtau);
      CHECK(ctx.dp_dtau(s, tau) == doctest::Approx(fd1).epsilon(1e-6));
      const double fd2 =
          (ctx.dp_dtau(s, tau + dtau) - ctx.dp_dtau(s, tau - dtau)) / (2 * dtau);
      CHECK(ctx.d2p_dtau2(s, tau) == doctest::Approx(fd2).epsilon(1e-5));
    }
  }
}
