#include "exwave/profile.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace exwave {

NonlinCoeffs::NonlinCoeffs(const std::array<std::array<double, 4>, 4>& g) {
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const double v = 0.5 * (g[a][b] + g[b][a]);
      if (!std::isfinite(v))
        throw std::invalid_argument("NonlinCoeffs: non-finite entry");
      g_[a][b] = v;
    }
}

NonlinCoeffs NonlinCoeffs::dt_squared(double c) {
  std::array<std::array<double, 4>, 4> g{};
  g[0][0] = c;
  return NonlinCoeffs(g);
}

NonlinCoeffs NonlinCoeffs::null_form() {
  std::array<std::array<double, 4>, 4> g{};
  g[0][0] = 1.0;
  g[1][1] = g[2][2] = g[3][3] = -1.0;
  return NonlinCoeffs(g);
}

double g_of_theta(const NonlinCoeffs& coeffs, const std::array<double, 3>& theta) {
  const double n2 =
      theta[0] * theta[0] + theta[1] * theta[1] + theta[2] * theta[2];
  if (std::abs(n2 - 1.0) > 1e-12)
    throw std::invalid_argument("g_of_theta: theta must be a unit vector");
  const std::array<double, 4> th{-1.0, theta[0], theta[1], theta[2]};
  double sum = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) sum += coeffs.g(a, b) * th[a] * th[b];
  return sum;
}

double TauStar::value() const {
  if (!finite_) throw std::domain_error("TauStar: value() on infinite tau_*");
  return v_;
}

namespace {

// Roughly uniform sphere sampling (Fibonacci lattice).
std::vector<std::array<double, 3>> fibonacci_sphere(int n) {
  std::vector<std::array<double, 3>> pts;
  pts.reserve(n);
  const double ga = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = ga * i;
    pts.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
  }
  return pts;
}

std::array<double, 3> sph(double a, double b) {
  return {std::sin(a) * std::cos(b), std::sin(a) * std::sin(b), std::cos(a)};
}

}  // namespace

TauStar tau_star_general(const RadiationField& fplus, const NonlinCoeffs& coeffs) {
  const double R = fplus.support_radius;
  const double lo = 2.0 - R - 1.0;
  const double hi = R + 1.0;
  const int ns = static_cast<int>(401 * (hi - lo)) + 1;
  const auto thetas = fibonacci_sphere(128);

  double best = 0.0;
  double best_s = lo;
  std::array<double, 3> best_th = thetas.front();
  for (const auto& th : thetas) {
    const double G = g_of_theta(coeffs, th);
    if (G == 0.0) continue;
    for (int i = 0; i < ns; ++i) {
      const double s = lo + (hi - lo) * i / (ns - 1);
      const double v = -0.5 * G * fplus(s);
      if (v > best) {
        best = v;
        best_s = s;
        best_th = th;
      }
    }
  }
  if (best <= 1e-14) return TauStar::infinity();

  // golden refinement in s at the best theta
  const double Gb = g_of_theta(coeffs, best_th);
  const double ds = (hi - lo) / (ns - 1);
  auto obj_s = [&](double s) { return -0.5 * Gb * fplus(s); };
  auto [s_ref, v_ref] =
      golden_section_max(obj_s, best_s - 2.0 * ds, best_s + 2.0 * ds, 1e-10);
  best = std::max(best, v_ref);
  best_s = s_ref;

  // local refinement over the sphere in spherical coordinates
  double pa = std::acos(std::clamp(best_th[2], -1.0, 1.0));
  double pb = std::atan2(best_th[1], best_th[0]);
  double step = 0.35;
  for (int round = 0; round < 24; ++round) {
    bool moved = false;
    for (const auto& [da, db] : {std::pair{step, 0.0}, {-step, 0.0},
                                 {0.0, step}, {0.0, -step}}) {
      const auto th = sph(pa + da, pb + db);
      const double v = -0.5 * g_of_theta(coeffs, th) * fplus(best_s);
      if (v > best) {
        best = v;
        pa += da;
        pb += db;
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
    if (step < 1e-9) break;
  }
  // one more s-polish at the refined theta
  const double Gf = g_of_theta(coeffs, sph(pa, pb));
  auto obj2 = [&](double s) { return -0.5 * Gf * fplus(s); };
  auto [s2, v2] = golden_section_max(obj2, best_s - 2.0 * ds, best_s + 2.0 * ds, 1e-10);
  (void)s2;
  best = std::max(best, v2);

  return TauStar::finite(1.0 / best);
}

TauStar tau_star_radial(double c, const RadialProfile& f1) {
  if (f1.is_zero()) return TauStar::infinity();
  const CheckExtension c1 = check_extend(f1);
  const double lo = c1.support_lo();
  const double hi = c1.support_hi();
  auto obj = [&](double s) { return 0.25 * c * c1.eval(s); };
  const int ns = static_cast<int>(401 * (hi - lo)) + 1;
  double best = 0.0;
  double best_s = lo;
  for (int i = 0; i < ns; ++i) {
    const double s = lo + (hi - lo) * i / (ns - 1);
    const double v = obj(s);
    if (v > best) {
      best = v;
      best_s = s;
    }
  }
  if (best <= 1e-14) return TauStar::infinity();
  const double ds = (hi - lo) / (ns - 1);
  auto [sx, vx] = golden_section_max(obj, best_s - 2.0 * ds, best_s + 2.0 * ds, 1e-10);
  (void)sx;
  return TauStar::finite(1.0 / std::max(best, vx));
}

double ProfileContext::denom(double s, double G, double tau) const {
  if (tau < 0.0) throw std::domain_error("profile: tau must be >= 0");
  if (tau_star.is_finite() && tau >= tau_star.value())
    throw std::domain_error("profile: tau >= tau_* (profile blow-up)");
  const double d = 1.0 + 0.5 * G * fplus(s) * tau;
  if (d <= 0.0) throw std::domain_error("profile: non-positive denominator");
  return d;
}

double ProfileContext::P(double s, const std::array<double, 3>& theta,
                         double tau) const {
  const double G = g_of_theta(coeffs, theta);
  return fplus(s) / denom(s, G, tau);
}

double ProfileContext::dP_ds(double s, const std::array<double, 3>& theta,
                             double tau) const {
  const double G = g_of_theta(coeffs, theta);
  const double d = denom(s, G, tau);
  return fplus.deriv(s) / (d * d);
}

double ProfileContext::p(double s, const std::array<double, 3>& theta, double tau,
                         double tol) const {
  const double R = fplus.support_radius;
  if (s >= R) return 0.0;
  const double G = g_of_theta(coeffs, theta);
  denom(s, G, tau);  // domain check
  return adaptive_quad(
      [&](double sp) { return -fplus(sp) / (1.0 + 0.5 * G * fplus(sp) * tau); }, s,
      R, tol);
}

double ProfileContext::dp_dtau(double s, const std::array<double, 3>& theta,
                               double tau, double tol) const {
  const double R = fplus.support_radius;
  if (s >= R) return 0.0;
  const double G = g_of_theta(coeffs, theta);
  denom(s, G, tau);
  return 0.5 * G *
         adaptive_quad(
             [&](double sp) {
               const double Pv = fplus(sp) / (1.0 + 0.5 * G * fplus(sp) * tau);
               return Pv * Pv;
             },
             s, R, tol);
}

double ProfileContext::d2p_dtau2(double s, const std::array<double, 3>& theta,
                                 double tau, double tol) const {
  const double R = fplus.support_radius;
  if (s >= R) return 0.0;
  const double G = g_of_theta(coeffs, theta);
  denom(s, G, tau);
  return -0.5 * G * G *
         adaptive_quad(
             [&](double sp) {
               const double Pv = fplus(sp) / (1.0 + 0.5 * G * fplus(sp) * tau);
               return Pv * Pv * Pv;
             },
             s, R, tol);
}

ProfileContext make_profile_context(RadiationField fplus, NonlinCoeffs coeffs) {
  TauStar ts = tau_star_general(fplus, coeffs);
  const double R = fplus.support_radius;
  Grid1D sg(2.0 - R - 1.0, R + 1.0, 1024);
  return ProfileContext{std::move(fplus), std::move(coeffs), ts, sg};
}

}  // namespace exwave
