#include "exwave/radiation.hpp"

#include <cmath>
#include <stdexcept>

namespace exwave {

RadialProfile RadialProfile::zero() {
  RadialProfile p;
  auto z = [](double) { return 0.0; };
  p.f = z;
  p.d1 = z;
  p.d2 = z;
  p.d3 = z;
  p.a = 2.0;
  p.b = 4.0;
  return p;
}

RadialProfile RadialProfile::scaled_bump(double lo, double hi, double amp) {
  if (!(1.0 < lo && lo < hi))
    throw std::invalid_argument("scaled_bump: need 1 < lo < hi");
  RadialProfile p;
  const double w = hi - lo;
  const double iw = 1.0 / w;
  p.f = [=](double r) { return amp * smooth_bump((r - lo) * iw); };
  p.d1 = [=](double r) { return amp * iw * smooth_bump_d1((r - lo) * iw); };
  p.d2 = [=](double r) { return amp * iw * iw * smooth_bump_d2((r - lo) * iw); };
  p.d3 = [=](double r) { return amp * iw * iw * iw * smooth_bump_d3((r - lo) * iw); };
  p.a = lo;
  p.b = hi;
  return p;
}

RadialProfile RadialProfile::scaled(double factor) const {
  if (is_zero()) return *this;
  RadialProfile p = *this;
  auto wrap = [factor](std::function<double(double)> g) {
    return [factor, g = std::move(g)](double r) { return factor * g(r); };
  };
  p.f = wrap(f);
  p.d1 = wrap(d1);
  p.d2 = wrap(d2);
  p.d3 = wrap(d3);
  return p;
}

CheckExtension check_extend(const RadialProfile& f) { return CheckExtension{f}; }

RadiationField radiation_field_exterior_radial(const RadialProfile& f0,
                                               const RadialProfile& f1) {
  const CheckExtension c0 = check_extend(f0);
  const CheckExtension c1 = check_extend(f1);
  RadiationField field;
  field.eval = [c0, c1](double s) { return 0.5 * (c0.d1(s) - c1.eval(s)); };
  field.deriv = [c0, c1](double s) { return 0.5 * (c0.d2(s) - c1.d1(s)); };
  field.support_radius = std::max(f0.b, f1.b);
  field.decay_order = 4;
  return field;
}

FreeSpaceData FreeSpaceData::make_radial(std::function<double(double)> p0,
                                         std::function<double(double)> p1,
                                         double effective_support) {
  FreeSpaceData d;
  d.phi0_radial = p0;
  d.phi1_radial = p1;
  d.phi0 = [p0](double x, double y, double z) {
    return p0(std::sqrt(x * x + y * y + z * z));
  };
  d.phi1 = [p1](double x, double y, double z) {
    return p1(std::sqrt(x * x + y * y + z * z));
  };
  d.effective_support = effective_support;
  d.radial = true;
  return d;
}

namespace {

// Orthonormal pair spanning the plane orthogonal to theta.
void plane_frame(const std::array<double, 3>& theta, std::array<double, 3>& e1,
                 std::array<double, 3>& e2) {
  // pick the axis least aligned with theta
  int k = 0;
  double amin = std::abs(theta[0]);
  for (int i = 1; i < 3; ++i)
    if (std::abs(theta[i]) < amin) {
      amin = std::abs(theta[i]);
      k = i;
    }
  std::array<double, 3> a{0.0, 0.0, 0.0};
  a[k] = 1.0;
  // e1 = normalize(a - (a.theta) theta)
  const double d = a[0] * theta[0] + a[1] * theta[1] + a[2] * theta[2];
  double n = 0.0;
  for (int i = 0; i < 3; ++i) {
    e1[i] = a[i] - d * theta[i];
    n += e1[i] * e1[i];
  }
  n = std::sqrt(n);
  for (int i = 0; i < 3; ++i) e1[i] /= n;
  e2[0] = theta[1] * e1[2] - theta[2] * e1[1];
  e2[1] = theta[2] * e1[0] - theta[0] * e1[2];
  e2[2] = theta[0] * e1[1] - theta[1] * e1[0];
}

}  // namespace

double radon_plane(const std::function<double(double, double, double)>& psi,
                   double effective_support, double s,
                   const std::array<double, 3>& theta, double tol) {
  const double n2 =
      theta[0] * theta[0] + theta[1] * theta[1] + theta[2] * theta[2];
  if (std::abs(n2 - 1.0) > 1e-10)
    throw std::invalid_argument("radon_plane: theta must be a unit vector");
  if (std::abs(s) >= effective_support) return 0.0;
  std::array<double, 3> e1, e2;
  plane_frame(theta, e1, e2);
  const double qmax = std::sqrt(effective_support * effective_support - s * s);
  // Polar in-plane quadrature: adaptive in the radius, periodic trapezoid in
  // the angle (spectrally accurate for smooth integrands on the circle).
  const int n_ang = 96;
  const double dphi = 2.0 * M_PI / n_ang;
  auto ring = [&](double q) {
    double sum = 0.0;
    for (int k = 0; k < n_ang; ++k) {
      const double c = std::cos(k * dphi);
      const double sn = std::sin(k * dphi);
      const double y0 = s * theta[0] + q * (c * e1[0] + sn * e2[0]);
      const double y1 = s * theta[1] + q * (c * e1[1] + sn * e2[1]);
      const double y2 = s * theta[2] + q * (c * e1[2] + sn * e2[2]);
      sum += psi(y0, y1, y2);
    }
    return q * sum * dphi;
  };
  return adaptive_quad(ring, 0.0, qmax, tol);
}

double radon_radial(const std::function<double(double)>& psi_star,
                    double effective_support, double s, double tol) {
  const double lo = std::abs(s);
  if (lo >= effective_support) return 0.0;
  return 2.0 * M_PI *
         adaptive_quad([&](double rho) { return rho * psi_star(rho); }, lo,
                       effective_support, tol);
}

double radiation_field_free(const FreeSpaceData& data, double s,
                            const std::array<double, 3>& theta, double tol,
                            double h_s) {
  auto r1 = [&](double sv) {
    return data.radial
               ? radon_radial(data.phi1_radial, data.effective_support, sv, tol)
               : radon_plane(data.phi1, data.effective_support, sv, theta, tol);
  };
  auto r0 = [&](double sv) {
    return data.radial
               ? radon_radial(data.phi0_radial, data.effective_support, sv, tol)
               : radon_plane(data.phi0, data.effective_support, sv, theta, tol);
  };
  // 4th-order central difference for d/ds R[phi0]
  const double d0 = (-r0(s + 2.0 * h_s) + 8.0 * r0(s + h_s) - 8.0 * r0(s - h_s) +
                     r0(s - 2.0 * h_s)) /
                    (12.0 * h_s);
  return (r1(s) - d0) / (4.0 * M_PI);
}

}  // namespace exwave
