#pragma once

#include <array>
#include <functional>

#include "exwave/weights.hpp"

namespace exwave {

/// A smooth radial function on [1, inf) supported in [a, b] with 1 < a < b,
/// with derivative evaluators up to order 3.
struct RadialProfile {
  std::function<double(double)> f;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  std::function<double(double)> d3;
  double a = 2.0;
  double b = 4.0;

  double operator()(double r) const { return (r <= a || r >= b) ? 0.0 : f(r); }
  double deriv1(double r) const { return (r <= a || r >= b) ? 0.0 : d1(r); }
  double deriv2(double r) const { return (r <= a || r >= b) ? 0.0 : d2(r); }
  double deriv3(double r) const { return (r <= a || r >= b) ? 0.0 : d3(r); }
  bool is_zero() const { return !f; }

  static RadialProfile zero();
  /// amp * smooth_bump((r - lo)/(hi - lo)), supported in [lo, hi] with 1 < lo.
  static RadialProfile scaled_bump(double lo, double hi, double amp = 1.0);
  /// factor * this
  RadialProfile scaled(double factor) const;
};

/// Two-branch extension encoding the Dirichlet boundary of the unit ball:
/// rho > 1: rho f(rho); rho <= 1: -(2-rho) f(2-rho).  Antisymmetric about 1.
struct CheckExtension {
  RadialProfile src;

  double eval(double rho) const {
    if (rho > 1.0) return rho * src(rho);
    const double q = 2.0 - rho;
    return -q * src(q);
  }
  double d1(double rho) const {
    const double q = rho > 1.0 ? rho : 2.0 - rho;
    return src(q) + q * src.deriv1(q);
  }
  double d2(double rho) const {
    if (rho > 1.0) return 2.0 * src.deriv1(rho) + rho * src.deriv2(rho);
    const double q = 2.0 - rho;
    return -(2.0 * src.deriv1(q) + q * src.deriv2(q));
  }
  double d3(double rho) const {
    const double q = rho > 1.0 ? rho : 2.0 - rho;
    return 3.0 * src.deriv2(q) + q * src.deriv3(q);
  }
  double support_lo() const { return 2.0 - src.b; }
  double support_hi() const { return src.b; }
};

CheckExtension check_extend(const RadialProfile& f);

/// Sampled radiation field in the radial exterior setting: a function of s
/// vanishing for s >= support_radius.
struct RadiationField {
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
  double support_radius = 0.0;
  int decay_order = 4;

  double operator()(double s) const { return eval(s); }
};

/// F_+(s) = (1/2)(d/ds f0_check(s) - f1_check(s)); support_radius = max(b0, b1).
RadiationField radiation_field_exterior_radial(const RadialProfile& f0,
                                               const RadialProfile& f1);

/// Rapidly decaying free-space data (phi0, phi1); values below 1e-14 of scale
/// outside |y| = effective_support.
struct FreeSpaceData {
  std::function<double(double, double, double)> phi0;
  std::function<double(double, double, double)> phi1;
  std::function<double(double)> phi0_radial;  // set when data is radial
  std::function<double(double)> phi1_radial;
  double effective_support = 8.0;
  bool radial = false;

  static FreeSpaceData make_radial(std::function<double(double)> p0,
                                   std::function<double(double)> p1,
                                   double effective_support);
};

/// Plane integral of psi over {y . theta = s}, truncated at effective_support.
double radon_plane(const std::function<double(double, double, double)>& psi,
                   double effective_support, double s,
                   const std::array<double, 3>& theta, double tol = 1e-10);

/// Radial reduction of the plane integral: 2*pi * int_{|s|}^{inf} rho psi(rho) drho.
double radon_radial(const std::function<double(double)>& psi_star,
                    double effective_support, double s, double tol = 1e-10);

/// Friedlander radiation field of free-space data:
/// (1/(4 pi)) * (R[phi1](s,theta) - d/ds R[phi0](s,theta)).
/// The s-derivative uses 4th-order central differences with step h_s.
double radiation_field_free(const FreeSpaceData& data, double s,
                            const std::array<double, 3>& theta, double tol = 1e-10,
                            double h_s = 1e-2);

}  // namespace exwave
