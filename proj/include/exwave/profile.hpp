#pragma once

#include <array>
#include <limits>
#include <optional>

#include "exwave/radiation.hpp"
#include "exwave/weights.hpp"

namespace exwave {

/// Quadratic nonlinearity coefficients g^{ab}, a,b in {0..3} with 0 = time.
/// Symmetrized on construction (leaves the form unchanged).
class NonlinCoeffs {
 public:
  explicit NonlinCoeffs(const std::array<std::array<double, 4>, 4>& g);
  /// F = c (dt u)^2
  static NonlinCoeffs dt_squared(double c);
  /// F = (dt u)^2 - |grad u|^2  (null form: G vanishes on the sphere)
  static NonlinCoeffs null_form();

  double g(int a, int b) const { return g_[a][b]; }

 private:
  std::array<std::array<double, 4>, 4> g_;
};

/// G(theta) = sum g^{ab} theta_a theta_b with theta_0 = -1, |theta| = 1.
double g_of_theta(const NonlinCoeffs& coeffs, const std::array<double, 3>& theta);

/// tau_* as an explicit finite-or-infinite value ("infinite" means the
/// profile never blows up and global existence is predicted).
class TauStar {
 public:
  static TauStar infinity() { return TauStar(0.0, false); }
  static TauStar finite(double v) { return TauStar(v, true); }

  bool is_finite() const { return finite_; }
  double value() const;
  /// finite value or +inf as a double (for printing / comparisons)
  double as_double() const {
    return finite_ ? v_ : std::numeric_limits<double>::infinity();
  }

 private:
  TauStar(double v, bool finite) : v_(v), finite_(finite) {}
  double v_;
  bool finite_;
};

/// tau_* = 1 / sup{ -G(theta) F_+(s,theta) / 2 } by dense (s, theta) scan with
/// golden-section refinement; infinite when the sup is <= 0 (within 1e-14).
TauStar tau_star_general(const RadiationField& fplus, const NonlinCoeffs& coeffs);

/// Radial closed form for F = c (dt u)^2, f0 = 0: 1 / sup_s { c fcheck_1(s)/4 }.
/// The sup runs over the whole line, which reduces to sup_{s>=1} c s f1(s)/4
/// whenever c f1 >= 0.
TauStar tau_star_radial(double c, const RadialProfile& f1);

/// Profile evaluators: P solves 2 dP/dtau = -G P^2 with P(.,0) = F_+, and p is
/// its s-antiderivative vanishing at +inf.
struct ProfileContext {
  RadiationField fplus;
  NonlinCoeffs coeffs;
  TauStar tau_star;
  Grid1D s_grid;

  /// P(s, theta, tau) = F_+(s) / (1 + G(theta) F_+(s) tau / 2)
  double P(double s, const std::array<double, 3>& theta, double tau) const;
  double dP_ds(double s, const std::array<double, 3>& theta, double tau) const;
  /// p(s, theta, tau) = -int_s^inf P(s', theta, tau) ds'
  double p(double s, const std::array<double, 3>& theta, double tau,
           double tol = 1e-11) const;
  double dp_dtau(double s, const std::array<double, 3>& theta, double tau,
                 double tol = 1e-11) const;
  double d2p_dtau2(double s, const std::array<double, 3>& theta, double tau,
                   double tol = 1e-11) const;

  // Radial conveniences (theta = +e3; for F = c (dt u)^2 the value of G is
  // theta-independent anyway).
  double P(double s, double tau) const { return P(s, kE3, tau); }
  double dP_ds(double s, double tau) const { return dP_ds(s, kE3, tau); }
  double p(double s, double tau, double tol = 1e-11) const {
    return p(s, kE3, tau, tol);
  }
  double dp_dtau(double s, double tau, double tol = 1e-11) const {
    return dp_dtau(s, kE3, tau, tol);
  }
  double d2p_dtau2(double s, double tau, double tol = 1e-11) const {
    return d2p_dtau2(s, kE3, tau, tol);
  }

  static constexpr std::array<double, 3> kE3{0.0, 0.0, 1.0};

 private:
  double denom(double s, double G, double tau) const;
};

ProfileContext make_profile_context(RadiationField fplus, NonlinCoeffs coeffs);

}  // namespace exwave
