#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace exwave {

/// <z> = sqrt(1 + z^2)
inline double jb(double z) { return std::sqrt(1.0 + z * z); }

/// A point (t, r) of the exterior space-time, r = |x|.
struct SpacetimePoint {
  double t = 0.0;
  double r = 1.0;
};

/// Uniform 1D grid on [lo, hi] with n points.
struct Grid1D {
  double lo;
  double hi;
  int n;

  Grid1D(double lo_, double hi_, int n_) : lo(lo_), hi(hi_), n(n_) {
    if (!(lo < hi)) throw std::invalid_argument("Grid1D: lo must be < hi");
    if (n < 2) throw std::invalid_argument("Grid1D: need at least 2 points");
  }
  double spacing() const { return (hi - lo) / (n - 1); }
  double point(int i) const { return lo + spacing() * i; }
};

/// Weight exponents used by the decay diagnostics.
struct WeightParams {
  double nu = 0.0;
  double kappa = 0.0;
  double rho = 0.0;
  double mu = 0.0;      // 0 < mu <= 1/4 where used in error diagnostics
  double lambda = 0.0;  // in [0, 1/2]
};

/// Psi_nu(t): log(2+t) for nu = 0, otherwise 1.
inline double psi_nu(double nu, double t) {
  return nu == 0.0 ? std::log(2.0 + t) : 1.0;
}

/// W_{nu,kappa}(t,r) = <t+r>^nu (min{<r>, <t-r>})^kappa.
inline double w_nu_kappa(double nu, double kappa, double t, double r) {
  const double m = std::min(jb(r), jb(t - r));
  return std::pow(jb(t + r), nu) * std::pow(m, kappa);
}

/// Phi_nu(t,r): <t+r>^nu (nu<0), 1/log(2 + <t+r>/<t-r>) (nu=0), <t-r>^nu (nu>0).
inline double phi_nu(double nu, double t, double r) {
  if (nu < 0.0) return std::pow(jb(t + r), nu);
  if (nu > 0.0) return std::pow(jb(t - r), nu);
  return 1.0 / std::log(2.0 + jb(t + r) / jb(t - r));
}

/// A field sampled on times x uniform r-grid, one row per time.
struct SampledField {
  std::vector<double> times;
  Grid1D rgrid;
  std::vector<std::vector<double>> rows;  // rows[i][j] = value(times[i], rgrid.point(j))
};

/// Discrete surrogate of the weighted sup-norm: max over samples of
/// <r> * weight(t, r) * |field(t, r)|.  Rejects non-finite samples.
double weighted_sup(const SampledField& field,
                    const std::function<double(double, double)>& weight);

class QuadratureError : public std::runtime_error {
 public:
  explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline double simpson(double a, double fa, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_quad_rec(F&& f, double a, double fa, double b, double fb, double m,
                         double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, fa, flm, m, fm);
  const double right = simpson(m, fm, frm, b, fb);
  const double err = (left + right - whole) / 15.0;
  if (std::abs(err) <= tol) return left + right + err;
  if (depth <= 0)
    throw QuadratureError("adaptive_quad: max subdivision depth reached");
  return adaptive_quad_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_quad_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b].  The result Q satisfies
/// |Q - integral| <= tol * (1 + |Q|) for smooth integrands; failure to converge
/// within the maximum subdivision depth raises QuadratureError.
template <class F>
double adaptive_quad(F&& f, double a, double b, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("adaptive_quad: tol must be > 0");
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = detail::simpson(a, fa, fm, b, fb);
  const double abs_tol = tol * (1.0 + std::abs(whole));
  return detail::adaptive_quad_rec(f, a, fa, b, fb, m, fm, whole, abs_tol, 48);
}

inline double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                            double tol) {
  return adaptive_quad<const std::function<double(double)>&>(f, a, b, tol);
}

/// exp(-1/(x(1-x))) on (0,1), zero elsewhere; derivatives up to order 3.
double smooth_bump(double x);
double smooth_bump_d1(double x);
double smooth_bump_d2(double x);
double smooth_bump_d3(double x);

/// Normalized primitive of the bump: 0 at x<=0, 1 at x>=1, strictly
/// increasing in between.  Evaluated from a cached table with Hermite
/// interpolation; first two derivatives are analytic.
double smoothstep(double x);
double smoothstep_d1(double x);
double smoothstep_d2(double x);

/// integral of smooth_bump over [0,1]
double smooth_bump_mass();

/// chi: non-increasing, 1 on [0,1], 0 on [2,inf).
/// xi : non-decreasing, 0 on [0,1/2], 1 on [3/4,inf).
/// Both realized from smoothstep, so they are C^infinity.
struct SmoothCutoffs {
  double chi(double s) const { return 1.0 - smoothstep(s - 1.0); }
  double chi_d1(double s) const { return -smoothstep_d1(s - 1.0); }
  double chi_d2(double s) const { return -smoothstep_d2(s - 1.0); }

  double xi(double s) const { return smoothstep(4.0 * s - 2.0); }
  double xi_d1(double s) const { return 4.0 * smoothstep_d1(4.0 * s - 2.0); }
  double xi_d2(double s) const { return 16.0 * smoothstep_d2(4.0 * s - 2.0); }
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
/// Returns (argmax, max).  Used to refine coarse scan maxima.
std::pair<double, double> golden_section_max(const std::function<double(double)>& f,
                                             double lo, double hi, double xtol);

}  // namespace exwave
