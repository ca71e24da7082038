#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "exwave/radiation.hpp"

namespace exwave {

/// Radial mixed problem exterior to the unit ball:
/// box u = c (dt u)^2, u(t,1) = 0, u(0) = eps f0, dt u(0) = eps f1.
struct RadialIVP {
  double c = 1.0;
  double eps = 0.1;
  RadialProfile f0;
  RadialProfile f1;
  double support_radius = 4.0;  // R: data supported in (1, R]
};

struct SolverConfig {
  double h = 0.01;              // characteristic-aligned step, dt = dr = h
  double band_window = 8.0;     // truncate to r in [max(1, t-W), t+R]; <= 0: full
  double blowup_threshold = 0;  // bound on |dt v|; <= 0: 1e4 * eps * max|f1_check|
  int picard_iters = 3;
  double picard_tol = 1e-12;
  double t_max = 1000.0;
  long retain_stride = 0;            // keep every k-th row (0: keep none)
  std::vector<double> probe_s;       // characteristic probes, snapped to grid
  /// Called for each completed row n with its centered dt v:
  /// observer(n, t, jlo, v, dtv).  Lets experiments stream statistics
  /// off long runs without retaining rows.
  std::function<void(long, double, long, const std::vector<double>&,
                     const std::vector<double>&)>
      observer;
};

enum class BlowupTrigger { none, threshold, picard_divergence };

struct BlowupReport {
  double t_num = 0.0;  // detected lifespan, or the reached horizon if survived
  BlowupTrigger trigger = BlowupTrigger::none;
  bool survived = true;
  double uncertainty = 0.0;  // +- h
  // Filled by the experiment layer after rerunning:
  double threshold_sensitivity = std::numeric_limits<double>::quiet_NaN();
  double grid_convergence = std::numeric_limits<double>::quiet_NaN();
};

struct SolutionRow {
  long n = 0;       // time index, t = n h
  double t = 0.0;
  long jlo = 0;     // first stored column, r = 1 + j h
  std::vector<double> v;    // v = r u*
  std::vector<double> dtv;  // centered dt v (one-sided at band edges)
};

/// Samples of U(t,s) = (t+s) dt u*(t, t+s) = dt v along the outgoing
/// characteristic r - t = s, plus the running integral of U^2/(sigma+s).
struct CharacteristicTrace {
  double s = 0.0;
  long d = 0;  // s = 1 + d h
  std::vector<double> U;     // indexed by row
  std::vector<double> iout;  // trapezoid of U^2/(sigma+s) up to each row
};

struct SolutionField {
  double h = 0.0;
  double R = 0.0;
  double eps = 0.0;
  double c = 0.0;  // sign-normalized coefficient actually solved with
  double band_window = 0.0;
  long retain_stride = 0;
  long n_rows = 0;  // rows advanced (last valid row index)
  std::vector<SolutionRow> rows;
  std::vector<CharacteristicTrace> traces;

  double t_of(long n) const { return n * h; }
  double r_of(long j) const { return 1.0 + j * h; }
};

/// Exact linear exterior solution from the check-extension representation,
/// for data (f0, f1) (unscaled).  All derivatives analytic.
class LinearExterior {
 public:
  LinearExterior(const RadialProfile& f0, const RadialProfile& f1,
                 double quad_tol = 1e-12);

  double u(double t, double r) const;
  double ut(double t, double r) const;
  double ur(double t, double r) const;
  double support_radius() const { return R_; }

 private:
  double int_f1(double lo, double hi) const;
  CheckExtension c0_, c1_;
  double R_;
  double tol_;
};

/// u0*(t, r) for the homogeneous problem with data (ivp.f0, ivp.f1).
double linear_exact(const RadialIVP& ivp, double t, double r, double tol = 1e-12);

/// March the characteristic-aligned diamond scheme.  c < 0 is normalized by
/// the u -> -u symmetry (the returned field belongs to the normalized
/// problem with c > 0; lifespans and |dt v| are unaffected).
std::pair<SolutionField, BlowupReport> solve(const RadialIVP& ivp,
                                             const SolverConfig& cfg);

/// U(t,s) sampled from retained rows by linear interpolation of dt v.
std::vector<std::pair<double, double>> u_along_characteristic(
    const SolutionField& sol, double s);

/// Closed-form lower bound 2 eps s f1(s) / (4 - eps c s f1(s) log((t+s)/s));
/// +infinity once the denominator is non-positive (past its blow-up).
double lower_bound_rhs(const RadialIVP& ivp, double t, double s);

struct DuhamelTarget {
  double t = 0.0;
  double s = 1.0;  // r = t + s, s >= 1
};

struct DuhamelResidualReport {
  double max_abs = 0.0;
  bool partial = false;  // some history samples fell outside the band
  int n_samples = 0;
};

/// Residual of the integral identity r dt u* = data + (c/2)(incoming +
/// outgoing) against the trapezoid rule over retained rows.
DuhamelResidualReport duhamel_residual(const SolutionField& sol,
                                       const RadialIVP& ivp,
                                       const std::vector<DuhamelTarget>& targets);

/// max over the support of |f1_check| = |s f1(s)| (used for default thresholds)
double max_check_amplitude(const RadialProfile& f1);

}  // namespace exwave
