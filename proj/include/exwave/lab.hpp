#pragma once

#include <string>
#include <vector>

#include "exwave/approx.hpp"
#include "exwave/profile.hpp"
#include "exwave/solver.hpp"

namespace exwave {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Declarative experiment description (key = value sections, flag overrides).
struct ExperimentConfig {
  std::string datum = "canonical";  // canonical: f0 = 0, f1 = bump on [2,4]
  double c = 64.0;                  // F = c (dt u)^2
  std::vector<double> eps_list = {0.5, 0.42, 0.35, 0.29, 0.24, 0.20};
  double h0 = 0.02;        // coarsest grid step of the convergence ladder
  int max_halvings = 5;
  double band_window = 8.0;
  double threshold = 0.0;  // 0: 1e4 * eps * max|f1_check|
  double t_max_factor = 1.3;  // horizon = factor * R * exp(tau_*/eps)
  int threads = 0;            // 0: hardware concurrency
  std::string output_dir = "out";
};

ExperimentConfig parse_config_file(const std::string& path);

std::pair<RadialProfile, RadialProfile> make_datum(const std::string& name);
RadialIVP make_ivp(const ExperimentConfig& cfg, double eps);

struct LifespanRecord {
  double eps = 0.0;
  double h = 0.0;
  double T_num = 0.0;
  double eps_log_T = 0.0;
  bool grid_converged = false;
  bool threshold_robust = false;
  bool blew_up = false;
  double grid_convergence = 0.0;       // |T(h) - T(h/2)| / T(h)
  double threshold_sensitivity = 0.0;  // |T(2B) - T(B)| / T(B)
};

/// Solve with automatic h-halving until the lifespan changes by < 1%, then
/// re-run with a doubled threshold to measure detector sensitivity.
LifespanRecord converged_lifespan(const RadialIVP& ivp, const ExperimentConfig& cfg);

struct FitReport {
  double tau_hat = 0.0;  // intercept of the affine fit of eps log T vs eps
  double slope = 0.0;
  double residual_rms = 0.0;
  double tau_star_reference = 0.0;
  double relative_gap = 0.0;
  int n_used = 0;
};

FitReport fit_lifespan(const std::vector<LifespanRecord>& records, double tau_star);

struct SweepResult {
  std::vector<LifespanRecord> records;
  FitReport fit;
  double tau_star = 0.0;
  bool upper_bound_ok = true;  // every T_num <= R exp(tau_*/eps) * 1.05
  bool exact_law_applicable = true;  // c f1 >= 0 after sign normalization
};

SweepResult lifespan_sweep(const ExperimentConfig& cfg);

struct TauStarReport {
  TauStar general = TauStar::infinity();
  TauStar radial = TauStar::infinity();
  double rel_diff = 0.0;  // when both finite
};

TauStarReport tau_star_report(const ExperimentConfig& cfg);

struct BoundCheckReport {
  double max_violation = 0.0;  // max of (rhs - allowance - U)+ / data scale
  int n_samples = 0;
  int n_violations = 0;
  double h = 0.0;
  double T_num = 0.0;
  DuhamelResidualReport duhamel;
};

/// Domination table U(t,s) vs the closed-form lower bound on an n_t x n_s
/// pre-blow-up grid, plus a Duhamel-residual summary on a short horizon.
BoundCheckReport bound_check(const ExperimentConfig& cfg, double eps, int n_t = 50,
                             int n_s = 50);

struct ApproxErrorRow {
  double eps = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  DecayReport decay;
  double weighted_err = 0.0;  // sup <r><t-r> |d(u_num - u1)|
  double order_est = 0.0;     // regression order across the eps list
};

std::vector<ApproxErrorRow> approx_error_experiment(const ExperimentConfig& cfg,
                                                    const std::vector<double>& eps_list,
                                                    double lambda, double mu);

// --- deterministic flat-file emission ---
std::string format_g17(double v);
void write_lifespan_csv(const std::string& path, const std::vector<LifespanRecord>& r);
void write_fit_json(const std::string& path, const FitReport& fit);
void write_approx_csv(const std::string& path, const std::vector<ApproxErrorRow>& rows);
void write_series_csv(const std::string& path, const std::string& header,
                      const std::vector<std::pair<double, double>>& rows);

}  // namespace exwave
