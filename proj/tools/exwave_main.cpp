// Command-line laboratory for the exterior-ball semilinear wave problem:
// tau_* computation, nonlinear solves with blow-up detection, lifespan
// sweeps, lower-bound domination checks, approximation-error scans, and
// radiation-field sampling.  All outputs are flat CSV/JSON files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "exwave/lab.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCheckFailed = 3;

std::string tau_to_string(const exwave::TauStar& t) {
  if (!t.is_finite()) return "infinite (global existence predicted)";
  return exwave::format_g17(t.value());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for lifespan asymptotics of the "
               "semilinear wave equation exterior to the unit ball"};
  app.require_subcommand(1);

  exwave::ExperimentConfig cfg;
  std::string config_path;
  app.add_option("--config", config_path, "key = value config file");

  // tau-star ---------------------------------------------------------------
  auto* cmd_tau = app.add_subcommand("tau-star", "compute tau_* by both routes");
  double tau_c = 1.0;
  cmd_tau->add_option("--c", tau_c, "nonlinearity coefficient (default 1)");
  cmd_tau->add_option("--datum", cfg.datum, "canonical | zero");

  // solve ------------------------------------------------------------------
  auto* cmd_solve = app.add_subcommand("solve", "single nonlinear solve");
  double sv_eps = 0.3, sv_h = 0.005, sv_tmax = 0.0;
  std::string sv_snapshot;
  long sv_stride = 0;
  cmd_solve->add_option("--eps", sv_eps, "data size epsilon")->required();
  cmd_solve->add_option("--c", cfg.c, "nonlinearity coefficient");
  cmd_solve->add_option("--step", sv_h, "grid step");
  cmd_solve->add_option("--t-max", sv_tmax, "horizon (0: auto from tau_*)");
  cmd_solve->add_option("--snapshot", sv_snapshot, "row snapshot CSV path");
  cmd_solve->add_option("--snapshot-stride", sv_stride, "rows between snapshots");

  // lifespan-sweep ----------------------------------------------------------
  auto* cmd_sweep = app.add_subcommand("lifespan-sweep",
                                       "converged lifespans over eps with fit");
  std::vector<double> sweep_eps;
  cmd_sweep->add_option("--eps", sweep_eps, "epsilon list (decreasing)");
  cmd_sweep->add_option("--c", cfg.c, "nonlinearity coefficient");
  cmd_sweep->add_option("--out", cfg.output_dir, "output directory");
  cmd_sweep->add_option("--h0", cfg.h0, "coarsest grid step");

  // bound-check ---------------------------------------------------------
  auto* cmd_bound = app.add_subcommand("bound-check",
                                       "domination by the closed-form lower bound");
  double bc_eps = 0.3;
  cmd_bound->add_option("--eps", bc_eps, "data size epsilon");
  cmd_bound->add_option("--c", cfg.c, "nonlinearity coefficient");

  // approx-error ----------------------------------------------------------
  auto* cmd_approx = app.add_subcommand("approx-error",
                                        "decay diagnostics of u1 and u - u1");
  std::vector<double> ap_eps = {0.4, 0.2, 0.1};
  double ap_lambda = 0.3, ap_mu = 0.25;
  cmd_approx->add_option("--eps", ap_eps, "epsilon list");
  cmd_approx->add_option("--lambda", ap_lambda, "weight exponent lambda");
  cmd_approx->add_option("--mu", ap_mu, "weight exponent mu");
  cmd_approx->add_option("--c", cfg.c, "nonlinearity coefficient");
  cmd_approx->add_option("--out", cfg.output_dir, "output directory");

  // radiation-sample --------------------------------------------------------
  auto* cmd_rad = app.add_subcommand(
      "radiation-sample",
      "sample the radial radiation field F_+, or a (s, P, p) profile slice");
  double rs_lo = -3.0, rs_hi = 5.0, rs_tau = 0.0;
  int rs_n = 401;
  std::string rs_out;
  cmd_rad->add_option("--lo", rs_lo, "lower end of the s range");
  cmd_rad->add_option("--hi", rs_hi, "upper end of the s range");
  cmd_rad->add_option("--n", rs_n, "sample count");
  cmd_rad->add_option("--c", cfg.c, "nonlinearity coefficient (profile slice)");
  auto* rs_tau_opt = cmd_rad->add_option(
      "--tau", rs_tau, "emit the profile slice (s, P, p) at this slow time");
  cmd_rad->add_option("--out", rs_out, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (!config_path.empty()) {
      auto fc = exwave::parse_config_file(config_path);
      // flags that were actually passed win over the file
      const bool c_flag = cmd_sweep->count("--c") || cmd_approx->count("--c") ||
                          cmd_solve->count("--c") || cmd_bound->count("--c") ||
                          cmd_rad->count("--c");
      if (!c_flag) cfg.c = fc.c;
      if (!cmd_sweep->count("--out") && !cmd_approx->count("--out"))
        cfg.output_dir = fc.output_dir;
      if (!cmd_sweep->count("--h0")) cfg.h0 = fc.h0;
      if (!cmd_tau->count("--datum")) cfg.datum = fc.datum;
      cfg.eps_list = fc.eps_list;
      cfg.max_halvings = fc.max_halvings;
      cfg.band_window = fc.band_window;
      cfg.threshold = fc.threshold;
      cfg.t_max_factor = fc.t_max_factor;
      cfg.threads = fc.threads;
    }

    if (*cmd_tau) {
      exwave::ExperimentConfig tcfg = cfg;
      // tau-star defaults to the paper's plain c = 1 unless told otherwise
      if (cmd_tau->count("--c"))
        tcfg.c = tau_c;
      else if (config_path.empty())
        tcfg.c = 1.0;
      const auto rep = exwave::tau_star_report(tcfg);
      std::cout << "tau_star (general scan):      " << tau_to_string(rep.general)
                << "\n";
      std::cout << "tau_star (radial closed form): " << tau_to_string(rep.radial)
                << "\n";
      if (rep.general.is_finite() && rep.radial.is_finite())
        std::cout << "relative difference:           "
                  << exwave::format_g17(rep.rel_diff) << "\n";
      return kExitOk;
    }

    if (*cmd_solve) {
      exwave::RadialIVP ivp = exwave::make_ivp(cfg, sv_eps);
      exwave::SolverConfig scfg;
      scfg.h = sv_h;
      scfg.band_window = cfg.band_window;
      if (sv_tmax > 0.0) {
        scfg.t_max = sv_tmax;
      } else {
        const auto ts = exwave::tau_star_radial(cfg.c, ivp.f1);
        scfg.t_max = ts.is_finite() ? cfg.t_max_factor * ivp.support_radius *
                                          std::exp(ts.value() / sv_eps)
                                    : 1000.0;
      }
      scfg.retain_stride = sv_stride;
      auto [field, rep] = exwave::solve(ivp, scfg);
      std::cout << "eps = " << sv_eps << ", c = " << cfg.c << ", h = " << scfg.h
                << "\n";
      if (rep.survived)
        std::cout << "no blow-up before t_max = " << scfg.t_max << "\n";
      else
        std::cout << "T_num = " << exwave::format_g17(rep.t_num) << "  (trigger: "
                  << (rep.trigger == exwave::BlowupTrigger::threshold
                          ? "threshold"
                          : "picard-divergence")
                  << ", +-" << rep.uncertainty << ")\n"
                  << "eps log T = "
                  << exwave::format_g17(sv_eps * std::log(rep.t_num)) << "\n";
      if (!sv_snapshot.empty() && sv_stride > 0) {
        std::ofstream out(sv_snapshot);
        out << "t,r,v,dv_dt\n";
        for (const auto& row : field.rows)
          for (std::size_t k = 0; k < row.v.size(); ++k)
            out << exwave::format_g17(row.t) << ','
                << exwave::format_g17(field.r_of(row.jlo + static_cast<long>(k)))
                << ',' << exwave::format_g17(row.v[k]) << ','
                << exwave::format_g17(row.dtv[k]) << '\n';
        std::cout << "wrote " << sv_snapshot << "\n";
      }
      return kExitOk;
    }

    if (*cmd_sweep) {
      if (!sweep_eps.empty()) cfg.eps_list = sweep_eps;
      std::filesystem::create_directories(cfg.output_dir);
      const auto res = exwave::lifespan_sweep(cfg);
      exwave::write_lifespan_csv(cfg.output_dir + "/lifespan.csv", res.records);
      exwave::write_fit_json(cfg.output_dir + "/fit.json", res.fit);
      std::cout << "tau_star = " << exwave::format_g17(res.tau_star) << "\n";
      for (const auto& r : res.records)
        std::cout << "eps = " << r.eps << ": T = " << exwave::format_g17(r.T_num)
                  << ", eps log T = " << exwave::format_g17(r.eps_log_T)
                  << (r.grid_converged ? "" : "  [not grid-converged]")
                  << (r.threshold_robust ? "" : "  [threshold-sensitive]") << "\n";
      std::cout << "fit: tau_hat = " << exwave::format_g17(res.fit.tau_hat)
                << ", slope = " << exwave::format_g17(res.fit.slope)
                << ", relative gap = " << exwave::format_g17(res.fit.relative_gap)
                << "\n";
      if (!res.exact_law_applicable)
        std::cout << "exact-law check: not applicable (c f1 changes sign)\n";
      else if (!res.upper_bound_ok) {
        std::cout << "UPPER BOUND VIOLATED: some T_num exceeds R exp(tau_*/eps)\n";
        return kExitCheckFailed;
      }
      return kExitOk;
    }

    if (*cmd_bound) {
      const auto rep = exwave::bound_check(cfg, bc_eps);
      std::cout << "h = " << rep.h << ", T_num = " << exwave::format_g17(rep.T_num)
                << "\n"
                << "samples = " << rep.n_samples
                << ", violations = " << rep.n_violations
                << ", max normalized violation = "
                << exwave::format_g17(rep.max_violation) << "\n"
                << "duhamel residual (short horizon): max |res| = "
                << exwave::format_g17(rep.duhamel.max_abs)
                << (rep.duhamel.partial ? "  [partial: band-truncated history]" : "")
                << "\n";
      return rep.n_violations == 0 ? kExitOk : kExitCheckFailed;
    }

    if (*cmd_approx) {
      std::filesystem::create_directories(cfg.output_dir);
      const auto rows = exwave::approx_error_experiment(cfg, ap_eps, ap_lambda, ap_mu);
      exwave::write_approx_csv(cfg.output_dir + "/approx.csv", rows);
      for (const auto& r : rows)
        std::cout << "eps = " << r.eps << ": S1 = " << exwave::format_g17(r.decay.S1)
                  << ", S2 = " << exwave::format_g17(r.decay.S2)
                  << ", S3 = " << exwave::format_g17(r.decay.S3)
                  << ", S4 = " << exwave::format_g17(r.decay.S4)
                  << ", weighted_err = " << exwave::format_g17(r.weighted_err)
                  << "\n";
      if (!rows.empty())
        std::cout << "measured eps-order of the weighted error: "
                  << exwave::format_g17(rows.front().order_est) << "\n";
      return kExitOk;
    }

    if (*cmd_rad) {
      auto [f0, f1] = exwave::make_datum(cfg.datum);
      const auto fp = exwave::radiation_field_exterior_radial(f0, f1);

      if (rs_tau_opt->count() > 0) {
        // (s, P, p) slice of the profile at fixed slow time tau
        const auto pc = exwave::make_profile_context(
            fp, exwave::NonlinCoeffs::dt_squared(cfg.c));
        if (pc.tau_star.is_finite() && rs_tau >= pc.tau_star.value()) {
          std::cerr << "config error: tau >= tau_* = " << pc.tau_star.value()
                    << "\n";
          return kExitConfig;
        }
        std::ostringstream body;
        body << "s,P,p\n";
        for (int i = 0; i < rs_n; ++i) {
          const double s = rs_lo + (rs_hi - rs_lo) * i / (rs_n - 1);
          body << exwave::format_g17(s) << ','
               << exwave::format_g17(pc.P(s, rs_tau)) << ','
               << exwave::format_g17(pc.p(s, rs_tau)) << '\n';
        }
        if (rs_out.empty()) {
          std::cout << body.str();
        } else {
          std::ofstream out(rs_out);
          out << body.str();
          std::cout << "wrote " << rs_out << "\n";
        }
        return kExitOk;
      }

      std::vector<std::pair<double, double>> rows;
      for (int i = 0; i < rs_n; ++i) {
        const double s = rs_lo + (rs_hi - rs_lo) * i / (rs_n - 1);
        rows.emplace_back(s, fp(s));
      }
      if (rs_out.empty()) {
        std::cout << "s,value\n";
        for (const auto& [s, v] : rows)
          std::cout << exwave::format_g17(s) << ',' << exwave::format_g17(v) << '\n';
      } else {
        exwave::write_series_csv(rs_out, "s,value", rows);
        std::cout << "wrote " << rs_out << "\n";
      }
      return kExitOk;
    }
  } catch (const exwave::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
