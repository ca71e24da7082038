#include "exwave/lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

namespace exwave {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("bad number in list: '" + item + "'");
    }
  }
  return out;
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    return std::stod(v);
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + key + ": '" + v + "'");
  }
}

}  // namespace

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("bad section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value at line " + std::to_string(lineno));
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (key == "experiment.datum") cfg.datum = val;
    else if (key == "experiment.c") cfg.c = parse_double(val, key);
    else if (key == "experiment.output_dir") cfg.output_dir = val;
    else if (key == "sweep.eps_list") cfg.eps_list = parse_double_list(val);
    else if (key == "solver.h0") cfg.h0 = parse_double(val, key);
    else if (key == "solver.band_window") cfg.band_window = parse_double(val, key);
    else if (key == "solver.max_halvings")
      cfg.max_halvings = static_cast<int>(parse_double(val, key));
    else if (key == "solver.threshold") cfg.threshold = parse_double(val, key);
    else if (key == "solver.t_max_factor") cfg.t_max_factor = parse_double(val, key);
    else if (key == "solver.threads")
      cfg.threads = static_cast<int>(parse_double(val, key));
    else throw ConfigError("unknown config key: " + key);
  }
  for (std::size_t i = 1; i < cfg.eps_list.size(); ++i)
    if (cfg.eps_list[i] >= cfg.eps_list[i - 1])
      throw ConfigError("eps_list must be strictly decreasing");
  for (double e : cfg.eps_list)
    if (!(e > 0.0 && e <= 0.5)) throw ConfigError("eps values must be in (0, 1/2]");
  return cfg;
}

std::pair<RadialProfile, RadialProfile> make_datum(const std::string& name) {
  if (name == "canonical")
    return {RadialProfile::zero(), RadialProfile::scaled_bump(2.0, 4.0)};
  if (name == "zero") return {RadialProfile::zero(), RadialProfile::zero()};
  throw ConfigError("unknown datum: " + name);
}

RadialIVP make_ivp(const ExperimentConfig& cfg, double eps) {
  auto [f0, f1] = make_datum(cfg.datum);
  RadialIVP ivp;
  ivp.c = cfg.c;
  ivp.eps = eps;
  ivp.support_radius = std::max(f0.b, f1.b);
  ivp.f0 = std::move(f0);
  ivp.f1 = std::move(f1);
  return ivp;
}

LifespanRecord converged_lifespan(const RadialIVP& ivp, const ExperimentConfig& cfg) {
  LifespanRecord rec;
  rec.eps = ivp.eps;

  const double amp = std::max(max_check_amplitude(ivp.f1), 1e-300);
  const double B = cfg.threshold > 0.0 ? cfg.threshold : 1e4 * ivp.eps * amp;

  const TauStar ts = tau_star_radial(ivp.c, ivp.f1);
  const double t_max =
      ts.is_finite()
          ? cfg.t_max_factor * ivp.support_radius * std::exp(ts.value() / ivp.eps)
          : 1000.0;

  SolverConfig scfg;
  scfg.band_window = cfg.band_window;
  scfg.blowup_threshold = B;
  scfg.t_max = t_max;

  double h = cfg.h0;
  double T_prev = std::numeric_limits<double>::quiet_NaN();
  double T = 0.0;
  bool blew = false;
  for (int k = 0; k <= cfg.max_halvings; ++k) {
    scfg.h = h;
    auto [field, rep] = solve(ivp, scfg);
    (void)field;
    blew = !rep.survived;
    T = rep.t_num;
    if (!blew) break;  // survived the horizon: refinement will not change that
    if (k > 0) {
      rec.grid_convergence = std::abs(T - T_prev) / std::max(T_prev, 1e-300);
      if (rec.grid_convergence < 0.01) {
        rec.grid_converged = true;
        break;
      }
    }
    T_prev = T;
    if (k < cfg.max_halvings) h *= 0.5;
  }
  rec.h = scfg.h;
  rec.T_num = T;
  rec.blew_up = blew;
  rec.eps_log_T = ivp.eps * std::log(std::max(T, 1e-300));

  if (blew) {
    scfg.blowup_threshold = 2.0 * B;
    auto [field2, rep2] = solve(ivp, scfg);
    (void)field2;
    if (!rep2.survived) {
      rec.threshold_sensitivity = std::abs(rep2.t_num - T) / T;
      rec.threshold_robust = rec.threshold_sensitivity < 0.01;
    }
  }
  return rec;
}

FitReport fit_lifespan(const std::vector<LifespanRecord>& records, double tau_star) {
  FitReport fit;
  fit.tau_star_reference = tau_star;
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : records)
    if (r.grid_converged && r.threshold_robust) pts.emplace_back(r.eps, r.eps_log_T);
  fit.n_used = static_cast<int>(pts.size());
  if (pts.size() < 2) return fit;
  double sx = 0, sy = 0;
  for (auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / pts.size(), my = sy / pts.size();
  double sxx = 0, sxy = 0;
  for (auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  fit.slope = sxy / sxx;
  fit.tau_hat = my - fit.slope * mx;
  double ss = 0;
  for (auto& [x, y] : pts) {
    const double e = y - fit.tau_hat - fit.slope * x;
    ss += e * e;
  }
  fit.residual_rms = std::sqrt(ss / pts.size());
  if (tau_star > 0.0 && std::isfinite(tau_star))
    fit.relative_gap = std::abs(fit.tau_hat - tau_star) / tau_star;
  return fit;
}

SweepResult lifespan_sweep(const ExperimentConfig& cfg) {
  SweepResult out;
  auto [f0, f1] = make_datum(cfg.datum);
  const TauStar ts = tau_star_radial(cfg.c, f1);
  out.tau_star = ts.as_double();

  // exact-law regime requires c f1 >= 0 after the u -> -u normalization
  {
    const double cs = cfg.c >= 0.0 ? 1.0 : -1.0;
    double mn = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double r = f1.a + (f1.b - f1.a) * i / 200.0;
      mn = std::min(mn, cs * f1(r));
    }
    out.exact_law_applicable = mn >= -1e-15;
  }

  const int n = static_cast<int>(cfg.eps_list.size());
  std::vector<std::future<LifespanRecord>> futs;
  futs.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double eps = cfg.eps_list[i];
    futs.push_back(std::async(std::launch::async, [&cfg, eps]() {
      return converged_lifespan(make_ivp(cfg, eps), cfg);
    }));
  }
  for (auto& f : futs) out.records.push_back(f.get());

  if (ts.is_finite()) {
    const double R = std::max(f0.b, f1.b);
    for (const auto& r : out.records) {
      const double bound = R * std::exp(ts.value() / r.eps) * 1.05;
      if (!r.blew_up || r.T_num > bound) out.upper_bound_ok = false;
    }
    out.fit = fit_lifespan(out.records, ts.value());
  }
  return out;
}

TauStarReport tau_star_report(const ExperimentConfig& cfg) {
  TauStarReport rep;
  auto [f0, f1] = make_datum(cfg.datum);
  rep.radial = tau_star_radial(cfg.c, f1);
  const RadiationField fp = radiation_field_exterior_radial(f0, f1);
  rep.general = tau_star_general(fp, NonlinCoeffs::dt_squared(cfg.c));
  if (rep.general.is_finite() && rep.radial.is_finite()) {
    const double a = rep.general.value(), b = rep.radial.value();
    rep.rel_diff = std::abs(a - b) / std::max(std::abs(a), std::abs(b));
  }
  return rep;
}

BoundCheckReport bound_check(const ExperimentConfig& cfg, double eps, int n_t,
                             int n_s) {
  BoundCheckReport rep;
  RadialIVP ivp = make_ivp(cfg, eps);
  const double amp = std::max(max_check_amplitude(ivp.f1), 1e-300);
  const double scale = eps * amp;

  SolverConfig scfg;
  scfg.h = cfg.h0 / 4.0;
  scfg.band_window = cfg.band_window;
  scfg.t_max = [&] {
    const TauStar ts = tau_star_radial(cfg.c, ivp.f1);
    return ts.is_finite()
               ? cfg.t_max_factor * ivp.support_radius * std::exp(ts.value() / eps)
               : 1000.0;
  }();
  const double a = ivp.f1.a, b = ivp.f1.b;
  for (int k = 0; k < n_s; ++k)
    scfg.probe_s.push_back(a - 0.3 + (b - a + 0.6) * k / (n_s - 1));

  auto [field, brep] = solve(ivp, scfg);
  rep.h = scfg.h;
  rep.T_num = brep.t_num;

  const double t_hi = 0.95 * brep.t_num;
  for (const auto& tr : field.traces) {
    for (int i = 0; i < n_t; ++i) {
      const double t = t_hi * i / (n_t - 1);
      const long n = std::lround(t / field.h);
      if (n >= static_cast<long>(tr.U.size())) continue;
      const double rhs = lower_bound_rhs(ivp, n * field.h, tr.s);
      if (!std::isfinite(rhs)) continue;  // past the bound's own blow-up
      const double allowance = 0.05 * std::abs(rhs) + 10.0 * field.h * scale;
      const double U = tr.U[static_cast<std::size_t>(n)];
      const double viol = rhs - allowance - U;
      ++rep.n_samples;
      if (viol > 0.0) {
        ++rep.n_violations;
        rep.max_violation = std::max(rep.max_violation, viol / scale);
      }
    }
  }

  // Duhamel residual on a short horizon with full row retention
  SolverConfig dcfg;
  dcfg.h = scfg.h;
  dcfg.band_window = cfg.band_window;
  dcfg.t_max = std::min(16.0, 0.8 * brep.t_num);
  dcfg.retain_stride = 2;
  auto [dfield, dbrep] = solve(ivp, dcfg);
  (void)dbrep;
  std::vector<DuhamelTarget> targets;
  for (int i = 1; i <= 6; ++i)
    for (int k = 0; k < 8; ++k)
      targets.push_back({dcfg.t_max * i / 6.0 * 0.9, a + (b - a) * k / 7.0});
  rep.duhamel = duhamel_residual(dfield, ivp, targets);
  return rep;
}

std::vector<ApproxErrorRow> approx_error_experiment(const ExperimentConfig& cfg,
                                                    const std::vector<double>& eps_list,
                                                    double lambda, double mu) {
  std::vector<ApproxErrorRow> rows;
  auto [f0, f1] = make_datum(cfg.datum);
  const RadiationField fp = radiation_field_exterior_radial(f0, f1);
  const NonlinCoeffs coeffs = NonlinCoeffs::dt_squared(cfg.c);
  const ProfileContext pc = make_profile_context(fp, coeffs);
  const LinearExterior lin(f0, f1);
  // degenerate data (infinite tau_*) never blows up; cap the scan horizon
  const double tau0 =
      pc.tau_star.is_finite() ? 0.7 * pc.tau_star.value() : 1.0;

  for (double eps : eps_list) {
    ApproxErrorRow row;
    row.eps = eps;
    row.lambda = lambda;
    row.mu = mu;

    ApproxConfig acfg;
    acfg.eps = eps;
    acfg.tau0 = tau0;
    acfg.linear = &lin;
    acfg.profile = &pc;
    acfg.c = cfg.c;

    WeightParams wp;
    wp.lambda = lambda;
    wp.mu = mu;
    row.decay = decay_diagnostics(acfg, wp, DiagGridSpec{});

    // weighted error sup <r><t-r>|d(u_num - u1)| over the full exterior grid
    const double t_end = std::exp(acfg.tau0 / eps);
    RadialIVP ivp = make_ivp(cfg, eps);
    SolverConfig scfg;
    scfg.h = t_end > 500.0 ? 0.01 : 0.005;
    scfg.band_window = 0.0;  // u1 has a wake well behind the cone; keep it all
    scfg.t_max = t_end;
    scfg.blowup_threshold = 1e12;

    double wsup = 0.0;
    const long row_stride = std::max<long>(1, std::lround(t_end / scfg.h / 64.0));
    scfg.observer = [&](long n, double t, long jlo,
                        const std::vector<double>& v,
                        const std::vector<double>& dtv) {
      if (n % row_stride != 0) return;
      const long ncol = static_cast<long>(v.size());
      const long col_stride = std::max<long>(1, ncol / 400);
      for (long k = 1; k + 1 < ncol; k += col_stride) {
        const long j = jlo + k;
        const double r = 1.0 + j * scfg.h;
        const double u_num = v[static_cast<std::size_t>(k)] / r;
        const double ut_num = dtv[static_cast<std::size_t>(k)] / r;
        const double vr =
            (v[static_cast<std::size_t>(k + 1)] - v[static_cast<std::size_t>(k - 1)]) /
            (2.0 * scfg.h);
        const double ur_num = (vr - u_num) / r;
        const auto u1 = u1_eval(acfg, t, r);
        const double err =
            std::abs(ut_num - u1.du1_dt) + std::abs(ur_num - u1.du1_dr);
        wsup = std::max(wsup, jb(r) * jb(t - r) * err);
      }
    };
    auto [fld, rep] = solve(ivp, scfg);
    (void)fld;
    (void)rep;
    row.weighted_err = wsup;
    rows.push_back(std::move(row));
  }

  // regression order across the eps list
  if (rows.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : rows) {
      const double x = std::log(r.eps), y = std::log(std::max(r.weighted_err, 1e-300));
      sx += x;
      sy += y;
    }
    const double mx = sx / rows.size(), my = sy / rows.size();
    for (const auto& r : rows) {
      const double x = std::log(r.eps), y = std::log(std::max(r.weighted_err, 1e-300));
      sxx += (x - mx) * (x - mx);
      sxy += (x - mx) * (y - my);
    }
    const double slope = sxy / sxx;
    for (auto& r : rows) r.order_est = slope;
  }
  return rows;
}

std::string format_g17(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_lifespan_csv(const std::string& path, const std::vector<LifespanRecord>& r) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "eps,h,T_num,eps_log_T,grid_converged,threshold_robust\n";
  for (const auto& rec : r)
    out << format_g17(rec.eps) << ',' << format_g17(rec.h) << ','
        << format_g17(rec.T_num) << ',' << format_g17(rec.eps_log_T) << ','
        << (rec.grid_converged ? 1 : 0) << ',' << (rec.threshold_robust ? 1 : 0)
        << '\n';
}

void write_fit_json(const std::string& path, const FitReport& fit) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "{\n"
      << "  \"tau_hat\": " << format_g17(fit.tau_hat) << ",\n"
      << "  \"slope\": " << format_g17(fit.slope) << ",\n"
      << "  \"residual_rms\": " << format_g17(fit.residual_rms) << ",\n"
      << "  \"tau_star_reference\": " << format_g17(fit.tau_star_reference) << ",\n"
      << "  \"relative_gap\": " << format_g17(fit.relative_gap) << ",\n"
      << "  \"n_used\": " << fit.n_used << "\n"
      << "}\n";
}

void write_approx_csv(const std::string& path, const std::vector<ApproxErrorRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "eps,lambda,mu,S1,S2,S3,S4,weighted_err,order_est,matching_sup\n";
  for (const auto& r : rows)
    out << format_g17(r.eps) << ',' << format_g17(r.lambda) << ','
        << format_g17(r.mu) << ',' << format_g17(r.decay.S1) << ','
        << format_g17(r.decay.S2) << ',' << format_g17(r.decay.S3) << ','
        << format_g17(r.decay.S4) << ',' << format_g17(r.weighted_err) << ','
        << format_g17(r.order_est) << ',' << format_g17(r.decay.matching_sup)
        << '\n';
}

void write_series_csv(const std::string& path, const std::string& header,
                      const std::vector<std::pair<double, double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << header << '\n';
  for (const auto& [x, y] : rows)
    out << format_g17(x) << ',' << format_g17(y) << '\n';
}

}  // namespace exwave
