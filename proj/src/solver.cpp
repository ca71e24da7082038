#include "exwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace exwave {

LinearExterior::LinearExterior(const RadialProfile& f0, const RadialProfile& f1,
                               double quad_tol)
    : c0_(check_extend(f0)),
      c1_(check_extend(f1)),
      R_(std::max(f0.b, f1.b)),
      tol_(quad_tol) {}

double LinearExterior::int_f1(double lo, double hi) const {
  // f1_check is supported on [2-b, 2-a] and [a, b]; integrate the pieces.
  const double a = c1_.src.a;
  const double b = c1_.src.b;
  double sum = 0.0;
  const double l1 = std::max(lo, 2.0 - b), h1 = std::min(hi, 2.0 - a);
  if (l1 < h1)
    sum += adaptive_quad([&](double x) { return c1_.eval(x); }, l1, h1, tol_);
  const double l2 = std::max(lo, a), h2 = std::min(hi, b);
  if (l2 < h2)
    sum += adaptive_quad([&](double x) { return c1_.eval(x); }, l2, h2, tol_);
  return sum;
}

double LinearExterior::u(double t, double r) const {
  const double vr = 0.5 * (c0_.eval(r - t) + c0_.eval(r + t)) + 0.5 * int_f1(r - t, r + t);
  return vr / r;
}

double LinearExterior::ut(double t, double r) const {
  const double d =
      0.5 * (c0_.d1(r + t) - c0_.d1(r - t)) + 0.5 * (c1_.eval(r + t) + c1_.eval(r - t));
  return d / r;
}

double LinearExterior::ur(double t, double r) const {
  const double d =
      0.5 * (c0_.d1(r - t) + c0_.d1(r + t)) + 0.5 * (c1_.eval(r + t) - c1_.eval(r - t));
  return (d - u(t, r)) / r;
}

double linear_exact(const RadialIVP& ivp, double t, double r, double tol) {
  return LinearExterior(ivp.f0, ivp.f1, tol).u(t, r);
}

double max_check_amplitude(const RadialProfile& f1) {
  if (f1.is_zero()) return 0.0;
  const CheckExtension c1 = check_extend(f1);
  const int n = 2001;
  double best = 0.0, best_s = f1.a;
  for (int i = 0; i < n; ++i) {
    const double s = f1.a + (f1.b - f1.a) * i / (n - 1);
    const double v = std::abs(c1.eval(s));
    if (v > best) {
      best = v;
      best_s = s;
    }
  }
  const double ds = (f1.b - f1.a) / (n - 1);
  auto [sx, vx] = golden_section_max(
      [&](double s) { return std::abs(c1.eval(s)); }, best_s - 2.0 * ds,
      best_s + 2.0 * ds, 1e-10);
  (void)sx;
  return std::max(best, vx);
}

namespace {

RadialIVP normalize_sign(const RadialIVP& ivp) {
  if (ivp.c >= 0.0) return ivp;
  RadialIVP out = ivp;
  out.c = -ivp.c;
  out.f0 = ivp.f0.scaled(-1.0);
  out.f1 = ivp.f1.scaled(-1.0);
  return out;
}

}  // namespace

std::pair<SolutionField, BlowupReport> solve(const RadialIVP& ivp_in,
                                             const SolverConfig& cfg) {
  if (cfg.h <= 0.0) throw std::invalid_argument("solve: h must be > 0");
  if (cfg.t_max <= 0.0) throw std::invalid_argument("solve: t_max must be > 0");
  const RadialIVP ivp = normalize_sign(ivp_in);
  const double h = cfg.h;
  const double R = ivp.support_radius;
  if (cfg.band_window > 0.0 && cfg.band_window < 2.0 * R)
    throw std::invalid_argument("solve: band_window must be >= 2R (or <= 0 for full)");

  const double h2 = h * h;
  const double inv2h = 1.0 / (2.0 * h);
  const long mR = static_cast<long>(std::ceil((R - 1.0) / h)) + 2;
  const bool banded = cfg.band_window > 0.0;
  const long mW = banded ? static_cast<long>(std::ceil(cfg.band_window / h)) : 0;
  const long n_max = static_cast<long>(std::floor(cfg.t_max / h + 1e-9));

  const CheckExtension c0 = check_extend(ivp.f0);
  const CheckExtension c1 = check_extend(ivp.f1);
  const double c = ivp.c;
  const double eps = ivp.eps;

  double B = cfg.blowup_threshold;
  if (B <= 0.0) {
    const double amp = std::max(max_check_amplitude(ivp.f1), 1e-300);
    B = 1e4 * eps * amp;
  }

  auto jlo_of = [&](long n) { return banded ? std::max<long>(0, n - mW) : 0; };
  auto jhi_of = [&](long n) { return n + mR; };

  SolutionField field;
  field.h = h;
  field.R = R;
  field.eps = eps;
  field.c = c;
  field.band_window = cfg.band_window;
  field.retain_stride = cfg.retain_stride;
  for (double s : cfg.probe_s) {
    CharacteristicTrace tr;
    tr.d = std::max<long>(0, std::lround((s - 1.0) / h));
    tr.s = 1.0 + tr.d * h;
    field.traces.push_back(std::move(tr));
  }

  struct Work {
    long jlo = 0;
    long jhi = -1;
    std::vector<double> v;
    double at(long j) const {
      return (j < jlo || j > jhi) ? 0.0 : v[static_cast<std::size_t>(j - jlo)];
    }
  };

  auto r_of = [&](long j) { return 1.0 + j * h; };

  // rows n-2, n-1, n and the dtv of row n
  Work prev2, prev, cur, next;
  std::vector<double> dtv_cur;

  auto fill_row = [&](Work& w, long n, auto&& value) {
    w.jlo = jlo_of(n);
    w.jhi = jhi_of(n);
    w.v.resize(static_cast<std::size_t>(w.jhi - w.jlo + 1));
    for (long j = w.jlo; j <= w.jhi; ++j)
      w.v[static_cast<std::size_t>(j - w.jlo)] = value(j);
  };

  // row 0 from the data, row 1 by Taylor expansion (O(h^4) local)
  fill_row(prev, 0, [&](long j) { return eps * c0.eval(r_of(j)); });
  fill_row(cur, 1, [&](long j) {
    if (j == 0) return 0.0;
    const double r = r_of(j);
    const double v0 = eps * c0.eval(r);
    const double v1 = eps * c1.eval(r);
    const double v0pp = eps * c0.d2(r);
    const double att = v0pp + c * v1 * v1 / r;
    const double attt = eps * c1.d2(r) + 2.0 * c * v1 * att / r;
    return v0 + h * v1 + 0.5 * h2 * att + h2 * h / 6.0 * attt;
  });

  BlowupReport report;
  report.uncertainty = h;

  auto retain = [&](long n, const Work& w, const std::vector<double>& dtv) {
    if (cfg.retain_stride <= 0 || n % cfg.retain_stride != 0) return;
    SolutionRow row;
    row.n = n;
    row.t = n * h;
    row.jlo = w.jlo;
    row.v = w.v;
    row.dtv = dtv;
    field.rows.push_back(std::move(row));
  };

  auto update_traces = [&](long n, const Work& w, const std::vector<double>& dtv) {
    for (auto& tr : field.traces) {
      const long j = n + tr.d;
      double u = 0.0;
      if (j <= w.jhi && j >= w.jlo)
        u = dtv[static_cast<std::size_t>(j - w.jlo)];
      const double t = n * h;
      const double g = u * u / (t + tr.s);
      if (tr.U.empty()) {
        tr.iout.push_back(0.0);
      } else {
        const double gp = tr.U.back() * tr.U.back() / ((n - 1) * h + tr.s);
        tr.iout.push_back(tr.iout.back() + 0.5 * h * (gp + g));
      }
      tr.U.push_back(u);
    }
  };

  // row 0 bookkeeping (dt v is the datum eps * f1_check)
  {
    dtv_cur.resize(prev.v.size());
    for (long j = prev.jlo; j <= prev.jhi; ++j)
      dtv_cur[static_cast<std::size_t>(j - prev.jlo)] = eps * c1.eval(r_of(j));
    update_traces(0, prev, dtv_cur);
    retain(0, prev, dtv_cur);
    if (cfg.observer) cfg.observer(0, 0.0, prev.jlo, prev.v, dtv_cur);
  }

  long n = 1;
  for (; n < n_max; ++n) {
    // advance to row n+1
    next.jlo = jlo_of(n + 1);
    next.jhi = jhi_of(n + 1);
    next.v.assign(static_cast<std::size_t>(next.jhi - next.jlo + 1), 0.0);

    bool diverged = false;
    double row_max_dtv = 0.0;
    const long j_first = std::max<long>(next.jlo, 1);
    for (long j = j_first; j <= next.jhi && !diverged; ++j) {
      const double vE = cur.at(j + 1);
      const double vW = cur.at(j - 1);
      const double vS = prev.at(j);
      const double base = vE + vW - vS;
      const double r = r_of(j);
      double vN = base;
      if (c != 0.0) {
        const double contraction_cap = 2.0 * r / (c * h);
        for (int k = 0; k < cfg.picard_iters; ++k) {
          const double dtv_c = (vN - vS) * inv2h;
          if (std::abs(dtv_c) >= contraction_cap || !std::isfinite(vN)) {
            diverged = true;
            break;
          }
          const double vNew = base + h2 * c * dtv_c * dtv_c / r;
          const double delta = std::abs(vNew - vN);
          vN = vNew;
          if (delta <= cfg.picard_tol * (1.0 + std::abs(vN))) break;
        }
      }
      if (diverged) break;
      next.v[static_cast<std::size_t>(j - next.jlo)] = vN;
      row_max_dtv = std::max(row_max_dtv, std::abs((vN - vS) * inv2h));
    }

    if (diverged) {
      report.trigger = BlowupTrigger::picard_divergence;
      report.survived = false;
      report.t_num = (n + 0.5) * h;  // midpoint of rows n and n+1
      break;
    }

    // centered dt v on row n (one-sided where the band dropped a column)
    dtv_cur.resize(cur.v.size());
    for (long j = cur.jlo; j <= cur.jhi; ++j) {
      double d;
      if (j >= next.jlo)
        d = (next.at(j) - prev.at(j)) * inv2h;
      else
        d = (cur.at(j) - prev.at(j)) / h;
      dtv_cur[static_cast<std::size_t>(j - cur.jlo)] = d;
    }
    update_traces(n, cur, dtv_cur);
    retain(n, cur, dtv_cur);
    if (cfg.observer) cfg.observer(n, n * h, cur.jlo, cur.v, dtv_cur);

    if (row_max_dtv > B) {
      report.trigger = BlowupTrigger::threshold;
      report.survived = false;
      report.t_num = (n - 0.5) * h;  // midpoint of rows n-1 and n
      break;
    }

    prev2 = std::move(prev);
    prev = std::move(cur);
    cur = std::move(next);
    next = Work{};
  }

  // the newest row is one step behind on bookkeeping (its centered derivative
  // needs the next row); finalize it with a backward difference
  if (report.survived ||
      report.trigger == BlowupTrigger::picard_divergence) {
    dtv_cur.resize(cur.v.size());
    for (long j = cur.jlo; j <= cur.jhi; ++j) {
      const double d =
          n >= 2 ? (3.0 * cur.at(j) - 4.0 * prev.at(j) + prev2.at(j)) * inv2h
                 : (cur.at(j) - prev.at(j)) / h;
      dtv_cur[static_cast<std::size_t>(j - cur.jlo)] = d;
    }
    update_traces(n, cur, dtv_cur);
    retain(n, cur, dtv_cur);
    if (cfg.observer) cfg.observer(n, n * h, cur.jlo, cur.v, dtv_cur);
  }

  if (report.survived) report.t_num = n * h;
  field.n_rows = n;
  return {std::move(field), report};
}

std::vector<std::pair<double, double>> u_along_characteristic(
    const SolutionField& sol, double s) {
  if (s < 1.0) throw std::invalid_argument("u_along_characteristic: s must be >= 1");
  std::vector<std::pair<double, double>> out;
  const double q = (s - 1.0) / sol.h;
  const long jf = static_cast<long>(std::floor(q));
  const double frac = q - jf;
  for (const auto& row : sol.rows) {
    const long j0 = row.n + jf;
    const long jhi = row.jlo + static_cast<long>(row.dtv.size()) - 1;
    if (j0 < row.jlo) continue;  // below the band: no data
    auto val = [&](long j) -> double {
      if (j > jhi) return 0.0;
      return row.dtv[static_cast<std::size_t>(j - row.jlo)];
    };
    const double u = (1.0 - frac) * val(j0) + frac * val(j0 + 1);
    out.emplace_back(row.t, u);
  }
  return out;
}

double lower_bound_rhs(const RadialIVP& ivp_in, double t, double s) {
  if (s < 1.0) throw std::invalid_argument("lower_bound_rhs: s must be >= 1");
  const RadialIVP ivp = normalize_sign(ivp_in);
  const double f = ivp.f1(s);
  if (f == 0.0) return 0.0;
  const double seed = ivp.eps * s * f;
  const double den = 4.0 - ivp.c * seed * std::log((t + s) / s);
  if (den <= 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * seed / den;
}

DuhamelResidualReport duhamel_residual(const SolutionField& sol,
                                       const RadialIVP& ivp_in,
                                       const std::vector<DuhamelTarget>& targets) {
  const RadialIVP ivp = normalize_sign(ivp_in);
  if (sol.rows.empty())
    throw std::invalid_argument("duhamel_residual: no retained rows");
  const double h = sol.h;
  const long stride = std::max<long>(1, sol.retain_stride);
  const CheckExtension c0 = check_extend(ivp.f0);
  const CheckExtension c1 = check_extend(ivp.f1);

  auto row_at = [&](long n) -> const SolutionRow* {
    const long idx = n / stride;
    if (idx < 0 || idx >= static_cast<long>(sol.rows.size())) return nullptr;
    const auto& r = sol.rows[static_cast<std::size_t>(idx)];
    return r.n == n ? &r : nullptr;
  };

  DuhamelResidualReport rep;
  for (const auto& tgt : targets) {
    // snap to a retained row and a grid diagonal
    const long n_t = std::lround(tgt.t / h / stride) * stride;
    const long d = std::max<long>(0, std::lround((tgt.s - 1.0) / h));
    const SolutionRow* rt = row_at(n_t);
    if (!rt) continue;
    const long j_t = n_t + d;
    const long jhi_t = rt->jlo + static_cast<long>(rt->dtv.size()) - 1;
    if (j_t < rt->jlo) {
      rep.partial = true;
      continue;
    }
    const double t = n_t * h;
    const double r = sol.r_of(j_t);
    const double lhs = j_t > jhi_t ? 0.0 : rt->dtv[static_cast<std::size_t>(j_t - rt->jlo)];

    const double data = sol.eps * (0.5 * (c0.d1(r + t) - c0.d1(r - t)) +
                                   0.5 * (c1.eval(r + t) + c1.eval(r - t)));

    double i_out = 0.0, i_in = 0.0;
    bool partial = false;
    const long n_steps = n_t / stride;
    for (long k = 0; k <= n_steps; ++k) {
      const long m = k * stride;
      const SolutionRow* rm = row_at(m);
      if (!rm) {
        partial = true;
        continue;
      }
      const long jhi_m = rm->jlo + static_cast<long>(rm->dtv.size()) - 1;
      auto sample = [&](long j) -> double {
        if (j > jhi_m) return 0.0;  // beyond the support: exactly zero
        if (j < rm->jlo) {
          partial = true;
          return 0.0;
        }
        const double dv = rm->dtv[static_cast<std::size_t>(j - rm->jlo)];
        return dv * dv / sol.r_of(j);
      };
      const double w = (k == 0 || k == n_steps) ? 0.5 : 1.0;
      i_out += w * sample(m + d);            // rho - sigma = s
      i_in += w * sample(2 * n_t + d - m);   // rho + sigma = r + t
    }
    const double dt_eff = stride * h;
    i_out *= dt_eff;
    i_in *= dt_eff;

    const double resid = lhs - (data + 0.5 * ivp.c * (i_out + i_in));
    rep.max_abs = std::max(rep.max_abs, std::abs(resid));
    rep.partial = rep.partial || partial;
    ++rep.n_samples;
  }
  return rep;
}

}  // namespace exwave
