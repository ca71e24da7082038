#include "exwave/approx.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace exwave {

void ApproxConfig::validate() const {
  if (!(eps > 0.0 && eps <= 0.5))
    throw std::invalid_argument("ApproxConfig: eps must be in (0, 1/2]");
  if (!linear || !profile)
    throw std::invalid_argument("ApproxConfig: linear and profile required");
  const auto& ts = profile->tau_star;
  if (!(tau0 > 0.0) || (ts.is_finite() && tau0 >= ts.value()))
    throw std::invalid_argument("ApproxConfig: need 0 < tau0 < tau_*");
}

double chi_eps(const ApproxConfig& cfg, double t) {
  return cfg.cutoffs.chi(cfg.eps * t);
}
double chi_eps_d1(const ApproxConfig& cfg, double t) {
  return cfg.eps * cfg.cutoffs.chi_d1(cfg.eps * t);
}
double chi_eps_d2(const ApproxConfig& cfg, double t) {
  return cfg.eps * cfg.eps * cfg.cutoffs.chi_d2(cfg.eps * t);
}

double eta(const ApproxConfig& cfg, double t, double r) {
  if (t <= 0.0) return 0.0;
  return cfg.cutoffs.xi(r / t);
}

namespace {

struct EtaTerms {
  double e = 0.0, dt = 0.0, dr = 0.0, dtt = 0.0, drr = 0.0;
};

EtaTerms eta_terms(const ApproxConfig& cfg, double t, double r) {
  EtaTerms out;
  if (t <= 0.0) return out;
  const double x = r / t;
  const double x1 = cfg.cutoffs.xi_d1(x);
  const double x2 = cfg.cutoffs.xi_d2(x);
  out.e = cfg.cutoffs.xi(x);
  out.dt = -r / (t * t) * x1;
  out.dr = x1 / t;
  out.dtt = 2.0 * r / (t * t * t) * x1 + r * r / (t * t * t * t) * x2;
  out.drr = x2 / (t * t);
  return out;
}

struct WTerms {
  double p = 0.0, P = 0.0, dtau_p = 0.0, d2tau_p = 0.0;
  double tau = 0.0;
};

WTerms w_terms(const ApproxConfig& cfg, double t, double r) {
  WTerms out;
  out.tau = cfg.eps * std::log(t);
  const auto& pc = *cfg.profile;
  const double s = r - t;
  out.p = pc.p(s, out.tau);
  out.P = pc.P(s, out.tau);
  out.dtau_p = pc.dp_dtau(s, out.tau);
  out.d2tau_p = pc.d2p_dtau2(s, out.tau);
  return out;
}

}  // namespace

double w_field(const ApproxConfig& cfg, double t, double r) {
  if (t < 1.0 || r <= 0.0) return 0.0;
  return cfg.eps / r * cfg.profile->p(r - t, cfg.eps * std::log(t));
}

double w_field_dt(const ApproxConfig& cfg, double t, double r) {
  if (t < 1.0 || r <= 0.0) return 0.0;
  const double tau = cfg.eps * std::log(t);
  const auto& pc = *cfg.profile;
  const double s = r - t;
  return cfg.eps / r * (-pc.P(s, tau) + cfg.eps / t * pc.dp_dtau(s, tau));
}

double w_field_dr(const ApproxConfig& cfg, double t, double r) {
  if (t < 1.0 || r <= 0.0) return 0.0;
  const double tau = cfg.eps * std::log(t);
  const auto& pc = *cfg.profile;
  const double s = r - t;
  return -cfg.eps / (r * r) * pc.p(s, tau) + cfg.eps / r * pc.P(s, tau);
}

U1Values u1_eval(const ApproxConfig& cfg, double t, double r) {
  U1Values out;
  const double chi = chi_eps(cfg, t);
  const double chi1 = chi_eps_d1(cfg, t);
  const double eps = cfg.eps;
  const auto& lin = *cfg.linear;

  double u0 = 0.0, u0t = 0.0, u0r = 0.0;
  if (chi > 0.0) {
    u0 = lin.u(t, r);
    u0t = lin.ut(t, r);
    u0r = lin.ur(t, r);
  }

  double B = 0.0, Bt = 0.0, Br = 0.0;  // eta * w and derivatives
  if (chi < 1.0) {
    const auto et = eta_terms(cfg, t, r);
    if (et.e != 0.0 || et.dt != 0.0 || et.dr != 0.0) {
      const double w = w_field(cfg, t, r);
      const double wt = w_field_dt(cfg, t, r);
      const double wr = w_field_dr(cfg, t, r);
      B = et.e * w;
      Bt = et.dt * w + et.e * wt;
      Br = et.dr * w + et.e * wr;
    }
  }

  out.u1 = chi * eps * u0 + (1.0 - chi) * B;
  out.du1_dt = chi1 * eps * u0 + chi * eps * u0t - chi1 * B + (1.0 - chi) * Bt;
  out.du1_dr = chi * eps * u0r + (1.0 - chi) * Br;
  return out;
}

double error_E(const ApproxConfig& cfg, double t, double r) {
  const double eps = cfg.eps;
  const double chi = chi_eps(cfg, t);
  const double chi1 = chi_eps_d1(cfg, t);
  const double chi2 = chi_eps_d2(cfg, t);
  const auto& lin = *cfg.linear;

  // commutator terms of box(chi eps u0); box u0 = 0 analytically
  double box_u1 = 0.0;
  if (chi1 != 0.0 || chi2 != 0.0) {
    box_u1 += eps * (chi2 * lin.u(t, r) + 2.0 * chi1 * lin.ut(t, r));
  }

  if (chi < 1.0) {
    const auto et = eta_terms(cfg, t, r);
    if (et.e != 0.0 || et.dt != 0.0 || et.dr != 0.0) {
      const auto wt = w_terms(cfg, t, r);
      const double G = g_of_theta(cfg.profile->coeffs, ProfileContext::kE3);
      const double w = eps / r * wt.p;
      const double w_t = eps / r * (-wt.P + eps / t * wt.dtau_p);
      const double w_r = -eps / (r * r) * wt.p + eps / r * wt.P;
      const double box_w =
          eps / r *
          (eps * G / t * wt.P * wt.P + eps / (t * t) * (eps * wt.d2tau_p - wt.dtau_p));
      const double box_eta = et.dtt - et.drr - 2.0 / r * et.dr;
      const double box_B =
          et.e * box_w + w * box_eta + 2.0 * (et.dt * w_t - et.dr * w_r);
      box_u1 += -chi2 * et.e * w - 2.0 * chi1 * (et.dt * w + et.e * w_t) +
                (1.0 - chi) * box_B;
    }
  }

  const auto u1 = u1_eval(cfg, t, r);
  return box_u1 - cfg.c * u1.du1_dt * u1.du1_dt;
}

namespace {

// (1 - chi_eps) eta w, the block whose d'Alembertian the FD variant takes
double far_block(const ApproxConfig& cfg, double t, double r) {
  const double chi = chi_eps(cfg, t);
  if (chi >= 1.0) return 0.0;
  const double e = eta(cfg, t, r);
  if (e == 0.0) return 0.0;
  return (1.0 - chi) * e * w_field(cfg, t, r);
}

}  // namespace

double error_E_fd(const ApproxConfig& cfg, double t, double r) {
  const double h = cfg.fd_step;
  if (t - 2.0 * h < 0.0 || r - 2.0 * h < 1.0)
    throw std::domain_error("error_E_fd: FD stencil leaves the domain");
  auto ft = [&](double dt) { return far_block(cfg, t + dt, r); };
  auto fr = [&](double dr) { return far_block(cfg, t, r + dr); };
  const double ih2 = 1.0 / (12.0 * h * h);
  const double ih1 = 1.0 / (12.0 * h);
  const double c0 = far_block(cfg, t, r);
  const double dtt =
      (-ft(2 * h) + 16.0 * ft(h) - 30.0 * c0 + 16.0 * ft(-h) - ft(-2 * h)) * ih2;
  const double drr =
      (-fr(2 * h) + 16.0 * fr(h) - 30.0 * c0 + 16.0 * fr(-h) - fr(-2 * h)) * ih2;
  const double dr1 = (-fr(2 * h) + 8.0 * fr(h) - 8.0 * fr(-h) + fr(-2 * h)) * ih1;
  const double box_far = dtt - drr - 2.0 / r * dr1;

  const double eps = cfg.eps;
  const double chi1 = chi_eps_d1(cfg, t);
  const double chi2 = chi_eps_d2(cfg, t);
  double box_u1 = box_far;
  if (chi1 != 0.0 || chi2 != 0.0)
    box_u1 += eps * (chi2 * cfg.linear->u(t, r) + 2.0 * chi1 * cfg.linear->ut(t, r));

  const auto u1 = u1_eval(cfg, t, r);
  return box_u1 - cfg.c * u1.du1_dt * u1.du1_dt;
}

DecayReport decay_diagnostics(const ApproxConfig& cfg, const WeightParams& params,
                              const DiagGridSpec& grid) {
  cfg.validate();
  const double eps = cfg.eps;
  const double lambda = params.lambda;
  const double mu = params.mu;
  const double R = cfg.profile->fplus.support_radius;
  const double t_end = grid.t_end > 0.0 ? grid.t_end : std::exp(cfg.tau0 / eps);

  DecayReport rep;
  const double el = std::pow(eps, 1.0 + lambda);

  // sup scans: rows log-spaced in 1 + t, r clustered near the light cone
  const double umax = std::log(1.0 + t_end);
  for (int i = 0; i < grid.n_t; ++i) {
    const double t = std::expm1(umax * i / (grid.n_t - 1));
    const int half = grid.n_r / 2;
    std::vector<double> rs;
    rs.reserve(grid.n_r);
    const double rmax = t + R + 1.0;
    for (int k = 0; k < half; ++k)
      rs.push_back(1.0 + (rmax - 1.0) * k / (half - 1));
    const double band_lo = std::max(1.0, t - 2.0 * R);
    for (int k = 0; k < half; ++k)
      rs.push_back(band_lo + (t + R - band_lo) * k / (half - 1));
    for (double r : rs) {
      const auto u1 = u1_eval(cfg, t, r);
      const double wp = jb(t + r);
      const double wm = jb(t - r);
      rep.S1 = std::max(rep.S1, wp * std::abs(u1.u1) / eps);
      rep.S2 = std::max(rep.S2,
                        wp * wm * (std::abs(u1.du1_dt) + std::abs(u1.du1_dr)) / eps);
      const double E = error_E(cfg, t, r);
      rep.S3 = std::max(rep.S3, std::abs(E) * std::pow(wp, 2.0 - lambda + mu) *
                                    std::pow(wm, 1.0 - mu) / el);
    }
  }

  // discrete L2(r dr, weight r^2) rows
  for (int i = 0; i < grid.n_t_l2; ++i) {
    const double t = std::expm1(umax * i / (grid.n_t_l2 - 1));
    const double lo = (t > 2.0 / eps + 2.0) ? 0.5 * t - 1.0 : 1.0;
    const double hi = t + R;
    if (hi <= lo) continue;
    const int n = std::max(8, static_cast<int>((hi - lo) / grid.dr_l2));
    const double dr = (hi - lo) / n;
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double r = lo + dr * k;
      const double E = error_E(cfg, t, r);
      const double val = E * E * r * r;
      acc += (k == 0 || k == n) ? 0.5 * val : val;
    }
    const double l2 = std::sqrt(acc * dr);
    rep.S4 = std::max(rep.S4, std::pow(1.0 + t, 1.5 - lambda) * l2 / el);
  }

  // matching quality between w and eps u0 on the overlap region
  const double log2e = std::log(2.0 / eps);
  const int n_tm = 16, n_rm = 80;
  for (int i = 0; i < n_tm; ++i) {
    const double t = 2.0 + (2.0 / eps - 2.0) * i / (n_tm - 1);
    for (int k = 0; k < n_rm; ++k) {
      const double r = 0.5 * t + (t + R - 0.5 * t) * k / (n_rm - 1);
      if (r < 1.0) continue;
      const double diff = w_field(cfg, t, r) - eps * cfg.linear->u(t, r);
      const double wp = jb(t + r);
      rep.matching_sup =
          std::max(rep.matching_sup, wp * wp * std::abs(diff) / (eps * log2e));
    }
  }

  return rep;
}

}  // namespace exwave
