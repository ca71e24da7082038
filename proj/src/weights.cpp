#include "exwave/weights.hpp"

#include <array>
#include <cmath>

namespace exwave {

double weighted_sup(const SampledField& field,
                    const std::function<double(double, double)>& weight) {
  if (field.rows.size() != field.times.size())
    throw std::invalid_argument("weighted_sup: rows/times size mismatch");
  double best = 0.0;
  for (std::size_t i = 0; i < field.times.size(); ++i) {
    const double t = field.times[i];
    const auto& row = field.rows[i];
    if (static_cast<int>(row.size()) != field.rgrid.n)
      throw std::invalid_argument("weighted_sup: row length mismatch");
    for (int j = 0; j < field.rgrid.n; ++j) {
      const double r = field.rgrid.point(j);
      const double v = row[j];
      if (!std::isfinite(v))
        throw std::invalid_argument("weighted_sup: non-finite field sample");
      best = std::max(best, jb(r) * weight(t, r) * std::abs(v));
    }
  }
  return best;
}

namespace {

// phi(x) = -1/(x - x^2) and its derivatives; smooth_bump = exp(phi).
struct BumpPhi {
  double p1, p2, p3;
};

BumpPhi bump_phi_derivs(double x) {
  const double q = x - x * x;        // x(1-x)
  const double u = 1.0 - 2.0 * x;
  const double iq = 1.0 / q;
  const double iq2 = iq * iq;
  const double iq3 = iq2 * iq;
  const double iq4 = iq2 * iq2;
  BumpPhi d;
  d.p1 = u * iq2;
  d.p2 = -2.0 * iq2 - 2.0 * u * u * iq3;
  d.p3 = 12.0 * u * iq3 + 6.0 * u * u * u * iq4;
  return d;
}

}  // namespace

double smooth_bump(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return std::exp(-1.0 / (x - x * x));
}

double smooth_bump_d1(double x) {
  const double b = smooth_bump(x);
  if (b == 0.0) return 0.0;
  return b * bump_phi_derivs(x).p1;
}

double smooth_bump_d2(double x) {
  const double b = smooth_bump(x);
  if (b == 0.0) return 0.0;
  const auto d = bump_phi_derivs(x);
  return b * (d.p2 + d.p1 * d.p1);
}

double smooth_bump_d3(double x) {
  const double b = smooth_bump(x);
  if (b == 0.0) return 0.0;
  const auto d = bump_phi_derivs(x);
  return b * (d.p3 + 3.0 * d.p1 * d.p2 + d.p1 * d.p1 * d.p1);
}

namespace {

constexpr int kStepTableIntervals = 4096;

struct StepTable {
  double mass = 0.0;                   // integral of bump over [0,1]
  std::array<double, kStepTableIntervals + 1> cum{};  // cumulative, normalized

  StepTable() {
    double acc = 0.0;
    cum[0] = 0.0;
    const double dx = 1.0 / kStepTableIntervals;
    for (int i = 0; i < kStepTableIntervals; ++i) {
      const double a = i * dx;
      const double b = a + dx;
      acc += adaptive_quad([](double x) { return smooth_bump(x); }, a, b, 1e-14);
      cum[i + 1] = acc;
    }
    mass = acc;
    for (auto& v : cum) v /= mass;
  }
};

const StepTable& step_table() {
  static const StepTable table;
  return table;
}

}  // namespace

double smooth_bump_mass() { return step_table().mass; }

double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const auto& tab = step_table();
  const double pos = x * kStepTableIntervals;
  int i = static_cast<int>(pos);
  if (i >= kStepTableIntervals) i = kStepTableIntervals - 1;
  const double dx = 1.0 / kStepTableIntervals;
  const double x0 = i * dx;
  const double u = (x - x0) / dx;
  const double y0 = tab.cum[i];
  const double y1 = tab.cum[i + 1];
  // Hermite cubic with exact endpoint slopes bump(x)/mass.
  const double m0 = smooth_bump(x0) / tab.mass * dx;
  const double m1 = smooth_bump(x0 + dx) / tab.mass * dx;
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
  const double h10 = u3 - 2.0 * u2 + u;
  const double h01 = -2.0 * u3 + 3.0 * u2;
  const double h11 = u3 - u2;
  double y = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
  if (y < 0.0) y = 0.0;
  if (y > 1.0) y = 1.0;
  return y;
}

double smoothstep_d1(double x) { return smooth_bump(x) / step_table().mass; }

double smoothstep_d2(double x) { return smooth_bump_d1(x) / step_table().mass; }

std::pair<double, double> golden_section_max(const std::function<double(double)>& f,
                                             double lo, double hi, double xtol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

}  // namespace exwave
