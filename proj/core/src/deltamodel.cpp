#include "bilat/deltamodel.hpp"

#include <cmath>
#include <stdexcept>

#include "rootfind.hpp"

namespace bilat {

WMatrix delta_half_cell(double kd, const DeltaSpec& spec) {
  if (kd <= 0.0) throw std::domain_error("delta_half_cell: kd must be > 0");
  const double ks = kd * spec.s_over_d;
  const double r = spec.omega_d / kd;
  WMatrix w;
  w.g = std::cos(kd) + r * (std::sin(kd) - std::sin(ks));
  w.u = (std::sin(kd) - r * (std::cos(kd) - std::cos(ks))) / kd;
  w.gp = -kd * (std::sin(kd) - r * (std::cos(kd) + std::cos(ks)));
  w.up = std::cos(kd) + r * (std::sin(kd) + std::sin(ks));
  return w;
}

double delta_bragg_point(const DeltaSpec& spec, double kd_lo, double kd_hi) {
  auto trace = [&spec](double kd) {
    return delta_half_cell(kd, spec).trace_half();
  };
  if (trace(kd_lo) * trace(kd_hi) > 0.0)
    throw std::invalid_argument("delta_bragg_point: trace does not change sign");
  return detail::bisect(trace, kd_lo, kd_hi, 1e-13 * kd_hi);
}

namespace {

// First sign change of entry(kd) on [lo, hi], bisected; negative if none.
template <class F>
double first_node(F&& entry, double lo, double hi) {
  constexpr int n = 4096;
  const double h = (hi - lo) / n;
  double x0 = lo, f0 = entry(lo);
  for (int i = 1; i <= n; ++i) {
    const double x1 = lo + i * h, f1 = entry(x1);
    if (f0 == 0.0) return x0;
    if ((f0 < 0.0) != (f1 < 0.0))
      return bilat::detail::bisect(entry, x0, x1, 1e-13 * 3.14159265358979324);
    x0 = x1;
    f0 = f1;
  }
  return -1.0;
}

}  // namespace

std::pair<double, double> delta_gap_edges(const DeltaSpec& spec, double kd_lo,
                                          double kd_hi) {
  if (spec.s_over_d == 0.0)
    throw std::invalid_argument("delta_gap_edges: zero asymmetry has no gap");
  const double kd_b = first_node(
      [&spec](double kd) { return delta_half_cell(kd, spec).g; }, kd_lo, kd_hi);
  const double kd_c = first_node(
      [&spec](double kd) { return delta_half_cell(kd, spec).up; }, kd_lo, kd_hi);
  if (kd_b < 0.0) throw std::invalid_argument("delta_gap_edges: no node of g in bracket");
  if (kd_c < 0.0) throw std::invalid_argument("delta_gap_edges: no node of u' in bracket");
  return {kd_b, kd_c};
}

}  // namespace bilat
