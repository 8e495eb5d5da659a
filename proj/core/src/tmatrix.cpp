#include "bilat/tmatrix.hpp"

#include <cmath>
#include <stdexcept>

#include "bilat/constants.hpp"

namespace bilat {

namespace {
constexpr double kk = constants::hbar2_over_2m;
constexpr double k2 = constants::k2;
}  // namespace

WMatrix operator*(const WMatrix& lhs, const WMatrix& rhs) {
  return {lhs.g * rhs.g + lhs.u * rhs.gp, lhs.g * rhs.u + lhs.u * rhs.up,
          lhs.gp * rhs.g + lhs.up * rhs.gp, lhs.gp * rhs.u + lhs.up * rhs.up};
}

double velocity(double q, double mass) { return k2 * q / mass; }

double exterior_velocity(double e, double potential, double mass) {
  if (e <= potential)
    throw std::domain_error("exterior_velocity: no propagating channel, E <= V");
  return velocity(std::sqrt(mass * (e - potential) / kk), mass);
}

WMatrix layer_w(const Layer& layer, double e) {
  const double w = layer.width;
  const double de = e - layer.potential;
  if (std::abs(de) < constants::e_equal_v_band)  // q -> 0 series limit
    return {1.0, w * layer.mass / k2, 0.0, 1.0};
  const double q = std::sqrt(layer.mass * std::abs(de) / kk);
  const double nu = velocity(q, layer.mass);
  if (de > 0.0) {  // propagating
    const double s = std::sin(q * w), c = std::cos(q * w);
    return {c, s / nu, -nu * s, c};
  }
  const double s = std::sinh(q * w), c = std::cosh(q * w);  // evanescent
  return {c, s / nu, nu * s, c};
}

WMatrix compose(std::span<const WMatrix> ws) {
  if (ws.empty()) throw std::invalid_argument("compose: empty matrix list");
  WMatrix w = ws.front();
  for (std::size_t i = 1; i < ws.size(); ++i) w = ws[i] * w;  // right-to-left
  return w;
}

WMatrix compose(const std::vector<WMatrix>& ws) {
  return compose(std::span<const WMatrix>(ws.data(), ws.size()));
}

WMatrix device_w(const Device& d, double e) {
  WMatrix w = WMatrix::identity();
  for (const Layer& layer : d.layers) w = layer_w(layer, e) * w;
  return w;
}

WMatrix half_cell_w(const HalfCellSpec& spec, double e) {
  const WMatrix wa = layer_w({spec.a, 0.0, spec.well_mass}, e);
  const WMatrix wb = layer_w({spec.b, spec.barrier_height, spec.barrier_mass}, e);
  const WMatrix wc = layer_w({spec.c, 0.0, spec.well_mass}, e);
  return wc * wb * wa;  // a first in space
}

WMatrix reverse_half_cell(const WMatrix& w) { return {w.up, w.u, w.gp, w.g}; }

WMatrix double_cell_w(const WMatrix& w_r) {
  const double diag = w_r.g * w_r.up + w_r.gp * w_r.u;
  return {diag, 2.0 * w_r.g * w_r.u, 2.0 * w_r.gp * w_r.up, diag};
}

WMatrix w_power_cheb(const WMatrix& w, int n) {
  if (n < 0) throw std::invalid_argument("w_power_cheb: negative power");
  if (n == 0) return WMatrix::identity();
  if (n == 1) return w;
  const double x = w.trace_half();
  if (std::abs(x) > 1.0 - 1e-12) {  // sin phi cancels near band edges
    WMatrix acc = WMatrix::identity(), base = w;
    for (int m = n; m > 0; m >>= 1, base = base * base)
      if (m & 1) acc = acc * base;
    return acc;
  }
  const double phi = std::acos(x);
  const double s = std::sin(phi);
  const double un1 = std::sin(n * phi) / s;        // U_{n-1}(x)
  const double un2 = std::sin((n - 1) * phi) / s;  // U_{n-2}(x)
  return {un1 * w.g - un2, un1 * w.u, un1 * w.gp, un1 * w.up - un2};
}

MMatrix w_to_m(const WMatrix& w, double nu) {
  if (nu <= 0.0) throw std::domain_error("w_to_m: nu must be positive");
  MMatrix m;
  m.nu = nu;
  const double re_d = 0.5 * (w.g + w.up), im_d = 0.5 * (nu * w.u - w.gp / nu);
  const double re_o = 0.5 * (w.up - w.g), im_o = 0.5 * (nu * w.u + w.gp / nu);
  m.m11 = {re_d, -im_d};
  m.m22 = {re_d, im_d};
  m.m12 = {re_o, im_o};
  m.m21 = {re_o, -im_o};
  return m;
}

double transmission_from_m(const MMatrix& m) {
  const double a2 = std::norm(m.m11);
  if (a2 == 0.0) throw std::domain_error("transmission_from_m: singular M11");
  return 1.0 / a2;
}

}  // namespace bilat
