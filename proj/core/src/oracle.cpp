#include "bilat/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bilat/constants.hpp"

namespace bilat {

namespace {

// exp(h [[0, p], [q, 0]]): closed form, exactly unimodular in every branch.
WMatrix exp_slice(double p, double q, double h) {
  const double pq = p * q;
  if (pq > 0.0) {
    const double r = std::sqrt(pq);
    const double ch = std::cosh(r * h), sh = std::sinh(r * h);
    return {ch, p * sh / r, q * sh / r, ch};
  }
  if (pq < 0.0) {
    const double r = std::sqrt(-pq);
    const double cs = std::cos(r * h), sn = std::sin(r * h);
    return {cs, p * sn / r, q * sn / r, cs};
  }
  return {1.0, p * h, q * h, 1.0};  // nilpotent limit (p or q zero)
}

// n uniform slices across the device; generator averaged exactly per slice.
WMatrix run_slices(const Device& device, double e, long long n) {
  const double total = device.total_width();
  const double h = total / static_cast<double>(n);
  std::vector<double> pos(device.layers.size() + 1, 0.0);
  for (std::size_t j = 0; j < device.layers.size(); ++j)
    pos[j + 1] = pos[j] + device.layers[j].width;

  WMatrix w = WMatrix::identity();
  std::size_t j0 = 0;  // first layer that can still overlap the slice
  for (long long i = 0; i < n; ++i) {
    const double x0 = i * h, x1 = (i + 1) * h;
    double p_acc = 0.0, q_acc = 0.0;
    while (j0 + 1 < pos.size() - 1 && pos[j0 + 1] <= x0) ++j0;
    for (std::size_t j = j0; j < device.layers.size(); ++j) {
      if (pos[j] >= x1) break;
      const double ov = std::min(x1, pos[j + 1]) - std::max(x0, pos[j]);
      if (ov <= 0.0) continue;
      p_acc += ov * (device.layers[j].mass / constants::k2);
      q_acc += ov * (-2.0 * (e - device.layers[j].potential));
    }
    w = exp_slice(p_acc / h, q_acc / h, h) * w;
  }
  return w;
}

}  // namespace

WMatrix integrate_w(const Device& device, double e, const OracleConfig& cfg) {
  if (cfg.slice_width <= 0.0)
    throw std::invalid_argument("integrate_w: slice_width must be > 0");
  if (device.layers.empty())
    throw std::invalid_argument("integrate_w: empty device");
  const double total = device.total_width();
  if (total <= 0.0) return WMatrix::identity();
  const long long n =
      std::max(1LL, static_cast<long long>(std::ceil(total / cfg.slice_width)));
  if (n > 200000000LL)
    throw std::invalid_argument("integrate_w: slice count too large");
  const WMatrix w1 = run_slices(device, e, n);
  if (!cfg.richardson) return w1;
  const WMatrix w2 = run_slices(device, e, 2 * n);
  return {(4.0 * w2.g - w1.g) / 3.0, (4.0 * w2.u - w1.u) / 3.0,
          (4.0 * w2.gp - w1.gp) / 3.0, (4.0 * w2.up - w1.up) / 3.0};
}

WMatrix delta_limit_w(double omega, double width, double e) {
  if (width <= 0.0) throw std::invalid_argument("delta_limit_w: width must be > 0");
  // Dimensionless units: psi_xx = (V - E) psi, barrier V = 2 omega / width.
  // The defect inserted into an ideal free stack is F(-w/2) B(w) F(-w/2).
  const WMatrix barrier = exp_slice(1.0, 2.0 * omega / width - e, width);
  const WMatrix free_half_inv = exp_slice(1.0, -e, -0.5 * width);
  return free_half_inv * barrier * free_half_inv;
}

double compare(const WMatrix& a, const WMatrix& b) {
  const double dg = std::abs(a.g - b.g), du = std::abs(a.u - b.u);
  const double dgp = std::abs(a.gp - b.gp), dup = std::abs(a.up - b.up);
  return std::max(std::max(dg, du), std::max(dgp, dup));
}

}  // namespace bilat
