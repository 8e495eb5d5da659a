#include "bilat/bands.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bilat/constants.hpp"
#include "rootfind.hpp"

namespace bilat {

namespace {

constexpr double pi = 3.14159265358979324;

double matrix_scale(const WMatrix& w) {
  return std::max(std::max(std::abs(w.g), std::abs(w.u)),
                  std::max(std::abs(w.gp), std::abs(w.up)));
}

char sign_char(double x, double dead) {
  if (x > dead) return '+';
  if (x < -dead) return '-';
  return '0';
}

}  // namespace

bool zone_allowed(Zone z) {
  return z == Zone::AZ0 || z == Zone::AZ1 || z == Zone::AZ2 || z == Zone::AZ3;
}

bool zone_forbidden(Zone z) {
  return z == Zone::FZ0 || z == Zone::FZ1 || z == Zone::FZ2 || z == Zone::FZ3;
}

std::string zone_name(Zone z) {
  switch (z) {
    case Zone::FZ0: return "FZ0";
    case Zone::AZ0: return "AZ0";
    case Zone::FZ1: return "FZ1";
    case Zone::AZ1: return "AZ1";
    case Zone::FZ2: return "FZ2";
    case Zone::AZ2: return "AZ2";
    case Zone::FZ3: return "FZ3";
    case Zone::AZ3: return "AZ3";
    case Zone::Edge: return "edge";
    case Zone::Unknown: break;
  }
  return "unknown";
}

Zone classify_zone(const WMatrix& w) {
  const double dead = constants::sign_dead_band * matrix_scale(w);
  if (std::abs(w.g) <= dead || std::abs(w.u) <= dead ||
      std::abs(w.gp) <= dead || std::abs(w.up) <= dead)
    return Zone::Edge;
  const unsigned code = (w.up > 0.0 ? 8u : 0u) | (w.u > 0.0 ? 4u : 0u) |
                        (w.gp > 0.0 ? 2u : 0u) | (w.g > 0.0 ? 1u : 0u);
  switch (code) {  // zone sign patterns (u', u, g', g)
    case 0b1111: return Zone::FZ0;
    case 0b1101: return Zone::AZ0;
    case 0b1100: return Zone::FZ1;
    case 0b0100: return Zone::AZ1;
    case 0b0110: return Zone::FZ2;
    case 0b0010: return Zone::AZ2;
    case 0b1010: return Zone::FZ3;
    case 0b1011: return Zone::AZ3;
    default: return Zone::Unknown;
  }
}

LogDerivs log_derivatives(const WMatrix& w) {
  const double pole = 1e-13 * matrix_scale(w);
  LogDerivs ld;
  ld.gamma = w.gp / w.g;
  ld.lambda = w.up / w.u;
  ld.gamma_pole = std::abs(w.g) <= pole;
  ld.lambda_pole = std::abs(w.u) <= pole;
  return ld;
}

std::pair<double, double> bloch_cos_phi(const WMatrix& w) {
  return {w.trace_half(), w.g * w.up + w.u * w.gp};
}

std::pair<double, double> z_squared(const WMatrix& w) {
  return {-(w.gp * w.up) / (w.g * w.u), -(w.g * w.gp) / (w.u * w.up)};
}

KardParams kard_decompose(const WMatrix& w, double nu) {
  if (nu <= 0.0) throw std::domain_error("kard_decompose: nu must be > 0");
  KardParams kp;
  kp.zone = classify_zone(w);
  switch (kp.zone) {
    case Zone::AZ0:
    case Zone::AZ1:
    case Zone::AZ2:
    case Zone::AZ3: {
      kp.alpha = 0.5 * std::log(w.up / w.g);
      kp.z = std::sqrt(-w.gp / w.u);
      const double sinb = w.u * kp.z;
      const double cosb_mag = std::sqrt(std::max(w.g * w.up, 0.0));
      // beta quadrants I/II/III for AZ0/AZ1/AZ2; AZ3 extrapolates to IV.
      const bool pos = (kp.zone == Zone::AZ0 || kp.zone == Zone::AZ3);
      kp.beta = std::atan2(sinb, pos ? cosb_mag : -cosb_mag);
      if (kp.beta < 0.0) kp.beta += 2.0 * pi;
      kp.eta = std::asinh(0.5 * (nu / kp.z - kp.z / nu));
      kp.mu = kp.eta - kp.alpha;
      kp.pattern_extrapolated = (kp.zone == Zone::AZ3);
      return kp;
    }
    case Zone::FZ0:
    case Zone::FZ2: {
      kp.alpha = 0.5 * std::log(w.up / w.g);
      kp.z = std::sqrt(w.gp / w.u);
      kp.beta = std::asinh(std::sqrt(w.u * w.gp));  // beta_bar
      break;
    }
    case Zone::FZ1:
    case Zone::FZ3: {
      kp.alpha = 0.5 * std::log(-w.up / w.g);
      kp.z = std::sqrt(-w.gp / w.u);
      kp.beta = std::asinh(std::sqrt(-w.up * w.g));
      break;
    }
    default: {
      const double dead = constants::sign_dead_band * matrix_scale(w);
      throw std::domain_error(
          std::string("kard_decompose: unclassified sign pattern (u'=") +
          sign_char(w.up, dead) + ", u=" + sign_char(w.u, dead) +
          ", g'=" + sign_char(w.gp, dead) + ", g=" + sign_char(w.g, dead) + ")");
    }
  }
  kp.eta = std::asinh(0.5 * (nu / kp.z - kp.z / nu));  // eta_bar
  kp.mu = kp.eta - kp.alpha;                           // xi
  return kp;
}

DoubleCellKard double_cell_kard(const KardParams& kp, double nu) {
  if (nu <= 0.0) throw std::domain_error("double_cell_kard: nu must be > 0");
  DoubleCellKard dc;
  dc.z_big = kp.z * std::exp(kp.alpha);
  dc.mu = std::log(nu / dc.z_big);
  if (kp.allowed()) {
    dc.cos_phi = std::cos(2.0 * kp.beta);
  } else if (kp.zone == Zone::FZ0 || kp.zone == Zone::FZ2) {
    dc.cos_phi = std::cosh(2.0 * kp.beta);  // above +1
  } else if (kp.zone == Zone::FZ1 || kp.zone == Zone::FZ3) {
    dc.cos_phi = -std::cosh(2.0 * kp.beta);  // below -1
  } else {
    throw std::domain_error("double_cell_kard: unclassified zone");
  }
  return dc;
}

double cos_phi_odd(const KardParams& kp, int n) {
  if (!kp.allowed())
    throw std::domain_error("cos_phi_odd: allowed zone required");
  return std::cosh(kp.alpha) * std::cos((2 * n + 1) * kp.beta);
}

BandEdgeScan find_band_edges(const HalfCellSpec& spec, double e_lo, double e_hi,
                             int resolution) {
  if (!(e_lo > 0.0) || !(e_hi > e_lo))
    throw std::invalid_argument("find_band_edges: need 0 < e_lo < e_hi");
  if (resolution < 3)
    throw std::invalid_argument("find_band_edges: resolution too small");

  BandEdgeScan scan;
  const double h = (e_hi - e_lo) / (resolution - 1);
  auto entry = [&spec](int which, double e) {
    const WMatrix w = half_cell_w(spec, e);
    switch (which) {
      case 0: return w.g;
      case 1: return w.u;
      case 2: return w.gp;
      default: return w.up;
    }
  };

  double prev[4];
  for (int k = 0; k < 4; ++k) prev[k] = entry(k, e_lo);
  for (int i = 1; i < resolution; ++i) {
    const double x0 = e_lo + (i - 1) * h, x1 = e_lo + i * h;
    int hits = 0;
    for (int k = 0; k < 4; ++k) {
      const double f1 = entry(k, x1);
      if ((prev[k] < 0.0) != (f1 < 0.0)) {
        ++hits;
        const double root = detail::bisect(
            [&entry, k](double e) { return entry(k, e); }, x0, x1, 1e-9);
        BandEdge edge;
        edge.energy = root;
        edge.which = (k == 0) ? EdgeFunction::NodeOfG
                     : (k == 3) ? EdgeFunction::NodeOfUprime
                                : EdgeFunction::CosPhiUnity;
        // Outer edges carry cos phi = +1, gap edges -1; the side on which
        // the zone is allowed tells lower from upper.
        const double probe = std::min(0.125 * h, 0.5 * std::min(root - x0, x1 - root) + 1e-9);
        const bool allowed_above =
            zone_allowed(classify_zone(half_cell_w(spec, root + probe)));
        const bool allowed_below =
            zone_allowed(classify_zone(half_cell_w(spec, root - probe)));
        if (allowed_above == allowed_below)
          scan.warnings.push_back(
              "ambiguous zone parity around edge near " + std::to_string(root) +
              " meV; resolution too coarse");
        const double cp = bloch_cos_phi(half_cell_w(spec, root)).second;
        if (std::abs(cp - 1.0) <= std::abs(cp + 1.0))
          edge.kind = allowed_above ? EdgeKind::LowerOuter : EdgeKind::UpperOuter;
        else
          edge.kind = allowed_above ? EdgeKind::GapUpper : EdgeKind::GapLower;
        scan.edges.push_back(edge);
      }
      prev[k] = f1;
    }
    if (hits > 1)
      scan.warnings.push_back("multiple edges inside one grid cell near " +
                              std::to_string(x1) +
                              " meV; increase resolution");
  }
  std::sort(scan.edges.begin(), scan.edges.end(),
            [](const BandEdge& a, const BandEdge& b) { return a.energy < b.energy; });
  return scan;
}

std::pair<std::complex<double>, std::complex<double>> fixed_points(
    double mu, double cos_phi, Zone zone) {
  if (zone_forbidden(zone)) {
    const double t = std::tanh(0.5 * mu);  // mu carries xi here
    const std::complex<double> p =
        std::complex<double>(t, 1.0) / std::complex<double>(1.0, t);
    return {p, std::conj(p)};
  }
  if (std::abs(cos_phi) >= 1.0 - 1e-15) {  // band edge: coalesced at +-1
    const double s = (mu >= 0.0) ? 1.0 : -1.0;
    return {{s, 0.0}, {s, 0.0}};
  }
  const double t = std::tanh(0.5 * mu);
  return {{t, 0.0}, {t == 0.0 ? HUGE_VAL : 1.0 / t, 0.0}};
}

}  // namespace bilat
