#include "bilat/transmission.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rootfind.hpp"

namespace bilat {

namespace {

constexpr double pi = 3.14159265358979324;
constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

double sq(double x) { return x * x; }

// eta recomputed from (z, nu) so the nu argument is honored.
double eta_of(double z, double nu) {
  return std::asinh(0.5 * (nu / z - z / nu));
}

// Phase residuals of N beta against the two resonance rules.
double residual_integer(double phase) {
  return std::abs(phase - pi * std::round(phase / pi));
}

double residual_half(double phase) {
  return std::abs(phase - pi * (std::round(phase / pi - 0.5) + 0.5));
}

}  // namespace

double transmission_even(const KardParams& kp, double nu, int n_double) {
  if (!kp.allowed())
    throw std::domain_error("transmission_even: allowed zone required");
  if (n_double < 1)
    throw std::invalid_argument("transmission_even: n_double must be >= 1");
  const double mu = eta_of(kp.z, nu) - kp.alpha;
  return 1.0 / (1.0 + sq(std::sinh(mu)) * sq(std::sin(2 * n_double * kp.beta)));
}

double transmission_odd(const KardParams& kp, double nu, int n) {
  if (!kp.allowed())
    throw std::domain_error("transmission_odd: allowed zone required");
  if (n < 0) throw std::invalid_argument("transmission_odd: n must be >= 0");
  const double eta = eta_of(kp.z, nu);
  const double nb = (2 * n + 1) * kp.beta;
  return 1.0 / (sq(std::cosh(kp.alpha) * std::cos(nb)) +
                sq(std::cosh(eta) * std::sin(nb)));
}

ForbiddenT transmission_forbidden(const KardParams& kp, int n_half) {
  if (!zone_forbidden(kp.zone))
    throw std::domain_error("transmission_forbidden: forbidden zone required");
  if (n_half < 1)
    throw std::invalid_argument("transmission_forbidden: n_half must be >= 1");
  const double sh2 = sq(std::sinh(n_half * kp.beta));  // beta_bar
  ForbiddenT out;
  if (n_half % 2 == 0) {  // continuation of the even-N form, bound 1
    out.t = 1.0 / (1.0 + sq(std::cosh(kp.mu)) * sh2);  // mu carries xi
    out.upper_bound = 1.0;
  } else if (kp.zone == Zone::FZ0 || kp.zone == Zone::FZ2) {  // cosh-alpha-led
    const double ca2 = sq(std::cosh(kp.alpha));
    out.t = 1.0 / (ca2 + (ca2 + sq(std::sinh(kp.eta))) * sh2);
    out.upper_bound = 1.0 / ca2;
  } else {  // cosh-eta-led
    const double ce2 = sq(std::cosh(kp.eta));
    out.t = 1.0 / (ce2 + (sq(std::sinh(kp.alpha)) + ce2) * sh2);
    out.upper_bound = 1.0 / ce2;
  }
  return out;
}

Envelope envelopes(const KardParams& kp, Parity parity) {
  if (!kp.allowed()) throw std::domain_error("envelopes: allowed zone required");
  Envelope env;
  env.eta_dominant = std::abs(kp.eta) > std::abs(kp.alpha);
  if (parity == Parity::Odd) {
    const double ba = 1.0 / sq(std::cosh(kp.alpha));
    const double be = 1.0 / sq(std::cosh(kp.eta));
    env.upper = std::max(ba, be);
    env.lower = std::min(ba, be);
  } else {
    env.upper = 1.0;
    env.lower = 1.0 / sq(std::cosh(kp.mu));
  }
  return env;
}

NuOfE exterior_nu(const HalfCellSpec& spec) {
  const double mass = spec.well_mass;
  return [mass](double e) { return exterior_velocity(e, 0.0, mass); };
}

std::optional<double> find_transparent(const HalfCellSpec& spec,
                                       const NuOfE& nu_of_e, double e_lo,
                                       double e_hi) {
  auto kard_at = [&](double e) {
    return kard_decompose(half_cell_w(spec, e), nu_of_e(e));
  };
  const KardParams lo = kard_at(e_lo), hi = kard_at(e_hi);
  if (!lo.allowed() || lo.zone != hi.zone)
    throw std::domain_error("find_transparent: band straddles a zone boundary");
  auto mu_at = [&](double e) { return kard_at(e).mu; };
  const double mu_lo = mu_at(e_lo), mu_hi = mu_at(e_hi);
  if (mu_lo == 0.0) return e_lo;
  if (mu_hi == 0.0) return e_hi;
  if ((mu_lo < 0.0) == (mu_hi < 0.0)) return std::nullopt;
  return detail::bisect(mu_at, e_lo, e_hi, 1e-9);
}

ResonanceReport find_resonances(const HalfCellSpec& spec, const NuOfE& nu_of_e,
                                int n_half, double e_lo, double e_hi,
                                std::string band) {
  if (n_half < 2) throw std::invalid_argument("find_resonances: N must be >= 2");
  if (!(e_hi > e_lo)) throw std::invalid_argument("find_resonances: empty band");

  auto kard_at = [&](double e) {
    return kard_decompose(half_cell_w(spec, e), nu_of_e(e));
  };
  auto t_raw = [&](double e) {
    const KardParams kp = kard_at(e);
    return (n_half % 2 == 0) ? transmission_even(kp, nu_of_e(e), n_half / 2)
                             : transmission_odd(kp, nu_of_e(e), n_half / 2);
  };
  // Normalized by the touched bound, the maxima sit exactly on the phase
  // touch points; raw maxima drift off them where the envelope slopes.
  auto t_norm = [&](double e) {
    const KardParams kp = kard_at(e);
    const double t = (n_half % 2 == 0)
                         ? transmission_even(kp, nu_of_e(e), n_half / 2)
                         : transmission_odd(kp, nu_of_e(e), n_half / 2);
    return t / envelopes(kp, parity_of(n_half)).upper;
  };

  ResonanceReport report;
  report.band = std::move(band);
  report.transparent_energy = find_transparent(spec, nu_of_e, e_lo, e_hi);

  constexpr int grid_n = 20001;
  const double h = (e_hi - e_lo) / (grid_n - 1);
  std::vector<double> ts(grid_n);
  for (int i = 0; i < grid_n; ++i) ts[i] = t_raw(e_lo + i * h);

  for (int i = 1; i + 1 < grid_n; ++i) {
    if (!(ts[i] > ts[i - 1]) || !(ts[i] > ts[i + 1])) continue;
    const double lo = e_lo + (i - 1) * h, hi = e_lo + (i + 1) * h;
    const bool transparent = report.transparent_energy &&
                             *report.transparent_energy >= lo &&
                             *report.transparent_energy <= hi;
    Resonance res;
    if (transparent) {
      res.energy = detail::golden_max(t_raw, lo, hi, 1e-10);
    } else {
      // The normalized maxima are the envelope touch points, with N beta on
      // the rule lattice (pi for even N, pi/2 for odd).  Solving the phase
      // equation reaches them even when the raw maximum drifts several grid
      // cells off the touch point (steep envelopes near band edges).
      auto phase_at = [&](double e) { return n_half * kard_at(e).beta; };
      const double lattice = (n_half % 2 == 0) ? pi : 0.5 * pi;
      const double target =
          lattice * std::round(phase_at(e_lo + i * h) / lattice);
      auto off = [&](double e) { return phase_at(e) - target; };
      double blo = lo, bhi = hi;
      double flo = off(blo), fhi = off(bhi);
      while ((flo < 0.0) == (fhi < 0.0) && (blo > e_lo || bhi < e_hi)) {
        const double span = bhi - blo;
        blo = std::max(e_lo, blo - span);
        bhi = std::min(e_hi, bhi + span);
        flo = off(blo);
        fhi = off(bhi);
      }
      res.energy = ((flo < 0.0) != (fhi < 0.0))
                       ? detail::bisect(off, blo, bhi, 1e-12)
                       : detail::golden_max(t_norm, lo, hi, 1e-10);
    }
    res.t = t_raw(res.energy);
    const double phase = n_half * kard_at(res.energy).beta;
    res.phase_over_pi = phase / pi;
    const double ri = residual_integer(phase), rh = residual_half(phase);
    res.phase_residual = std::min(ri, rh);
    res.rule = transparent    ? ResonanceRule::Transparent
               : (ri <= rh)   ? ResonanceRule::IntegerPi
                              : ResonanceRule::HalfInteger;
    report.resonances.push_back(res);
  }
  return report;
}

namespace {

SweepRecord point_record(const Device& dev, double e) {
  SweepRecord r;
  r.x = e;
  r.cos_phi_h = r.cos_phi = r.alpha = r.eta = r.mu_or_xi = nan_v;
  r.discrepancy = nan_v;
  r.env_min = 0.0;
  r.env_max = 1.0;

  const double nu = exterior_velocity(e, dev.exterior_potential, dev.exterior_mass);
  r.t_n = transmission_from_m(w_to_m(device_w(dev, e), nu));
  if (!dev.generator || dev.n_half_cells < 1) return r;

  const WMatrix wr = half_cell_w(*dev.generator, e);
  const auto [cph, cp] = bloch_cos_phi(wr);
  r.cos_phi_h = cph;
  r.cos_phi = cp;
  r.zone = classify_zone(wr);
  if (r.zone == Zone::Edge || r.zone == Zone::Unknown) return r;

  const KardParams kp = kard_decompose(wr, nu);
  const int n = dev.n_half_cells;
  r.alpha = kp.alpha;
  r.eta = kp.eta;
  r.mu_or_xi = kp.mu;
  if (kp.allowed()) {
    const Envelope env = envelopes(kp, parity_of(n));
    r.env_min = env.lower;
    r.env_max = env.upper;
    const double tc = (n % 2 == 0) ? transmission_even(kp, nu, n / 2)
                                   : transmission_odd(kp, nu, n / 2);
    r.discrepancy = std::abs(tc - r.t_n);
  } else {
    const ForbiddenT ft = transmission_forbidden(kp, n);
    r.env_min = 0.0;  // no lower limit in a forbidden zone
    r.env_max = ft.upper_bound;
    r.discrepancy = std::abs(ft.t - r.t_n);
  }
  return r;
}

}  // namespace

std::vector<SweepRecord> sweep(const Device& device,
                               const std::vector<double>& e_grid) {
  for (std::size_t i = 1; i < e_grid.size(); ++i)
    if (!(e_grid[i] > e_grid[i - 1]))
      throw std::invalid_argument("sweep: grid must be strictly increasing");
  std::vector<SweepRecord> records;
  records.reserve(e_grid.size());
  for (const double e : e_grid) {
    if (e <= device.exterior_potential) continue;  // no propagating channel
    records.push_back(point_record(device, e));
  }
  return records;
}

std::vector<SweepRecord> sweep(const HalfCellSpec& spec, int n_half,
                               Ordering ordering,
                               const std::vector<double>& e_grid) {
  return sweep(build_biperiodic(spec, n_half, ordering), e_grid);
}

}  // namespace bilat
