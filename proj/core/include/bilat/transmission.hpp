#ifndef BILAT_TRANSMISSION_HPP
#define BILAT_TRANSMISSION_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bilat/bands.hpp"
#include "bilat/device.hpp"
#include "bilat/tmatrix.hpp"

// |t_N|^2 for N half-cells from the Kard parameters, the two-sided
// envelope bounds, and the resonance / transparent-state locators.  Ground
// truth is always the direct M-matrix product; the closed forms here are
// cross-checks with zone bookkeeping.
namespace bilat {

enum class Parity { Even, Odd };

constexpr Parity parity_of(int n_half) {
  return (n_half % 2 == 0) ? Parity::Even : Parity::Odd;
}

// Even N = 2n: 1/T = 1 + sinh^2 mu sin^2(n phi), phi = 2 beta.
// Throws std::domain_error outside an allowed zone.
double transmission_even(const KardParams& kp, double nu, int n_double);

// Odd N = 2n+1: 1/T = cosh^2 alpha cos^2(N beta)
//                    + cosh^2 eta sin^2(N beta).
double transmission_odd(const KardParams& kp, double nu, int n);

// Forbidden zones.  Odd N:
//   FZ0/FZ2: 1/T = cosh^2 a + [cosh^2 a + sinh^2 eta_bar] sinh^2(N beta_bar)
//   FZ1/FZ3: 1/T = cosh^2 e + [sinh^2 a  + cosh^2 e      ] sinh^2(N beta_bar)
// with bounds cosh^-2 alpha / cosh^-2 eta_bar; even N continues the
// allowed-zone form: 1/T = 1 + cosh^2 xi sinh^2(N beta_bar), bound 1.
// T decays monotonically in N.  Throws std::domain_error in allowed zones.
struct ForbiddenT {
  double t = 0.0;
  double upper_bound = 0.0;
};
ForbiddenT transmission_forbidden(const KardParams& kp, int n_half);

// Two-sided bounds, ordered upper >= lower.  Odd N: {cosh^-2 alpha,
// cosh^-2 eta}, labels swapping where |eta| - |alpha| changes sign; even N:
// upper 1, lower cosh^-2 mu.  eta_dominant records the |eta| > |alpha|
// regime (odd-N upper bound is then cosh^-2 alpha).
struct Envelope {
  double upper = 1.0;
  double lower = 1.0;
  bool eta_dominant = true;
};
Envelope envelopes(const KardParams& kp, Parity parity);

// Exterior velocity as a function of energy (meV -> nm^-1 scaled units).
using NuOfE = std::function<double(double)>;

// nu(E) of the standard exterior: well material at zero potential.
NuOfE exterior_nu(const HalfCellSpec& spec);

// Root of mu(E) inside [e_lo, e_hi] (bisection to 1e-6 meV); nullopt when mu
// has no sign change.  Throws std::domain_error if the interval leaves the
// allowed zone it starts in.
std::optional<double> find_transparent(const HalfCellSpec& spec,
                                       const NuOfE& nu_of_e, double e_lo,
                                       double e_hi);

enum class ResonanceRule {
  IntegerPi,    // N beta = p pi
  HalfInteger,  // N beta = (m + 1/2) pi
  Transparent,  // maximum rides the mu = 0 crossing; phase not constrained
};

struct Resonance {
  double energy = 0.0;         // meV
  double t = 0.0;              // T_N at the maximum
  double phase_over_pi = 0.0;  // N beta / pi at the maximum
  double phase_residual = 0.0;  // rad, distance to the satisfied rule
  ResonanceRule rule = ResonanceRule::IntegerPi;
};

struct ResonanceReport {
  std::vector<Resonance> resonances;  // sorted by energy
  std::string band;                   // caller-supplied identifier
  std::optional<double> transparent_energy;
};

// Local maxima of T_N on [e_lo, e_hi] (allowed band): grid scan of the
// envelope-normalized transmission + golden-section refinement, classified
// against the phase rules with tolerance 1e-4 rad.  The normalization makes
// the maxima exact phase touch points; raw T_N maxima shift off them where
// the envelope slopes.
ResonanceReport find_resonances(const HalfCellSpec& spec, const NuOfE& nu_of_e,
                                int n_half, double e_lo, double e_hi,
                                std::string band);

// One sweep row.  x is energy in meV (device sweeps) or kd/pi (delta
// sweeps).  t_n comes from the direct M-matrix product; discrepancy is
// |closed form - t_n| where a classified zone provides one, else NaN.
// mu_or_xi is +/-inf at band edges (mu diverges there), never thrown.
struct SweepRecord {
  double x = 0.0;
  Zone zone = Zone::Unknown;
  double cos_phi_h = 0.0;
  double cos_phi = 0.0;
  double alpha = 0.0;
  double eta = 0.0;       // eta_bar in forbidden zones
  double mu_or_xi = 0.0;  // mu (allowed) / xi (forbidden)
  double t_n = 0.0;
  double env_min = 0.0;   // forbidden zones: 0 (no lower limit)
  double env_max = 0.0;   // forbidden zones: the decay-free bound
  double discrepancy = 0.0;
};

// One record per grid point (strictly increasing energies, all above the
// exterior propagation threshold).  Pure per-point work; callers may farm
// points out across threads and must order results by grid index.
std::vector<SweepRecord> sweep(const Device& device,
                               const std::vector<double>& e_grid);

// Convenience: biperiodic device from spec, plus per-point Kard data.
std::vector<SweepRecord> sweep(const HalfCellSpec& spec, int n_half,
                               Ordering ordering,
                               const std::vector<double>& e_grid);

}  // namespace bilat

#endif
