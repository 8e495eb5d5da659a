#ifndef BILAT_BANDS_HPP
#define BILAT_BANDS_HPP

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "bilat/device.hpp"
#include "bilat/tmatrix.hpp"

// Band-structure quantities of one half-cell: log-derivatives gamma, lambda,
// Bloch phases, Z^2, and the Kard three-parameter form
//
//   W_L = [[e^alpha cos beta, sin beta / z], [-z sin beta, e^-alpha cos beta]]
//
// valid in allowed zones; forbidden zones take beta = (quadrant offset) +
// i beta_bar with z or alpha picking up the i, per the zone sign pattern.
// Zones alternate FZ0, AZ0, FZ1, AZ1, ... with increasing energy.
namespace bilat {

enum class Zone {
  FZ0, AZ0, FZ1, AZ1, FZ2, AZ2, FZ3, AZ3,
  Edge,     // some entry inside the classification dead band (band edge)
  Unknown,  // sign pattern outside the catalogue (possible at high energy)
};

bool zone_allowed(Zone z);
bool zone_forbidden(Zone z);
std::string zone_name(Zone z);

// Zone from the sign pattern (u', u, g', g).  Entries within
// 1e-12 * (matrix scale) of zero give Edge; patterns outside the table give
// Unknown.  Never throws.
Zone classify_zone(const WMatrix& w_r);

struct LogDerivs {
  double gamma = 0.0;       // g'/g
  double lambda = 0.0;      // u'/u
  bool gamma_pole = false;  // g at a node
  bool lambda_pole = false;  // u at a node
};

// gamma and lambda with pole flags where |g| or |u| < 1e-13 * scale.
LogDerivs log_derivatives(const WMatrix& w_r);

// (cos phi_h, cos phi): half-cell trace/2 and the double-cell Bloch cosine
// g u' + u g' (equal to 2 g u' - 1 by the Wronskian).
std::pair<double, double> bloch_cos_phi(const WMatrix& w_r);

// (Z^2, Z~^2) = (-gamma lambda, -g g'/(u u')).  Z~ is the impedance of the
// reversed half-cell; s -> -s swaps the two.  Poles appear as +/-inf.
std::pair<double, double> z_squared(const WMatrix& w_r);

struct KardParams {
  Zone zone = Zone::Unknown;
  double alpha = 0.0;  // asymmetry parameter, sign flips under reversal
  double beta = 0.0;   // phase in [0, 2pi) (allowed) / beta_bar >= 0 (forbidden)
  double z = 0.0;      // impedance z > 0 (allowed) / z_bar > 0 (forbidden)
  double eta = 0.0;    // sinh eta = (nu/z - z/nu)/2, eta_bar in forbidden zones
  double mu = 0.0;     // eta - alpha; in forbidden zones xi (mu = xi + i pi/2)
  bool pattern_extrapolated = false;  // AZ3/FZ3: quadrant beyond the catalogue

  bool allowed() const { return zone_allowed(zone); }
};

// Decomposes W_R at exterior velocity nu > 0.  Throws std::domain_error on
// Edge/Unknown patterns (message carries the four signs) and nu <= 0.
KardParams kard_decompose(const WMatrix& w_r, double nu);

// (mu, Z, cos phi) of the double cell: Z = z e^alpha, mu = ln(nu/Z) = eta -
// alpha (the two formulas agree to 1e-9), cos phi = cos 2 beta.  In
// forbidden zones mu is xi = eta_bar - alpha (zone marker in kp.zone) and
// cos phi = +/- cosh 2 beta_bar continuation.
struct DoubleCellKard {
  double mu = 0.0;  // xi when forbidden
  double z_big = 0.0;  // Z = z e^alpha
  double cos_phi = 0.0;
};
DoubleCellKard double_cell_kard(const KardParams& kp, double nu);

// Odd-chain Bloch cosine: cos phi_N = cosh alpha cos((2n+1) beta) for
// N = 2n+1 half-cells.  Allowed zones only (std::domain_error otherwise).
double cos_phi_odd(const KardParams& kp, int n);

enum class EdgeKind { LowerOuter, GapLower, GapUpper, UpperOuter };
enum class EdgeFunction { NodeOfG, NodeOfUprime, CosPhiUnity };

struct BandEdge {
  double energy = 0.0;  // meV
  EdgeKind kind = EdgeKind::LowerOuter;
  EdgeFunction which = EdgeFunction::CosPhiUnity;
};

struct BandEdgeScan {
  std::vector<BandEdge> edges;  // sorted by energy
  std::vector<std::string> warnings;
};

// Locates band edges on [e_lo, e_hi] by bracketing the nodes of the four
// W_R entries on a uniform grid of `resolution` points and bisecting to
// 1e-6 meV.  Nodes of g / u' are gap edges (cos phi = -1); nodes of u / g'
// are outer edges (cos phi = +1).  Unresolved adjacent edges produce a
// warning, not an error.
BandEdgeScan find_band_edges(const HalfCellSpec& spec, double e_lo,
                             double e_hi, int resolution);

// Fixed points of the half-cell Mobius recursion for trajectory plots:
// allowed zone gives the real pair (tanh mu/2, coth mu/2); a forbidden zone
// maps mu -> xi + i pi/2, putting the conjugate pair on the unit circle.
std::pair<std::complex<double>, std::complex<double>> fixed_points(
    double mu, double cos_phi, Zone zone);

}  // namespace bilat

#endif
