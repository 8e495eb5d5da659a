#ifndef BILAT_DELTAMODEL_HPP
#define BILAT_DELTAMODEL_HPP

#include <utility>

#include "bilat/tmatrix.hpp"

// Dimensionless biperiodic lattice of delta-function barriers: half period
// d = 1, barrier strength Omega d, asymmetry s/d.  Everything is a function
// of kd, s/d and Omega d alone; the exterior velocity rescales to nu = kd.
// The spinor basis here is (psi, psi_x) with psi_xx = (V - E) psi, so the
// delta factor is W_delta = [[1, 0], [2 Omega, 1]].
namespace bilat {

struct DeltaSpec {
  double omega_d = 0.0;   // Omega d >= 0
  double s_over_d = 0.0;  // in (-1, 1)
};

// W_R = W_c W_delta W_a at dimensionless wavenumber kd (> 0, else
// std::domain_error):
//   g  = cos kd + (Od/kd)(sin kd - sin ks)      ks = kd * s/d
//   u  = [sin kd - (Od/kd)(cos kd - cos ks)]/kd
//   g' = -kd [sin kd - (Od/kd)(cos kd + cos ks)]
//   u' = cos kd + (Od/kd)(sin kd + sin ks)
// det = 1 identically; the trace does not depend on s.
WMatrix delta_half_cell(double kd, const DeltaSpec& spec);

// Root of tr W_R = 0 (phi_h = pi/2) inside [lo, hi], to 1e-10 relative.
// Throws std::invalid_argument when the trace does not change sign there.
double delta_bragg_point(const DeltaSpec& spec, double kd_lo, double kd_hi);

// Gap edges in the bracket: node of g (pole of gamma) and node of u'.
// Returned as (kd_B, kd_C) with kd_B the node of g; kd_B < kd_C for s > 0.
// Requires s != 0; throws std::invalid_argument when a node is missing.
std::pair<double, double> delta_gap_edges(const DeltaSpec& spec, double kd_lo,
                                          double kd_hi);

}  // namespace bilat

#endif
