#ifndef BILAT_ORACLE_HPP
#define BILAT_ORACLE_HPP

#include "bilat/device.hpp"
#include "bilat/tmatrix.hpp"

// Brute-force validation: fine uniform slicing of the device with exact
// per-slice constant-coefficient matrices.  Each slice propagates (psi, D)
// by exp(h A_bar) with A_bar the slice average of A = [[0, m*/K2],
// [-K2 q^2/m*, 0]] — exactly unimodular, so det drift is a pure bug
// detector.  Converges to compose() at second order (ratio ~4 per halving).
namespace bilat {

struct OracleConfig {
  double slice_width = 1e-3;  // nm, > 0
  bool richardson = false;    // (4 W_{h/2} - W_h)/3 extrapolation
};

// Sliced propagation across the whole device at energy e (meV).
WMatrix integrate_w(const Device& device, double e, const OracleConfig& cfg);

// Square barrier of the given width with V * width = 2 Omega held at the
// delta-equivalent area, in the delta model's dimensionless units (d = 1,
// psi_xx = (V - E) psi, E = (kd)^2).  Realizes the ideal
// W_delta = [[1,0],[2 Omega,1]] factor as width -> 0, first order in width.
WMatrix delta_limit_w(double omega, double width, double e);

// Entrywise max absolute difference.
double compare(const WMatrix& a, const WMatrix& b);

}  // namespace bilat

#endif
