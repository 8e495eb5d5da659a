#ifndef BILAT_TMATRIX_HPP
#define BILAT_TMATRIX_HPP

#include <complex>
#include <span>
#include <vector>

#include "bilat/device.hpp"

// Conventions
// -----------
// The spinor (psi, D) with D = (K2/m*) dpsi/dx is continuous across
// interfaces (BenDaniel-Duke matching); K2 = hbar^2/m_e in meV nm^2.
// A real unimodular W matrix propagates the spinor from the left edge of a
// region to its right edge:
//
//     ( psi )        ( g  u  ) ( psi )
//     (  D  )      = ( g' u' ) (  D  )         W_R = [[g, u], [g', u']]
//            right                    left
//
// Columns are the solutions g (g(0)=1, D(0)=0) and u (u(0)=0, D(0)=1); the
// prime means "differentiate, then rescale by K2/m*".  Composition is
// right-to-left: for regions 1,2,... left to right, W = ... W_2 W_1.
// The complex M matrix relates flux-normalized plane-wave amplitudes on the
// two sides; 1/t_N = M11, and |M11|^2 - |M21|^2 = det W = 1.
namespace bilat {

struct WMatrix {
  double g = 1.0;   // w11
  double u = 0.0;   // w12
  double gp = 0.0;  // w21
  double up = 1.0;  // w22

  double det() const { return g * up - u * gp; }
  double trace_half() const { return 0.5 * (g + up); }
  static WMatrix identity() { return {}; }
};

// Matrix product (rhs acts first).
WMatrix operator*(const WMatrix& lhs, const WMatrix& rhs);

struct MMatrix {
  std::complex<double> m11, m12, m21, m22;
  double nu = 0.0;  // exterior velocity the matrix was built with

  std::complex<double> det() const { return m11 * m22 - m12 * m21; }
};

// Scaled velocity of a propagating wave: nu_q = K2 q / m*.
double velocity(double q, double mass);

// Exterior velocity at energy E above a propagating lead (V, m*).
// Throws std::domain_error when E <= V (evanescent exterior unsupported).
double exterior_velocity(double e, double potential, double mass);

// W matrix of one constant layer at energy E.  E > V gives trig entries,
// E < V hyperbolic ones (purely real arithmetic), |E - V| < 1e-9 meV the
// series limit g = 1, u = w m*/K2.
WMatrix layer_w(const Layer& layer, double e);

// Product over layers ordered left-to-right in space.  Throws
// std::invalid_argument on an empty list.
WMatrix compose(std::span<const WMatrix> ws);
WMatrix compose(const std::vector<WMatrix>& ws);

// W of a whole device's layer stack at energy E.
WMatrix device_w(const Device& d, double e);

// W_R of the half-cell a|b|c traversed left to right.
WMatrix half_cell_w(const HalfCellSpec& spec, double e);

// Mirror image: swaps g and u'.  This is W_L.
WMatrix reverse_half_cell(const WMatrix& w);

// W = W_R W_L: diagonal entries g u' + g' u, off-diagonals 2ug and 2u'g'.
WMatrix double_cell_w(const WMatrix& w_r);

// W^n via the Chebyshev identity W^N = U_{N-1}(x) W - U_{N-2}(x) I with
// x = tr W/2; falls back to binary powering when |x| > 1 - 1e-12 (the
// sin phi denominator cancels catastrophically near band edges).
WMatrix w_power_cheb(const WMatrix& w, int n);

// M = L^-1 W^-1 L at equal exterior velocities nu > 0:
//   M11 = (g + u')/2 - i (nu u - g'/nu)/2,   M22 = conj(M11)
//   M12 = (u' - g)/2 + i (nu u + g'/nu)/2,   M21 = conj(M12)
// Throws std::domain_error for nu <= 0.
MMatrix w_to_m(const WMatrix& w, double nu);

// T = |1/M11|^2 in (0, 1].  Throws std::domain_error if M11 == 0 (impossible
// for a pseudo-unitary M; guards corrupted input).
double transmission_from_m(const MMatrix& m);

}  // namespace bilat

#endif
