#ifndef BILAT_SRC_ROOTFIND_HPP
#define BILAT_SRC_ROOTFIND_HPP

#include <cmath>
#include <utility>

// Derivative-free bracketing helpers shared by the solver modules.
namespace bilat::detail {

// Bisection on a bracketing interval (f(lo) and f(hi) of opposite sign);
// returns the midpoint of the final interval of width <= tol.
template <class F>
double bisect(F&& f, double lo, double hi, double tol) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Golden-section search for a local maximum inside [lo, hi].
template <class F>
double golden_max(F&& f, double lo, double hi, double tol) {
  constexpr double gr = 0.6180339887498949;  // (sqrt 5 - 1)/2
  double c = hi - gr * (hi - lo);
  double d = lo + gr * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace bilat::detail

#endif
