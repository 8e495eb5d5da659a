#ifndef BILAT_TESTS_HELPERS_HPP
#define BILAT_TESTS_HELPERS_HPP

#include <cmath>
#include <random>

#include "bilat/device.hpp"

// Shared fixtures: the GaAs/AlGaAs lattice the reference experiments use,
// its symmetric and near-symmetric variants, and a deterministic sampler of
// random physical specs for property batteries.
namespace bilat::testing {

// Wide well 4.3 nm, narrow well 3.8 nm, barrier 3.8 nm / 288.09 meV.
inline HalfCellSpec reference_cell() {
  return {2.15, 3.8, 1.9, 288.09, 0.074, 0.080};
}

// Wells pulled almost equal (s = 0.05 nm): narrow allowed gap.
inline HalfCellSpec near_symmetric() {
  return {2.05, 3.8, 2.0, 288.09, 0.074, 0.080};
}

// a = c: simple superlattice of period d, gap collapses.
inline HalfCellSpec symmetric() {
  return {2.025, 3.8, 2.025, 288.09, 0.074, 0.080};
}

struct SpecSampler {
  std::mt19937 eng{20260819u};

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng);
  }
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(eng);
  }
  HalfCellSpec spec() {
    return {uniform(1.5, 2.6),    uniform(3.0, 4.5),  uniform(1.5, 2.6),
            uniform(150.0, 350.0), uniform(0.06, 0.12), uniform(0.06, 0.12)};
  }
  double energy() { return uniform(1.0, 440.0); }
};

// Plain bisection (requires a sign change) for test-local node hunts.
template <typename F>
double bisect(F f, double lo, double hi, int iters = 200) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace bilat::testing

#endif
