#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bilat/bands.hpp"
#include "bilat/device.hpp"
#include "bilat/tmatrix.hpp"
#include "bilat/transmission.hpp"
#include "doctest.h"
#include "helpers.hpp"

namespace {

using namespace bilat;
using testing::reference_cell;

// Direct ground truth: M-matrix product across the explicit layer stack.
double direct_t(const HalfCellSpec& spec, int n_half, Ordering ord, double e) {
  const Device dev = build_biperiodic(spec, n_half, ord);
  const double nu = exterior_velocity(e, 0.0, spec.well_mass);
  return transmission_from_m(w_to_m(device_w(dev, e), nu));
}

KardParams kard_at(const HalfCellSpec& spec, double e) {
  return kard_decompose(half_cell_w(spec, e), exterior_nu(spec)(e));
}

TEST_CASE("transmission: closed forms match the direct product in-band") {
  const HalfCellSpec spec = reference_cell();
  const NuOfE nu_of = exterior_nu(spec);
  for (double e : {91.8, 93.0, 95.0, 96.5, 111.0, 115.0, 118.0}) {
    const KardParams kp = kard_at(spec, e);
    REQUIRE(kp.allowed());
    CAPTURE(e);
    for (int n_double : {1, 3, 6}) {
      const double closed = transmission_even(kp, nu_of(e), n_double);
      CHECK(std::abs(closed - direct_t(spec, 2 * n_double, Ordering::WideFirst, e)) < 1e-9);
    }
    for (int n : {1, 3}) {
      const double closed = transmission_odd(kp, nu_of(e), n);
      CHECK(std::abs(closed - direct_t(spec, 2 * n + 1, Ordering::WideFirst, e)) < 1e-9);
    }
  }
}

TEST_CASE("transmission: argument validation") {
  const HalfCellSpec spec = reference_cell();
  const KardParams in_band = kard_at(spec, 95.0);
  const KardParams in_gap = kard_at(spec, 104.0);
  CHECK_THROWS_AS(transmission_even(in_gap, 1.0, 2), std::domain_error);
  CHECK_THROWS_AS(transmission_odd(in_gap, 1.0, 2), std::domain_error);
  CHECK_THROWS_AS(transmission_even(in_band, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(transmission_odd(in_band, 1.0, -1), std::invalid_argument);
  CHECK_THROWS_AS(transmission_forbidden(in_band, 4), std::domain_error);
  CHECK_THROWS_AS(transmission_forbidden(in_gap, 0), std::invalid_argument);
  CHECK(parity_of(6) == Parity::Even);
  CHECK(parity_of(7) == Parity::Odd);
}

TEST_CASE("transmission: transparent state") {
  const HalfCellSpec spec = reference_cell();
  const NuOfE nu_of = exterior_nu(spec);

  SUBCASE("frozen locations, wide lower / narrow upper") {
    const auto wide_lower = find_transparent(spec, nu_of, 91.56, 96.82);
    REQUIRE(wide_lower.has_value());
    CHECK(*wide_lower == doctest::Approx(96.73673400463345).epsilon(1e-9));

    HalfCellSpec swapped = spec;
    std::swap(swapped.a, swapped.c);
    const auto narrow_upper =
        find_transparent(swapped, exterior_nu(swapped), 110.62, 118.58);
    REQUIRE(narrow_upper.has_value());
    CHECK(*narrow_upper == doctest::Approx(110.74260447091548).epsilon(1e-9));

    // The complementary bands hold no mu root for either ordering.
    CHECK(!find_transparent(spec, nu_of, 110.62, 118.58).has_value());
    CHECK(!find_transparent(swapped, exterior_nu(swapped), 91.56, 96.82)
               .has_value());
  }

  SUBCASE("mu vanishes there; even chains transmit fully, odd pinch at the bound") {
    const double et = 96.73673400463345;
    const KardParams kp = kard_at(spec, et);
    CHECK(std::abs(kp.mu) < 1e-8);
    for (int n_half : {2, 4, 6, 10})
      CHECK(std::abs(direct_t(spec, n_half, Ordering::WideFirst, et) - 1.0) < 1e-9);
    const double pinch = 1.0 / (std::cosh(kp.alpha) * std::cosh(kp.alpha));
    CHECK(std::abs(direct_t(spec, 7, Ordering::WideFirst, et) - pinch) < 1e-9);
  }

  SUBCASE("an interval straddling a zone boundary is rejected") {
    CHECK_THROWS_AS(find_transparent(spec, nu_of, 95.0, 105.0), std::domain_error);
  }
}

TEST_CASE("transmission: odd-N envelopes contain T and order correctly") {
  const HalfCellSpec spec = reference_cell();
  const NuOfE nu_of = exterior_nu(spec);
  for (auto band : {std::pair{91.56, 96.82}, std::pair{110.62, 118.58}}) {
    const int n_pts = 2001;
    for (int i = 0; i < n_pts; ++i) {
      const double e = band.first + (band.second - band.first) * i / (n_pts - 1);
      const KardParams kp = kard_at(spec, e);
      const double t = transmission_odd(kp, nu_of(e), 3);  // N = 7
      const Envelope env = envelopes(kp, Parity::Odd);
      CAPTURE(e);
      CHECK(env.upper >= env.lower);
      CHECK(env.lower > 0.0);
      CHECK(t <= env.upper + 1e-9);
      CHECK(t >= env.lower - 1e-9);
      CHECK(env.eta_dominant == (std::abs(kp.eta) > std::abs(kp.alpha)));
    }
  }

  SUBCASE("even-N envelope: unit ceiling, 1/cosh^2 mu floor") {
    const double e = 94.0;
    const KardParams kp = kard_at(spec, e);
    const Envelope env = envelopes(kp, Parity::Even);
    CHECK(env.upper == 1.0);
    CHECK(env.lower ==
          doctest::Approx(1.0 / (std::cosh(kp.mu) * std::cosh(kp.mu)))
              .epsilon(1e-12));
    CHECK_THROWS_AS(envelopes(kard_at(spec, 104.0), Parity::Even),
                    std::domain_error);
  }
}

TEST_CASE("transmission: forbidden-zone decay") {
  const HalfCellSpec spec = reference_cell();
  const NuOfE nu_of = exterior_nu(spec);

  for (double e : {100.0, 104.0, 108.0}) {
    const KardParams kp = kard_at(spec, e);
    REQUIRE(kp.zone == Zone::FZ1);
    CAPTURE(e);

    double prev_even = 2.0, prev_odd = 2.0;
    for (int n_half = 2; n_half <= 9; ++n_half) {
      const ForbiddenT ft = transmission_forbidden(kp, n_half);
      // Against the direct product.
      CHECK(std::abs(ft.t - direct_t(spec, n_half, Ordering::WideFirst, e)) < 1e-9);
      // Below the regime bound.
      CHECK(ft.t <= ft.upper_bound + 1e-12);
      CHECK(ft.upper_bound <= 1.0);
      // Monotone decay within each parity class.
      if (n_half % 2 == 0) {
        CHECK(ft.t < prev_even);
        prev_even = ft.t;
        CHECK(ft.upper_bound == 1.0);
      } else {
        CHECK(ft.t < prev_odd);
        prev_odd = ft.t;
        CHECK(ft.upper_bound < 1.0);
      }
    }
  }
}

TEST_CASE("transmission: resonance catalogue of the reference lattice") {
  const HalfCellSpec spec = reference_cell();
  const NuOfE nu_of = exterior_nu(spec);

  SUBCASE("N = 6 lower band: two integer-pi maxima plus the transparent one") {
    const ResonanceReport rep =
        find_resonances(spec, nu_of, 6, 91.56, 96.82, "lower");
    CHECK(rep.band == "lower");
    REQUIRE(rep.transparent_energy.has_value());
    CHECK(*rep.transparent_energy == doctest::Approx(96.73673400463345).epsilon(1e-9));
    REQUIRE(rep.resonances.size() == 3);

    CHECK(rep.resonances[0].energy == doctest::Approx(92.56163598).epsilon(1e-7));
    CHECK(rep.resonances[0].rule == ResonanceRule::IntegerPi);
    CHECK(rep.resonances[0].phase_residual < 1e-6);

    CHECK(rep.resonances[1].energy == doctest::Approx(95.09099082).epsilon(1e-7));
    CHECK(rep.resonances[1].rule == ResonanceRule::IntegerPi);
    CHECK(rep.resonances[1].phase_residual < 1e-6);

    CHECK(rep.resonances[2].energy == doctest::Approx(96.73673401).epsilon(1e-7));
    CHECK(rep.resonances[2].rule == ResonanceRule::Transparent);
    CHECK(rep.resonances[2].phase_residual > 0.05);  // off both phase rules

    for (const Resonance& r : rep.resonances) CHECK(std::abs(r.t - 1.0) < 1e-9);
  }

  SUBCASE("N = 6 upper band: integer-pi maxima only, no transparent state") {
    const ResonanceReport rep =
        find_resonances(spec, nu_of, 6, 110.62, 118.58, "upper");
    CHECK(!rep.transparent_energy.has_value());
    REQUIRE(rep.resonances.size() == 2);
    for (const Resonance& r : rep.resonances) {
      CHECK(r.rule == ResonanceRule::IntegerPi);
      CHECK(r.phase_residual < 1e-6);
      CHECK(std::abs(r.t - 1.0) < 1e-9);
    }
  }

  SUBCASE("N = 7: three touch points per band, phases on the integer lattice") {
    for (auto band : {std::pair{91.56, 96.82}, std::pair{110.62, 118.58}}) {
      const ResonanceReport rep = find_resonances(spec, nu_of, 7, band.first,
                                                  band.second, "band");
      REQUIRE(rep.resonances.size() == 3);
      for (const Resonance& r : rep.resonances) {
        CHECK(r.rule == ResonanceRule::IntegerPi);
        CHECK(r.phase_residual < 1e-9);
        // Odd chain: the maximum touches the upper envelope, not unity.
        const Envelope env = envelopes(kard_at(spec, r.energy), Parity::Odd);
        CHECK(std::abs(r.t - env.upper) < 1e-9);
      }
    }
  }

  SUBCASE("transparent maxima for N in {4, 6, 10} agree to 1e-4 meV") {
    std::vector<double> at;
    for (int n : {4, 6, 10}) {
      const ResonanceReport rep =
          find_resonances(spec, nu_of, n, 91.56, 96.82, "lower");
      for (const Resonance& r : rep.resonances)
        if (r.rule == ResonanceRule::Transparent) {
          at.push_back(r.energy);
          CHECK(std::abs(r.t - 1.0) < 1e-9);
        }
    }
    REQUIRE(at.size() == 3);
    const auto [mn, mx] = std::minmax_element(at.begin(), at.end());
    CHECK(*mx - *mn < 1e-4);
  }

  SUBCASE("N = 35, swapped ordering: half-integer maximum below the transparent point") {
    HalfCellSpec swapped = spec;
    std::swap(swapped.a, swapped.c);
    const NuOfE nu_sw = exterior_nu(swapped);
    const auto et = find_transparent(swapped, nu_sw, 110.62, 118.58);
    REQUIRE(et.has_value());
    const ResonanceReport rep = find_resonances(
        swapped, nu_sw, 35, 110.6003296691392 + 1e-4, *et, "upper");
    REQUIRE(rep.resonances.size() >= 1);
    CHECK(rep.resonances[0].rule == ResonanceRule::HalfInteger);
    CHECK(rep.resonances[0].phase_residual < 1e-3);
    CHECK(rep.resonances[0].energy == doctest::Approx(110.68600097).epsilon(1e-6));
  }

  SUBCASE("argument validation") {
    CHECK_THROWS_AS(find_resonances(spec, nu_of, 1, 91.56, 96.82, "x"),
                    std::invalid_argument);
    CHECK_THROWS_AS(find_resonances(spec, nu_of, 6, 96.82, 91.56, "x"),
                    std::invalid_argument);
  }
}

TEST_CASE("transmission: sweep records") {
  const HalfCellSpec spec = reference_cell();

  SUBCASE("generator device: kard columns filled, closed form agrees") {
    std::vector<double> grid;
    for (double e = 92.0; e <= 96.5; e += 0.5) grid.push_back(e);
    const auto rows = sweep(spec, 6, Ordering::WideFirst, grid);
    REQUIRE(rows.size() == grid.size());
    for (size_t i = 0; i < rows.size(); ++i) {
      const SweepRecord& r = rows[i];
      CHECK(r.x == grid[i]);
      CHECK(r.zone == Zone::AZ0);
      CHECK(std::isfinite(r.alpha));
      CHECK(std::isfinite(r.mu_or_xi));
      CHECK(r.t_n > 0.0);
      CHECK(r.t_n <= 1.0 + 1e-12);
      CHECK(r.env_min <= r.t_n + 1e-9);
      CHECK(r.t_n <= r.env_max + 1e-9);
      REQUIRE(std::isfinite(r.discrepancy));
      CHECK(r.discrepancy < 1e-9);
    }
  }

  SUBCASE("gap rows: forbidden zone, vanishing ceiling for long chains") {
    std::vector<double> grid{100.0, 104.0, 108.0};
    const auto rows = sweep(spec, 12, Ordering::WideFirst, grid);
    for (const SweepRecord& r : rows) {
      CHECK(r.zone == Zone::FZ1);
      CHECK(r.env_min == 0.0);
      CHECK(r.t_n < 1e-4);
      CHECK(r.discrepancy < 1e-9);
    }
  }

  SUBCASE("plain layer device: no closed-form columns, free stack transmits") {
    Device dev;
    dev.layers = {{10.0, 0.0, 0.074}};
    dev.exterior_mass = 0.074;
    const auto rows = sweep(dev, {50.0, 100.0});
    REQUIRE(rows.size() == 2);
    for (const SweepRecord& r : rows) {
      CHECK(r.t_n == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(std::isnan(r.alpha));
      CHECK(std::isnan(r.discrepancy));
      CHECK(r.env_min == 0.0);
      CHECK(r.env_max == 1.0);
    }
  }

  SUBCASE("grid discipline") {
    const Device dev = build_biperiodic(spec, 2, Ordering::WideFirst);
    CHECK_THROWS_AS(sweep(dev, {95.0, 94.0}), std::invalid_argument);
    CHECK_THROWS_AS(sweep(dev, {95.0, 95.0}), std::invalid_argument);
    // Points at or below the propagation threshold are skipped, not fatal.
    const auto rows = sweep(dev, {-5.0, 0.0, 95.0});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].x == 95.0);
  }
}

TEST_CASE("transmission: spatial reversal leaves T invariant") {
  const HalfCellSpec spec = reference_cell();
  auto t_of = [&](const Device& dev, double e) {
    const double nu = exterior_velocity(e, 0.0, dev.exterior_mass);
    return transmission_from_m(w_to_m(device_w(dev, e), nu));
  };
  for (double e : {93.0, 100.0, 115.0, 200.0}) {
    for (int n : {1, 2, 5, 6, 9}) {
      const Device dev = build_biperiodic(spec, n, Ordering::WideFirst);
      CHECK(std::abs(t_of(dev, e) - t_of(reverse_device(dev), e)) < 1e-10);
      if (n % 2 == 1) {
        // Odd N: the narrow-first build IS the reversed wide-first device.
        CHECK(std::abs(direct_t(spec, n, Ordering::WideFirst, e) -
                       direct_t(spec, n, Ordering::NarrowFirst, e)) < 1e-10);
      }
    }
  }
  // Even N is different: both orderings are palindromes (self-reversed), but
  // they are distinct devices -- outer half-wells and interior wells swap
  // roles -- so their transmissions genuinely differ.
  CHECK(std::abs(direct_t(spec, 2, Ordering::WideFirst, 93.0) -
                 direct_t(spec, 2, Ordering::NarrowFirst, 93.0)) > 1e-3);
}

TEST_CASE("transmission: exterior velocity helper") {
  const HalfCellSpec spec = reference_cell();
  const NuOfE nu_of = exterior_nu(spec);
  CHECK(nu_of(95.0) == exterior_velocity(95.0, 0.0, spec.well_mass));
  CHECK_THROWS_AS(nu_of(0.0), std::domain_error);
}

}  // namespace
