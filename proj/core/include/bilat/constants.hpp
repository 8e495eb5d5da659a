#ifndef BILAT_CONSTANTS_HPP
#define BILAT_CONSTANTS_HPP

// Unit system: energies in meV, lengths in nm, masses relative to the free
// electron mass.  All wavenumbers derive from q = sqrt((E - V) m* / K).
namespace bilat::constants {

inline constexpr double hbar2_over_2m = 38.0998;   // hbar^2 / 2 m_e  [meV nm^2]
inline constexpr double k2 = 2.0 * hbar2_over_2m;  // hbar^2 / m_e    [meV nm^2]

// |E - V| below this switches layer matrices to the q -> 0 series limit. [meV]
inline constexpr double e_equal_v_band = 1e-9;

// Relative dead band for zone classification: an entry this close to zero
// (on the scale of the matrix) marks a band edge rather than a zone.
inline constexpr double sign_dead_band = 1e-12;

}  // namespace bilat::constants

#endif
