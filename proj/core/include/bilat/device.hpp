#ifndef BILAT_DEVICE_HPP
#define BILAT_DEVICE_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bilat {

// Raised on malformed or contradictory device configuration input.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One constant-potential region.
struct Layer {
  double width = 0.0;      // nm, >= 0 (0 acts as identity)
  double potential = 0.0;  // meV, relative to the well bottom
  double mass = 1.0;       // relative effective mass m*, > 0
};

// Half-cell a|b|c: two well segments around one barrier.  d = a + b + c is
// the half period; s = a - c is the asymmetry (any sign, |s| <= d).
struct HalfCellSpec {
  double a = 0.0;               // nm, half of the wide-well width
  double b = 0.0;               // nm, barrier width
  double c = 0.0;               // nm, half of the narrow-well width
  double barrier_height = 0.0;  // meV
  double well_mass = 1.0;
  double barrier_mass = 1.0;

  double d() const { return a + b + c; }
  double s() const { return a - c; }
};

enum class Ordering { WideFirst, NarrowFirst };

// A finite layered device.  Exterior (substrate and cap) is well material at
// the reference potential, so transmission is between equal propagating leads.
struct Device {
  std::vector<Layer> layers;
  double exterior_mass = 1.0;
  double exterior_potential = 0.0;  // meV
  int n_half_cells = 0;             // N when biperiodically generated, else 0
  Ordering ordering = Ordering::WideFirst;

  // The half-cell whose mirrored-first alternation L R L R ... reproduces
  // `layers` (already a/c-swapped for NarrowFirst); closed-form transmission
  // columns are derived from it.  Absent for hand-built layer stacks.
  std::optional<HalfCellSpec> generator;

  double total_width() const;
};

// Concatenates N alternating mirror-imaged half-cells (L R L R ...).
// WideFirst puts the wide well segment leftmost.  Adjacent equal-potential
// well segments merge into single layers; the outer half-well segments are
// kept so the total width is exactly N * d.
Device build_biperiodic(const HalfCellSpec& spec, int n_half_cells,
                        Ordering ordering);

// Layer order reversed, ordering flag flipped.
Device reverse_device(const Device& d);

// Parses a JSON config with either "layers" or a "biperiodic" generator
// block (exactly one of the two).  Throws config_error with a byte position
// on syntax errors and on invalid values.
Device parse_device(const std::string& config_text);

// Emits the canonical JSON form; parse(serialize(d)) round-trips bit-exactly.
std::string serialize_device(const Device& d);

}  // namespace bilat

#endif
