#include "bilat/device.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <utility>

namespace bilat {

namespace {

using nlohmann::json;

// Appends a layer, merging into the previous one when both sit at the same
// potential with the same mass (zero-effect interface).
void push_merged(std::vector<Layer>& layers, const Layer& l) {
  if (l.width == 0.0) return;  // degenerate identity
  if (!layers.empty() && layers.back().potential == l.potential &&
      layers.back().mass == l.mass) {
    layers.back().width += l.width;
    return;
  }
  layers.push_back(l);
}

double require_number(const json& j, const char* key, const char* where) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw config_error(std::string("missing or non-numeric field '") + key +
                       "' in " + where);
  return j.at(key).get<double>();
}

void validate_layer(const Layer& l) {
  if (l.width < 0.0) throw config_error("layer width must be >= 0");
  if (l.mass <= 0.0) throw config_error("layer mass must be > 0");
  if (!std::isfinite(l.potential)) throw config_error("layer potential must be finite");
}

}  // namespace

double Device::total_width() const {
  double w = 0.0;
  for (const Layer& l : layers) w += l.width;
  return w;
}

Device build_biperiodic(const HalfCellSpec& spec, int n_half_cells,
                        Ordering ordering) {
  if (n_half_cells < 1) throw config_error("n_half_cells must be >= 1");
  if (spec.a < 0.0 || spec.b < 0.0 || spec.c < 0.0)
    throw config_error("half-cell segment widths must be >= 0");
  if (spec.d() <= 0.0) throw config_error("half-cell width d must be > 0");
  if (spec.well_mass <= 0.0 || spec.barrier_mass <= 0.0)
    throw config_error("masses must be > 0");

  HalfCellSpec eff = spec;
  if (ordering == Ordering::NarrowFirst) std::swap(eff.a, eff.c);
  const Layer wa{eff.a, 0.0, eff.well_mass};
  const Layer wb{eff.b, eff.barrier_height, eff.barrier_mass};
  const Layer wc{eff.c, 0.0, eff.well_mass};

  Device dev;
  dev.exterior_mass = eff.well_mass;  // substrate and cap are well material
  dev.exterior_potential = 0.0;
  dev.n_half_cells = n_half_cells;
  dev.ordering = ordering;
  dev.generator = eff;
  for (int i = 0; i < n_half_cells; ++i) {
    const bool mirrored = (i % 2 == 0);  // L R L R ..., L = c|b|a
    push_merged(dev.layers, mirrored ? wc : wa);
    push_merged(dev.layers, wb);
    push_merged(dev.layers, mirrored ? wa : wc);
  }
  return dev;
}

Device reverse_device(const Device& d) {
  Device rev = d;
  std::reverse(rev.layers.begin(), rev.layers.end());
  rev.ordering = (d.ordering == Ordering::WideFirst) ? Ordering::NarrowFirst
                                                     : Ordering::WideFirst;
  // Odd N: the reversed stack is the swapped spec's alternation.  Even N is
  // a palindrome, so the description is unchanged.
  if (d.generator && d.n_half_cells % 2 == 1) {
    HalfCellSpec swapped = *d.generator;
    std::swap(swapped.a, swapped.c);
    rev.generator = swapped;
  }
  return rev;
}

Device parse_device(const std::string& config_text) {
  json j;
  try {
    j = json::parse(config_text);
  } catch (const json::parse_error& e) {
    throw config_error("syntax error at byte " + std::to_string(e.byte) + ": " +
                       e.what());
  }
  if (!j.is_object()) throw config_error("config root must be an object");

  const bool has_layers = j.contains("layers");
  const bool has_gen = j.contains("biperiodic");
  if (has_layers && has_gen)
    throw config_error("both layer list and biperiodic generator present");
  if (!has_layers && !has_gen)
    throw config_error("need either 'layers' or 'biperiodic'");

  if (has_gen) {
    const json& g = j.at("biperiodic");
    if (!g.is_object()) throw config_error("'biperiodic' must be an object");
    HalfCellSpec spec;
    spec.a = require_number(g, "well_wide_nm", "biperiodic") / 2.0;
    spec.c = require_number(g, "well_narrow_nm", "biperiodic") / 2.0;
    spec.b = require_number(g, "barrier_nm", "biperiodic");
    spec.barrier_height = require_number(g, "barrier_meV", "biperiodic");
    spec.well_mass = require_number(g, "well_mass", "biperiodic");
    spec.barrier_mass = require_number(g, "barrier_mass", "biperiodic");
    if (!g.contains("half_cells") || !g.at("half_cells").is_number_integer())
      throw config_error("missing or non-integer field 'half_cells' in biperiodic");
    const int n = g.at("half_cells").get<int>();
    Ordering ordering = Ordering::WideFirst;
    if (g.contains("order")) {
      const std::string o = g.at("order").get<std::string>();
      if (o == "wide_first") ordering = Ordering::WideFirst;
      else if (o == "narrow_first") ordering = Ordering::NarrowFirst;
      else throw config_error("order must be 'wide_first' or 'narrow_first'");
    }
    return build_biperiodic(spec, n, ordering);
  }

  const json& ls = j.at("layers");
  if (!ls.is_array() || ls.empty()) throw config_error("'layers' must be a non-empty array");
  Device dev;
  for (const json& lj : ls) {
    Layer l;
    l.width = require_number(lj, "width_nm", "layer");
    l.potential = require_number(lj, "potential_meV", "layer");
    l.mass = require_number(lj, "mass", "layer");
    validate_layer(l);
    dev.layers.push_back(l);
  }
  if (j.contains("exterior_mass")) {
    dev.exterior_mass = require_number(j, "exterior_mass", "config");
    if (dev.exterior_mass <= 0.0) throw config_error("exterior_mass must be > 0");
  }
  if (j.contains("exterior_potential_meV"))
    dev.exterior_potential = require_number(j, "exterior_potential_meV", "config");
  return dev;
}

std::string serialize_device(const Device& d) {
  json j;
  if (d.generator) {
    // Emit the generator view; parse() rebuilds the identical layer list.
    HalfCellSpec s = *d.generator;  // effective (L-first) spec
    if (d.ordering == Ordering::NarrowFirst) std::swap(s.a, s.c);
    j["biperiodic"] = {
        {"well_wide_nm", 2.0 * s.a},
        {"well_narrow_nm", 2.0 * s.c},
        {"barrier_nm", s.b},
        {"barrier_meV", s.barrier_height},
        {"well_mass", s.well_mass},
        {"barrier_mass", s.barrier_mass},
        {"half_cells", d.n_half_cells},
        {"order", d.ordering == Ordering::WideFirst ? "wide_first" : "narrow_first"},
    };
  } else {
    json ls = json::array();
    for (const Layer& l : d.layers)
      ls.push_back({{"width_nm", l.width},
                    {"potential_meV", l.potential},
                    {"mass", l.mass}});
    j["layers"] = std::move(ls);
    j["exterior_mass"] = d.exterior_mass;
    j["exterior_potential_meV"] = d.exterior_potential;
  }
  return j.dump(2) + "\n";
}

}  // namespace bilat
