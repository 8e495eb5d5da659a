#ifndef BILAT_CLI_HPP
#define BILAT_CLI_HPP

#include <optional>
#include <string>

#include "bilat/device.hpp"

// Command-line front end: loads device configs, runs the solvers, and emits
// CSV/JSON for plotting.  Exit codes: 0 success, 1 validation failure,
// 2 config error, 3 numerical failure.
namespace bilat::cli {

enum class Format { Csv, Json };

// One fully-specified run; every flag maps onto a field.
struct RunManifest {
  std::string subcommand;           // sweep | bands | delta | validate
  std::string device_path;          // --device
  double e_min = 0.0;               // --emin  [meV]
  double e_max = 0.0;               // --emax  [meV]
  int points = 0;                   // --points, >= 2 (bands: scan resolution)
  int n_half_cells = 0;             // --half-cells, 0 keeps the device value
  std::optional<Ordering> order;    // --order wide|narrow
  std::string out_path;             // --out, empty writes to stdout
  Format format = Format::Csv;      // --format
  double omega_d_over_pi = 0.0;     // --omega-d-pi   (delta)
  double s_over_d = 0.0;            // --asym         (delta)
  double kd_min_over_pi = 0.0;      // --kdmin-pi     (delta)
  double kd_max_over_pi = 0.0;      // --kdmax-pi     (delta)
  std::optional<double> slice_width;  // --slice-width  (validate, nm)
};

int cmd_sweep(const RunManifest& m);
int cmd_bands(const RunManifest& m);
int cmd_delta(const RunManifest& m);
int cmd_validate(const RunManifest& m);

// Parses argv, dispatches, maps exceptions to exit codes.
int run(int argc, const char* const* argv);

}  // namespace bilat::cli

#endif
