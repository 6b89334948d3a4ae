// config.hpp — sectioned key-value run configuration.
//
// Format: INI-like text with [device], [drive], [probe] and [output]
// sections, '#' or ';' comments, "key = value" lines. Exactly one of the
// beta grid and the power grid may be present in [drive]; a power grid also
// needs the line parameters. Unknown keys are rejected by name.

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kpo/calibration.hpp"
#include "kpo/params.hpp"

namespace kpo {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    double min = 0.0;   // MHz (beta grid) or dBm (power grid)
    double max = 0.0;
    int steps = 1;      // number of points, >= 1
};

struct RunConfig {
    // [device]
    double delta_mhz = 0.0;
    double chi_mhz = 0.0;
    double kappa_e_mhz = 0.0;
    double kappa_i_mhz = 0.0;
    double gamma_phi_mhz = 0.0;
    int dim = 30;

    // [drive] — exactly one of the two grids
    std::optional<GridSpec> beta_grid_mhz;
    std::optional<GridSpec> power_grid_dbm;
    std::optional<double> domega_di_mhz_per_ua;
    std::optional<double> z0_ohm;
    std::optional<double> attenuation_db;

    // [probe]
    double probe_min_mhz = -15.0;
    double probe_max_mhz = 15.0;
    int probe_steps = 601;

    // [output]
    std::string directory = "out";
    std::string formats = "csv";

    KpoParams device() const;
    DriveLine line() const;                 // requires the line keys
    std::vector<double> beta_axis() const;  // angular; derived from either grid
    std::vector<double> probe_axis() const; // angular
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

} // namespace kpo
