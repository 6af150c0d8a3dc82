#ifndef FLUXTUNE_CONFIG_HPP
#define FLUXTUNE_CONFIG_HPP

#include "fluxtune/hilbert.hpp"
#include "fluxtune/params.hpp"
#include "fluxtune/perturb.hpp"
#include "fluxtune/schedule.hpp"

#include <stdexcept>
#include <string>

namespace fluxtune {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// f grid in units of pi; the schedule requires 0 < start <= stop < 1
/// strictly (the splitting is unreachable at f = pi).
struct GridSpec {
    double start_pi = 0.995;
    double stop_pi = 0.9995;
    int points = 200;
};

/// Parsed run configuration. Defaults (documented in the README): cavity
/// frequency resonant with the target splitting, exact engine, full
/// perturbative variant, exact interaction form, basis 15 x 20, schedule
/// grid [0.995, 0.9995] pi with 200 points (the exact splitting minimum
/// rises above near-resonant targets for f below about 0.99 pi, so wider
/// grids need the perturbative engine or a larger target).
struct RunConfig {
    DeviceParams device;
    double target_delta_e_ghz = 0.0; ///< defaults to device.cavity_ghz
    GridSpec f_grid;
    int n_fock = 15;
    int n_charge = 20;
    Engine engine = Engine::exact;
    perturb::Variant variant = perturb::Variant::full;
    AtomForm form = AtomForm::exact;
    double solve_tol_ghz = 1e-10;
    double validation_margin = 0.05;
    double lambda_max = 0.3;

    std::vector<double> grid_radians() const;
};

/// Strict parse of a UTF-8 JSON config document: unknown keys are rejected
/// with their path, missing required device fields are listed, and all
/// domain violations name the offending field. Throws ConfigError.
RunConfig parse_config_text(const std::string& text);

/// Reads `path` (or stdin when path is empty or "-") and parses it.
RunConfig load_config(const std::string& path);

/// Normalized JSON serialization of a config (all keys explicit);
/// parse_config_text(dump_config(c)) reproduces c.
std::string dump_config(const RunConfig& c);

} // namespace fluxtune

#endif
