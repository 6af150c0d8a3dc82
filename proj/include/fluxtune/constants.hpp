#ifndef FLUXTUNE_CONSTANTS_HPP
#define FLUXTUNE_CONSTANTS_HPP

#include <numbers>

namespace fluxtune::constants {

// Exact SI (2019 redefinition) values; not configurable.
inline constexpr double pi = std::numbers::pi;
inline constexpr double h_planck = 6.62607015e-34;    // J s
inline constexpr double e_charge = 1.602176634e-19;   // C
inline constexpr double hbar = h_planck / (2.0 * pi); // J s

// Reduced flux quantum phi0 = hbar/2e and flux quantum Phi0 = h/2e.
inline constexpr double phi0_reduced = hbar / (2.0 * e_charge); // Wb
inline constexpr double flux_quantum = h_planck / (2.0 * e_charge); // Wb

// Unit helpers for the canonical unit system: energies are E/h in GHz,
// angular frequencies are omega/2pi in GHz, inductances nH, times s.
inline constexpr double ghz_to_joule = h_planck * 1e9; // (E/h in GHz) -> J
inline constexpr double joule_to_ghz = 1.0 / ghz_to_joule;

} // namespace fluxtune::constants

#endif
