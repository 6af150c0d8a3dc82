#ifndef FLUXTUNE_TEST_UTIL_HPP
#define FLUXTUNE_TEST_UTIL_HPP

#include "fluxtune/params.hpp"

namespace testutil {

/// Reference device: E_J/h = 300 GHz, E_J/E_c = 150, and the resonator
/// inductances that put the cavity at 2.00005254655 GHz.
inline fluxtune::DeviceParams reference_device()
{
    fluxtune::DeviceParams p;
    p.ej_ghz = 300.0;
    p.ec_ghz = 2.0;
    p.l0_nH = 0.06192867473;
    p.lr_nH = 12.29291953901;
    p.cavity_ghz = 2.00005254655;
    return p;
}

/// The constant-splitting target used throughout: resonant with the cavity.
inline constexpr double target_ghz = 2.00005254655;

} // namespace testutil

#endif
