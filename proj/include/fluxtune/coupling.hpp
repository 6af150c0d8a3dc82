#ifndef FLUXTUNE_COUPLING_HPP
#define FLUXTUNE_COUPLING_HPP

namespace fluxtune {

/// Qubit-cavity coupling coefficients of the generalized Rabi Hamiltonian,
/// reported as omega/2pi in GHz, plus the dimensionless ratios used to
/// classify the coupling regime.
struct CouplingSet {
    double g = 0.0;  ///< transverse (sigma_y) coupling
    double g0 = 0.0; ///< identity (sigma_0) coupling
    double gz = 0.0; ///< longitudinal (sigma_z) coupling
    double gx = 0.0; ///< sigma_x coupling (vanishes by parity)

    double g_over_wc = 0.0;
    double g0_over_g = 0.0;
    double gz_over_g = 0.0;
};

} // namespace fluxtune

#endif
