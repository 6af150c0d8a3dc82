#ifndef FLUXTUNE_PERTURB_HPP
#define FLUXTUNE_PERTURB_HPP

#include "fluxtune/coupling.hpp"
#include "fluxtune/hilbert.hpp"
#include "fluxtune/params.hpp"

#include <complex>

namespace fluxtune::perturb {

/// Selects between the second-order results with full energy denominators
/// (E_b +- E_c, E_b + 3 E_c; the default) and the simplified large-E_b
/// printed forms.
enum class Variant { full, simplified };

/// Second-order perturbative energies of the three relevant levels, in GHz.
struct PerturbativeLevels {
    double e_g = 0.0;
    double e_e = 0.0;
    double e_2 = 0.0; ///< odd-parity excited state |psi_->
    double delta_e = 0.0;
};

/// Zero-order energy (n + 1/2) E_b + E_c n_minus^2 + 4 E_J.
double zero_order_energy(int n, int n_minus, const DerivedScales& s);

PerturbativeLevels energies(const DerivedScales& s, const FluxPoint& flux,
                            Variant variant = Variant::full);

/// Energy splitting delta E = E_e - E_g.
double splitting(const DerivedScales& s, const FluxPoint& flux,
                 Variant variant = Variant::full);

/// Two-level matrix elements of phi_plus; the off-diagonal element is purely
/// imaginary, the diagonal ones real.
struct PhiElements {
    std::complex<double> eg; ///< <e|phi+|g>
    std::complex<double> gg; ///< <g|phi+|g>
    std::complex<double> ee; ///< <e|phi+|e>
};

PhiElements phi_elements(const DerivedScales& s, const FluxPoint& flux,
                         Variant variant = Variant::full);

/// Coupling coefficients built from the perturbative phi_plus elements (the
/// same combinations as the exact path); gx is identically zero.
CouplingSet couplings(const DerivedScales& s, const FluxPoint& flux,
                      Variant variant = Variant::full);

/// g/omega_c via the device-parameter scaling form
/// sqrt(8 w0/wc) Delta lambda^4 (E_J/E_c) e^{-lambda^2/2} sin(f'/2);
/// algebraically identical to couplings().g / cavity_ghz.
double g_over_wc_scaling(const DerivedScales& s, const FluxPoint& flux);

/// Charge matrix elements coupling |psi_-> to the qubit states.
struct ChargeElements {
    std::complex<double> mg; ///< <psi_-|n_minus|g>
    double me = 0.0;         ///< <psi_-|n_minus|e>
};

ChargeElements charge_elements(const DerivedScales& s, const FluxPoint& flux);

} // namespace fluxtune::perturb

#endif
