#ifndef FLUXTUNE_NOISE_HPP
#define FLUXTUNE_NOISE_HPP

#include "fluxtune/atom_solver.hpp"
#include "fluxtune/hilbert.hpp"
#include "fluxtune/params.hpp"

#include <cmath>

namespace fluxtune {

/// Noise environment: mutual inductances, impedance and 1/f amplitudes.
/// Zero-temperature spectral densities are assumed throughout (valid for
/// k_B T << hbar omega; not checked numerically).
struct NoiseEnv {
    double m1 = 40.0; ///< Phi0/A
    double m2 = 40.0; ///< Phi0/A
    double m3 = 35.0; ///< Phi0/A
    double zr = 50.0; ///< Ohm
    double a_phi = 1e-6; ///< flux 1/f amplitude (Phi0)
    double a_ic_rel = 1e-6; ///< relative critical-current 1/f amplitude
    double a_c = 1e-4; ///< charge 1/f amplitude (e)

    static NoiseEnv from_params(const DeviceParams& p)
    {
        return {p.m1_phi0_per_A, p.m2_phi0_per_A, p.m3_phi0_per_A, p.zr_ohm,
                p.aphi_phi0,     p.aic_rel,       p.ac_e};
    }
};

/// One-sided flux-noise spectral density 2 M^2 Theta(omega) hbar omega / Z_R
/// in SI (Wb^2 per unit angular frequency). omega in rad/s.
double flux_noise_psd(double m_phi0_per_A, double omega, double zr_ohm);

/// Closed-form flux-noise relaxation time (seconds) at a schedule point; the
/// splitting entering the golden-rule frequency is the full-variant
/// perturbative one.
double t1_flux(const DerivedScales& s, const FluxPoint& flux,
               const NoiseEnv& env);

/// Golden-rule relaxation rate of the f' (third-loop) channel from the exact
/// matrix element of dH/df', as a cross-check of the corresponding closed
/// term; returns the channel's T1 in seconds.
double t1_flux_numeric_phi3(const AtomSolver& solver, const FluxPoint& flux,
                            const NoiseEnv& env,
                            AtomForm form = AtomForm::exact);

/// Closed-form f'-channel term of the relaxation time, for comparison with
/// the numeric golden-rule path.
double t1_flux_closed_phi3(const DerivedScales& s, const FluxPoint& flux,
                           const NoiseEnv& env);

/// |<e|n_minus|g>|, the charge-noise relaxation element, which vanishes by
/// parity. Throws when `require_zero` and the magnitude exceeds 1e-10
/// (indicates a basis or classification bug).
double charge_relaxation_check(const AtomLevels& levels, const Matrix& n_minus,
                               bool require_zero = true);

enum class DerivMethod { closed, numeric };

struct TphiFluxResult {
    double t_s = 0.0;
    /// Finite-difference derivatives of the splitting (GHz/rad), populated
    /// by the numeric method.
    double d_delta_e_df = std::nan("");
    double d_delta_e_dfprime = std::nan("");
    bool fd_ok = true; ///< Richardson step-halving check passed
};

/// 1/f flux-noise dephasing time. The numeric method takes central finite
/// differences (step 1e-6 rad, with a step-halving check) of the exact
/// splitting and combines the three flux channels with the per-loop split
/// d(dE)/df1 = (d/df - d/df')/2, d(dE)/df2 = (d/df + d/df')/2,
/// d(dE)/df3 = d/df', which reproduces the closed form identically at the
/// perturbative level.
TphiFluxResult tphi_flux(const DerivedScales& s, const FluxPoint& flux,
                         const NoiseEnv& env, DerivMethod method,
                         const AtomSolver* solver = nullptr,
                         AtomForm form = AtomForm::exact);

/// Critical-current 1/f dephasing time hbar / (2 (A_Ic/I_c) (delta_e - E_c)).
double tphi_ic(const DerivedScales& s, double delta_e_ghz,
               const NoiseEnv& env);

struct TphiChargeResult {
    double t_s = 0.0;        ///< reported time (guarded value if guard is on)
    double t_closed_s = 0.0; ///< printed second-order closed form
    double t_numeric_s = std::nan(""); ///< offset-charge numeric oracle
    bool guard = false;      ///< near-degeneracy guard engaged
    double gap_ghz = 0.0;    ///< exact E_2 - E_e
    double m_e_mag = 0.0;    ///< exact |<psi_-|n_minus|e>|
    bool fd_ok = true;
};

/// Charge-noise dephasing time (second order in the 1/f amplitude). The
/// closed form uses the perturbative energies and charge elements; the
/// numeric method diagonalizes H(n_g) and takes d^2(delta_e)/dn_g^2 at
/// n_g = 0 (step 1e-4, Richardson-extrapolated). When |E_2 - E_e| is within
/// 100x the charge perturbation scale, both methods diverge and the reported
/// value falls back to the two-level avoided-crossing response evaluated at
/// the noise amplitude.
TphiChargeResult tphi_charge(const DerivedScales& s, const FluxPoint& flux,
                             const NoiseEnv& env, DerivMethod method,
                             const AtomSolver& solver,
                             AtomForm form = AtomForm::exact);

/// Aggregated per-point decoherence budget (closed-form defaults, with the
/// degeneracy-aware charge channel).
struct NoiseBudget {
    double t1_flux_s = 0.0;
    double tphi_flux_s = 0.0;
    double tphi_ic_s = 0.0;
    double tphi_charge_s = 0.0;
    TphiChargeResult charge_detail;
};

NoiseBudget budget(const DerivedScales& s, const FluxPoint& flux,
                   const NoiseEnv& env, const AtomSolver& solver,
                   AtomForm form = AtomForm::exact);

} // namespace fluxtune

#endif
