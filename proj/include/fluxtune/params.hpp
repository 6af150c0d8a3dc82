#ifndef FLUXTUNE_PARAMS_HPP
#define FLUXTUNE_PARAMS_HPP

#include <optional>
#include <string>

namespace fluxtune {

/// Raw circuit parameters. Units: energies as E/h in GHz, inductances in nH,
/// mutual inductances in Phi0/A, impedance in Ohm, noise amplitudes in the
/// units named per field.
struct DeviceParams {
    double ej_ghz = 0.0;     ///< Josephson energy per junction E_J/h
    double ec_ghz = 0.0;     ///< charging energy E_c/h
    double l0_nH = 0.0;      ///< resonator half-inductance L_0
    double lr_nH = 0.0;      ///< atom loop inductance L_r
    double cavity_ghz = 0.0; ///< cavity frequency omega_c/2pi

    double m1_phi0_per_A = 40.0; ///< loop-1 mutual inductance (Phi0/A)
    double m2_phi0_per_A = 40.0; ///< loop-2 mutual inductance (Phi0/A)
    double m3_phi0_per_A = 35.0; ///< loop-3 mutual inductance (Phi0/A)
    double zr_ohm = 50.0;        ///< environmental impedance Z_R

    double aphi_phi0 = 1e-6; ///< flux 1/f amplitude A_Phi (Phi0)
    double aic_rel = 1e-6;   ///< relative critical-current 1/f amplitude
    double ac_e = 1e-4;      ///< charge 1/f amplitude A_c (e)

    /// Optional SQUID loop inductance for the screening-parameter check.
    std::optional<double> ls_nH;
};

/// Derived energy/frequency scales. Energies are E/h in GHz and angular
/// frequencies are omega/2pi in GHz throughout.
struct DerivedScales {
    double ec = 0.0;     ///< charging energy E_c/h
    double ej = 0.0;     ///< Josephson energy E_J/h
    double eb = 0.0;     ///< oscillator quantum E_b/h = sqrt(8 hbar*w_r' E_c)/h
    double lambda = 0.0; ///< zero-point phase spread sqrt(E_c/E_b)

    double lr_prime_nH = 0.0;     ///< L_r' = 2 L_0 L_r / (2 L_0 + L_r)
    double omega0_ghz = 0.0;      ///< hbar*w_0 = phi0^2/L_0
    double omegar_ghz = 0.0;      ///< hbar*w_r = phi0^2/L_r
    double omegar_prime_ghz = 0.0;///< hbar*w_r' = phi0^2/L_r'
    double omegaJ_ghz = 0.0;      ///< plasma frequency 1/sqrt(L_r C_J)
    double cavity_ghz = 0.0;      ///< cavity frequency (pass-through)
    double c0_pF = 0.0;           ///< resonator capacitance 1/(L_0 w_c^2)
    double cj_fF = 0.0;           ///< junction capacitance e^2/(2 E_c)
};

struct ParameterError {
    std::string field;
    std::string message;
};

/// Report of the parameter-regime checks behind the perturbative treatment.
struct ValidationReport {
    double bound_uH = 0.0; ///< inductance bound 8 phi0^2 / E_c
    double margin = 0.0;   ///< required L / bound ratio (default 0.01)
    bool l0_ok = false;
    bool lr_ok = false;
    double lambda_threshold = 0.0;
    bool lambda_ok = false;
    std::optional<double> beta_l; ///< screening parameter, if L_S supplied
    std::optional<bool> beta_l_ok;
    bool all_ok = false;
};

/// Computes all derived scales from raw parameters. Pure function; throws
/// std::invalid_argument naming the offending field for non-positive inputs.
DerivedScales derive_scales(const DeviceParams& p);

/// Checks L_0 and L_r against the bound 8 phi0^2/E_c (each must be below
/// margin * bound), lambda against lambda_max, and optionally the screening
/// parameter beta_L = L_S I_c / phi0.
ValidationReport validate_params(const DeviceParams& p, const DerivedScales& s,
                                 double margin = 0.05, double lambda_max = 0.3);

} // namespace fluxtune

#endif
