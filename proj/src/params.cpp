#include "fluxtune/params.hpp"

#include "fluxtune/constants.hpp"

#include <cmath>
#include <stdexcept>

namespace fluxtune {

namespace {

void require_positive(double value, const char* field)
{
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string("parameter '") + field +
                                    "' must be strictly positive and finite");
    }
}

} // namespace

DerivedScales derive_scales(const DeviceParams& p)
{
    using namespace constants;

    require_positive(p.ej_ghz, "ej_ghz");
    require_positive(p.ec_ghz, "ec_ghz");
    require_positive(p.l0_nH, "l0_nH");
    require_positive(p.lr_nH, "lr_nH");
    require_positive(p.cavity_ghz, "cavity_ghz");
    require_positive(p.m1_phi0_per_A, "m1_phi0_per_A");
    require_positive(p.m2_phi0_per_A, "m2_phi0_per_A");
    require_positive(p.m3_phi0_per_A, "m3_phi0_per_A");
    require_positive(p.zr_ohm, "zr_ohm");
    require_positive(p.aphi_phi0, "aphi_phi0");
    require_positive(p.aic_rel, "aic_rel");
    require_positive(p.ac_e, "ac_e");
    if (p.ls_nH) {
        require_positive(*p.ls_nH, "ls_nH");
    }

    DerivedScales s;
    s.ec = p.ec_ghz;
    s.ej = p.ej_ghz;
    s.cavity_ghz = p.cavity_ghz;

    const double l0 = p.l0_nH * 1e-9;
    const double lr = p.lr_nH * 1e-9;
    const double lr_prime = 2.0 * l0 * lr / (2.0 * l0 + lr);
    s.lr_prime_nH = lr_prime * 1e9;

    // hbar*omega = phi0^2 / L, reported as omega/2pi in GHz (= E/h in GHz).
    const double phi0_sq = phi0_reduced * phi0_reduced;
    s.omega0_ghz = phi0_sq / l0 * joule_to_ghz;
    s.omegar_ghz = phi0_sq / lr * joule_to_ghz;
    s.omegar_prime_ghz = phi0_sq / lr_prime * joule_to_ghz;

    s.eb = std::sqrt(8.0 * s.omegar_prime_ghz * s.ec);
    s.lambda = std::sqrt(s.ec / s.eb);

    // E_c = e^2 / (2 C_J)  =>  C_J = e^2 / (2 E_c).
    const double cj = e_charge * e_charge / (2.0 * s.ec * ghz_to_joule);
    s.cj_fF = cj * 1e15;
    s.omegaJ_ghz = 1.0 / std::sqrt(lr * cj) / (2.0 * pi) * 1e-9;

    const double omega_c = 2.0 * pi * p.cavity_ghz * 1e9; // rad/s
    s.c0_pF = 1.0 / (l0 * omega_c * omega_c) * 1e12;

    return s;
}

ValidationReport validate_params(const DeviceParams& p, const DerivedScales& s,
                                 double margin, double lambda_max)
{
    using namespace constants;

    ValidationReport r;
    r.margin = margin;
    r.lambda_threshold = lambda_max;

    // Inductance bound 8 phi0^2 / E_c, reported in microhenry.
    const double bound_H =
        8.0 * phi0_reduced * phi0_reduced / (s.ec * ghz_to_joule);
    r.bound_uH = bound_H * 1e6;

    r.l0_ok = p.l0_nH * 1e-9 < margin * bound_H;
    r.lr_ok = p.lr_nH * 1e-9 < margin * bound_H;
    r.lambda_ok = s.lambda < lambda_max;

    if (p.ls_nH) {
        // beta_L = L_S I_c / phi0 with I_c = E_J / phi0 (E_J = phi0 I_c).
        const double ic = s.ej * ghz_to_joule / phi0_reduced;
        const double beta = *p.ls_nH * 1e-9 * ic / phi0_reduced;
        r.beta_l = beta;
        r.beta_l_ok = beta < 1.0;
    }

    r.all_ok = r.l0_ok && r.lr_ok && r.lambda_ok &&
               (!r.beta_l_ok || *r.beta_l_ok);
    return r;
}

} // namespace fluxtune
