#include "fluxtune/noise.hpp"

#include "fluxtune/constants.hpp"
#include "fluxtune/perturb.hpp"

#include <cmath>
#include <stdexcept>

namespace fluxtune {

namespace {

using constants::e_charge;
using constants::flux_quantum;
using constants::ghz_to_joule;
using constants::hbar;
using constants::phi0_reduced;
using constants::pi;

/// Geometric flux-noise weight M1^2 cos^2((Delta+f')/2)
/// + M2^2 cos^2((Delta-f')/2) + Delta^2 M3^2 sin^2(f'/2), in Wb^2/A^2.
double flux_channel_weight(const FluxPoint& flux, const NoiseEnv& env,
                           bool phi3_only)
{
    const double m1 = env.m1 * flux_quantum;
    const double m2 = env.m2 * flux_quantum;
    const double m3 = env.m3 * flux_quantum;
    const double c1 = std::cos((flux.delta + flux.f_prime) / 2.0);
    const double c2 = std::cos((flux.delta - flux.f_prime) / 2.0);
    const double s3 = std::sin(flux.f_prime / 2.0);
    const double w3 = flux.delta * flux.delta * m3 * m3 * s3 * s3;
    if (phi3_only) {
        return w3;
    }
    return m1 * m1 * c1 * c1 + m2 * m2 * c2 * c2 + w3;
}

double t1_flux_closed_impl(const DerivedScales& s, const FluxPoint& flux,
                           const NoiseEnv& env, bool phi3_only)
{
    const double delta_e_j =
        perturb::splitting(s, flux, perturb::Variant::full) * ghz_to_joule;
    const double ej_j = s.ej * ghz_to_joule;
    const double weight = flux_channel_weight(flux, env, phi3_only);
    const double l2 = s.lambda * s.lambda;
    return hbar * hbar * phi0_reduced * phi0_reduced * env.zr * std::exp(l2) /
           (ej_j * ej_j * delta_e_j * weight);
}

} // namespace

double flux_noise_psd(double m_phi0_per_A, double omega, double zr_ohm)
{
    if (omega <= 0.0) {
        return 0.0;
    }
    const double m = m_phi0_per_A * flux_quantum;
    return 2.0 * m * m * hbar * omega / zr_ohm;
}

double t1_flux(const DerivedScales& s, const FluxPoint& flux,
               const NoiseEnv& env)
{
    return t1_flux_closed_impl(s, flux, env, false);
}

double t1_flux_closed_phi3(const DerivedScales& s, const FluxPoint& flux,
                           const NoiseEnv& env)
{
    return t1_flux_closed_impl(s, flux, env, true);
}

double t1_flux_numeric_phi3(const AtomSolver& solver, const FluxPoint& flux,
                            const NoiseEnv& env, AtomForm form)
{
    const DerivedScales& s = solver.scales();
    const OperatorSet& ops = solver.ops();

    // dH/df' of the interaction term; only the phi_plus cosine argument
    // carries f'.
    const double pref = form == AtomForm::exact
                            ? 2.0 * s.ej * std::sin(flux.delta / 2.0)
                            : s.ej * flux.delta;
    const Matrix dv = pref * (ops.sin_phi_plus(flux.f_prime / 2.0) *
                              ops.sin_phi_minus(flux.delta / 2.0));

    const AtomLevels levels = solver.levels(flux, form);
    const double elem_ghz =
        std::abs(transition_element(dv, levels.e, levels.g));
    const double elem_j_per_wb = elem_ghz * ghz_to_joule / phi0_reduced;

    const double omega = levels.delta_e() * 2.0 * pi * 1e9; // rad/s
    const double psd = flux_noise_psd(env.m3, omega, env.zr);
    const double rate = elem_j_per_wb * elem_j_per_wb * psd / (hbar * hbar);
    return 1.0 / rate;
}

double charge_relaxation_check(const AtomLevels& levels, const Matrix& n_minus,
                               bool require_zero)
{
    const double mag =
        std::abs(transition_element(n_minus, levels.e, levels.g));
    if (require_zero && mag > 1e-10) {
        throw std::runtime_error(
            "charge_relaxation_check: |<e|n_minus|g>| = " +
            std::to_string(mag) +
            " exceeds 1e-10; parity classification is inconsistent");
    }
    return mag;
}

namespace {

/// Sum of |d(delta_e)/d(loop flux)| over the three loops, given the
/// derivatives with respect to f and f', in the same energy units per rad.
double per_loop_sum(double d_df, double d_dfp)
{
    const double d1 = 0.5 * (d_df - d_dfp);
    const double d2 = 0.5 * (d_df + d_dfp);
    return std::abs(d1) + std::abs(d2) + std::abs(d_dfp);
}

} // namespace

TphiFluxResult tphi_flux(const DerivedScales& s, const FluxPoint& flux,
                         const NoiseEnv& env, DerivMethod method,
                         const AtomSolver* solver, AtomForm form)
{
    const double a_phi = env.a_phi * flux_quantum; // Wb
    TphiFluxResult out;

    if (method == DerivMethod::closed) {
        // Per-loop derivatives of the second-order splitting, summed in
        // magnitude; a, b are inverse energies in 1/J.
        const double l2 = s.lambda * s.lambda;
        const double ej_j = s.ej * ghz_to_joule;
        const double kappa_j = ej_j * ej_j * std::exp(-l2);
        const double a = 11.0 / (3.0 * s.ec * ghz_to_joule);
        const double b = l2 / (s.eb * ghz_to_joule);
        const double cf = std::cos(flux.f_prime);
        const double sf = std::sin(flux.f_prime);
        const double d = flux.delta;

        const double d_df = -d * kappa_j * ((a - b) + (a + b) * cf);
        const double d_dfp = -0.5 * d * d * kappa_j * (a + b) * sf;
        const double sum_j_per_rad = per_loop_sum(d_df, d_dfp);
        out.t_s = hbar / (a_phi * sum_j_per_rad / phi0_reduced);
        return out;
    }

    if (solver == nullptr) {
        throw std::invalid_argument(
            "tphi_flux: numeric method requires an AtomSolver");
    }

    auto de = [&](double f, double fp) {
        return solver->delta_e(FluxPoint::from_f(f, fp), form);
    };
    auto derivs = [&](double h, double& d_df, double& d_dfp) {
        d_df = (de(flux.f + h, flux.f_prime) - de(flux.f - h, flux.f_prime)) /
               (2.0 * h);
        d_dfp = (de(flux.f, flux.f_prime + h) - de(flux.f, flux.f_prime - h)) /
                (2.0 * h);
    };

    const double h = 1e-6;
    double df_h, dfp_h, df_h2, dfp_h2;
    derivs(h, df_h, dfp_h);
    derivs(h / 2.0, df_h2, dfp_h2);

    // Richardson extrapolation of the central differences, with the
    // step-halving change as the consistency check.
    const double d_df = (4.0 * df_h2 - df_h) / 3.0;
    const double d_dfp = (4.0 * dfp_h2 - dfp_h) / 3.0;
    const double sum_h = per_loop_sum(df_h, dfp_h);
    const double sum_h2 = per_loop_sum(df_h2, dfp_h2);
    out.fd_ok = std::abs(sum_h - sum_h2) <= 0.01 * std::abs(sum_h2);

    out.d_delta_e_df = d_df;
    out.d_delta_e_dfprime = d_dfp;
    const double sum_j_per_rad = per_loop_sum(d_df, d_dfp) * ghz_to_joule;
    out.t_s = hbar / (a_phi * sum_j_per_rad / phi0_reduced);
    return out;
}

double tphi_ic(const DerivedScales& s, double delta_e_ghz, const NoiseEnv& env)
{
    const double gap_j = (delta_e_ghz - s.ec) * ghz_to_joule;
    if (!(gap_j > 0.0)) {
        throw std::domain_error(
            "tphi_ic: splitting must exceed E_c for a positive "
            "critical-current sensitivity");
    }
    return hbar / (2.0 * env.a_ic_rel * gap_j);
}

TphiChargeResult tphi_charge(const DerivedScales& s, const FluxPoint& flux,
                             const NoiseEnv& env, DerivMethod method,
                             const AtomSolver& solver, AtomForm form)
{
    TphiChargeResult out;

    // Closed form: second-order offset-charge curvature of the splitting via
    // the perturbative charge elements and energies.
    const perturb::PerturbativeLevels pl =
        perturb::energies(s, flux, perturb::Variant::full);
    const perturb::ChargeElements ce = perturb::charge_elements(s, flux);
    const double mg2 = std::norm(ce.mg);
    const double me2 = ce.me * ce.me;
    const double d_inv_ghz =
        mg2 / (pl.e_2 - pl.e_g) - me2 / (pl.e_2 - pl.e_e);
    const double d_j = d_inv_ghz / ghz_to_joule; // 1/J
    const double ec_j = s.ec * ghz_to_joule;
    const double a_c = env.a_c * e_charge; // C
    out.t_closed_s = hbar * e_charge * e_charge /
                     (8.0 * pi * pi * a_c * a_c * ec_j * ec_j *
                      std::abs(d_j));

    // Exact gap and charge element for the degeneracy guard.
    const AtomLevels levels = solver.levels(flux, form);
    out.gap_ghz = levels.e_2 - levels.e_e;
    out.m_e_mag = std::abs(
        transition_element(solver.ops().n_minus(), levels.psi_minus,
                           levels.e));

    const double h = 1e-4; // offset-charge stencil step
    const double pert_scale_ghz = 2.0 * s.ec * h * out.m_e_mag;
    out.guard = std::abs(out.gap_ghz) < 100.0 * pert_scale_ghz;

    if (method == DerivMethod::numeric && !out.guard) {
        // delta_e(n_g) is even in n_g, so the one-sided stencil suffices.
        const double v0 = levels.delta_e();
        const double vh =
            solver.delta_e_offset_charge(flux, form, h, levels);
        const double v2h =
            solver.delta_e_offset_charge(flux, form, 2.0 * h, levels);
        const double d2_h = 2.0 * (vh - v0) / (h * h);
        const double d2_2h = (v2h - v0) / (2.0 * h * h);
        const double d2 = (4.0 * d2_h - d2_2h) / 3.0; // GHz per n_g^2
        out.fd_ok = std::abs(d2_h - d2_2h) <= 0.01 * std::abs(d2);
        out.t_numeric_s =
            hbar / (pi * pi * env.a_c * env.a_c *
                    std::abs(d2) * ghz_to_joule);
    }

    if (out.guard) {
        // Near the |e> / |psi_-> crossing both second-order expressions
        // diverge; report the exact two-level response at the noise
        // amplitude instead, expressed as an effective first-order slope.
        const double dn = env.a_c;
        const double c_e = 2.0 * s.ec * out.m_e_mag * dn;
        const double mg_mag = std::abs(
            transition_element(solver.ops().n_minus(), levels.psi_minus,
                               levels.g));
        const double c_g = 2.0 * s.ec * mg_mag * dn;
        const double g_gap = levels.e_2 - levels.e_g;
        const double sign = std::copysign(1.0, out.gap_ghz);
        const double e_like =
            0.5 * (levels.e_e + levels.e_2) -
            sign * std::sqrt(0.25 * out.gap_ghz * out.gap_ghz + c_e * c_e);
        const double g_like = levels.e_g - c_g * c_g / g_gap;
        const double shift_ghz =
            (e_like - g_like) - (levels.e_e - levels.e_g);
        const double slope_j = std::abs(shift_ghz) / dn * ghz_to_joule;
        out.t_s = hbar / (env.a_c * slope_j);
    } else if (method == DerivMethod::numeric) {
        out.t_s = out.t_numeric_s;
    } else {
        out.t_s = out.t_closed_s;
    }
    return out;
}

NoiseBudget budget(const DerivedScales& s, const FluxPoint& flux,
                   const NoiseEnv& env, const AtomSolver& solver,
                   AtomForm form)
{
    NoiseBudget out;
    out.t1_flux_s = t1_flux(s, flux, env);
    out.tphi_flux_s =
        tphi_flux(s, flux, env, DerivMethod::closed, &solver, form).t_s;
    out.tphi_ic_s = tphi_ic(s, solver.delta_e(flux, form), env);
    out.charge_detail =
        tphi_charge(s, flux, env, DerivMethod::closed, solver, form);
    out.tphi_charge_s = out.charge_detail.t_s;
    return out;
}

} // namespace fluxtune
